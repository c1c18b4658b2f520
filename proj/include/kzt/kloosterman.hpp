#pragma once

// Exact evaluation of classical, twisted, and residue-restricted Kloosterman
// sums, plus the Weil and weak-Weil bound calculators. Direct evaluation is a
// single pass over units with the inverse from extended gcd; the CRT path
// factors the modulus into prime powers and is the fast default for composite
// moduli, with the direct path retained as oracle.

#include <complex>
#include <optional>

#include "kzt/arith.hpp"
#include "kzt/dirichlet.hpp"
#include "kzt/unity.hpp"

namespace kzt::ksums {

using arith::cplx;
using arith::i64;
using arith::i128;
using arith::u64;
using dirichlet::DirichletCharacter;

enum class Variant { classical, twisted, restricted };
enum class Method { direct, crt };

struct VariantSpec {
    Variant kind = Variant::classical;
    std::optional<DirichletCharacter> chi;  // twisted
    i64 a = 1;                              // restricted: class a mod q
    i64 q = 1;

    static VariantSpec classical() { return {}; }
    static VariantSpec twisted(DirichletCharacter c) {
        VariantSpec v;
        v.kind = Variant::twisted;
        v.q = c.modulus();
        v.chi = std::move(c);
        return v;
    }
    static VariantSpec restricted(i64 a, i64 q) {
        VariantSpec v;
        v.kind = Variant::restricted;
        v.a = a;
        v.q = q;
        return v;
    }
};

struct KloostermanResult {
    cplx value;
    i64 m, n, c;
    Variant variant;
    Method method;
    i64 a = 1, q = 1;  // restricted parameters (q = character modulus for twisted)
};

namespace detail {

inline void validate(const VariantSpec& v, i64 c) {
    if (c < 1) throw std::invalid_argument("kloosterman: c must be >= 1");
    switch (v.kind) {
        case Variant::classical: break;
        case Variant::twisted:
            if (c % v.chi->modulus() != 0)
                throw std::invalid_argument("twisted kloosterman: modulus of chi must divide c");
            break;
        case Variant::restricted:
            if (v.q < 1 || c % v.q != 0)
                throw std::invalid_argument("restricted kloosterman: q must divide c");
            if (std::gcd(((v.a % v.q) + v.q) % v.q, v.q) != 1)
                throw std::invalid_argument("restricted kloosterman: need gcd(a, q) = 1");
            break;
    }
}

inline cplx eval_direct(const VariantSpec& v, i64 m, i64 n, i64 c) {
    validate(v, c);
    if (c == 1) return {1.0, 0.0};
    i64 mm = ((m % c) + c) % c;
    i64 nn = ((n % c) + c) % c;
    i64 aq = v.kind == Variant::restricted ? ((v.a % v.q) + v.q) % v.q : 0;
    cplx sum = 0.0;
    for (i64 d = 1; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        if (v.kind == Variant::restricted && d % v.q != aq) continue;
        i64 dbar = arith::invmod(d, c);
        i64 idx = i64((arith::u128(mm) * u64(d) + arith::u128(nn) * u64(dbar)) % u64(c));
        if (v.kind == Variant::twisted) {
            i64 num, den;
            if (!v.chi->phase(d, num, den)) continue;
            i64 M = std::lcm(den, c);
            i128 tot = ((i128)num * (M / den) + (i128)idx * (M / c)) % M;
            sum += arith::unit_root(i64(tot), M);
        } else {
            sum += arith::unit_root(idx, c);
        }
    }
    return sum;
}

inline cplx eval_crt(const VariantSpec& v, i64 m, i64 n, i64 c) {
    validate(v, c);
    if (c == 1) return {1.0, 0.0};
    auto fac = arith::factorize(c);
    if (fac.pairs.size() == 1) return eval_direct(v, m, n, c);
    cplx prod = 1.0;
    for (auto [p, e] : fac.pairs) {
        i64 c1 = 1;
        for (int i = 0; i < e; ++i) c1 *= p;
        i64 c2 = c / c1;
        i64 inv2 = arith::invmod(c2, c1);
        VariantSpec sub;
        switch (v.kind) {
            case Variant::classical:
                sub = VariantSpec::classical();
                break;
            case Variant::twisted: {
                i64 q1 = std::gcd(v.chi->modulus(), c1);
                sub = q1 == 1 ? VariantSpec::classical()
                              : VariantSpec::twisted(dirichlet::component_mod(*v.chi, q1));
                break;
            }
            case Variant::restricted: {
                i64 q1 = std::gcd(v.q, c1);
                sub = q1 == 1 ? VariantSpec::classical() : VariantSpec::restricted(v.a % q1, q1);
                break;
            }
        }
        i64 m1 = i64(arith::u128(((m % c1) + c1) % c1) * u64(inv2) % u64(c1));
        i64 n1 = i64(arith::u128(((n % c1) + c1) % c1) * u64(inv2) % u64(c1));
        prod *= eval_direct(sub, m1, n1, c1);
    }
    return prod;
}

}  // namespace detail

inline KloostermanResult kloosterman(i64 m, i64 n, i64 c) {
    return {detail::eval_direct(VariantSpec::classical(), m, n, c),
            m, n, c, Variant::classical, Method::direct};
}

inline KloostermanResult twisted_kloosterman(const DirichletCharacter& chi, i64 m, i64 n, i64 c) {
    auto v = VariantSpec::twisted(chi);
    return {detail::eval_direct(v, m, n, c), m, n, c, Variant::twisted, Method::direct,
            1, chi.modulus()};
}

inline KloostermanResult restricted_kloosterman(i64 a, i64 q, i64 m, i64 n, i64 c) {
    auto v = VariantSpec::restricted(a, q);
    return {detail::eval_direct(v, m, n, c), m, n, c, Variant::restricted, Method::direct, a, q};
}

// Fast evaluation through the prime-power factorisation of c.
inline KloostermanResult evaluate(const VariantSpec& v, i64 m, i64 n, i64 c,
                                  Method method = Method::crt) {
    cplx val = method == Method::crt ? detail::eval_crt(v, m, n, c) : detail::eval_direct(v, m, n, c);
    return {val, m, n, c, v.kind, method, v.a, v.q};
}

// One split c = c1 * c2 with (c1, c2) = 1, per the CRT identity.
inline KloostermanResult crt_split(const VariantSpec& v, i64 m, i64 n, i64 c1, i64 c2) {
    if (c1 < 1 || c2 < 1 || std::gcd(c1, c2) != 1)
        throw std::invalid_argument("crt_split: factors must be positive and coprime");
    i64 c = c1 * c2;
    detail::validate(v, c);
    auto piece = [&](i64 ca, i64 cb) -> cplx {
        if (ca == 1) return {1.0, 0.0};
        i64 invb = arith::invmod(cb, ca);
        VariantSpec sub;
        switch (v.kind) {
            case Variant::classical:
                sub = VariantSpec::classical();
                break;
            case Variant::twisted: {
                i64 qa = std::gcd(v.chi->modulus(), ca);
                sub = qa == 1 ? VariantSpec::classical()
                              : VariantSpec::twisted(dirichlet::component_mod(*v.chi, qa));
                break;
            }
            case Variant::restricted: {
                i64 qa = std::gcd(v.q, ca);
                sub = qa == 1 ? VariantSpec::classical() : VariantSpec::restricted(v.a % qa, qa);
                break;
            }
        }
        i64 ma = i64(arith::u128(((m % ca) + ca) % ca) * u64(invb) % u64(ca));
        i64 na = i64(arith::u128(((n % ca) + ca) % ca) * u64(invb) % u64(ca));
        return detail::eval_direct(sub, ma, na, ca);
    };
    cplx val = piece(c1, c2) * piece(c2, c1);
    return {val, m, n, c, v.kind, Method::crt, v.a, v.q};
}

// Character orthogonality: sum over chi mod q with chi(-1) = (-1)^kappa of
// conj(chi(a)) S_chi(m,n;c), against phi(q) Re/Im of the restricted sum.
inline std::pair<cplx, cplx> orthogonality_reduce(i64 a, i64 q, int kappa, i64 m, i64 n, i64 c) {
    if (kappa != 0 && kappa != 1) throw std::invalid_argument("orthogonality_reduce: kappa in {0,1}");
    auto vr = VariantSpec::restricted(a, q);
    detail::validate(vr, c);
    cplx lhs = 0.0;
    for (const auto& chi : dirichlet::enumerate_characters(q, kappa))
        lhs += std::conj(chi(a)) * detail::eval_direct(VariantSpec::twisted(chi), m, n, c);
    cplx S = detail::eval_direct(vr, m, n, c);
    double phi = double(arith::euler_phi(q));
    cplx rhs = kappa == 0 ? cplx(phi * S.real(), 0.0) : cplx(0.0, phi * S.imag());
    return {lhs, rhs};
}

inline double weil_bound(i64 m, i64 n, i64 c) {
    if (c < 1) throw std::invalid_argument("weil_bound: c must be >= 1");
    i64 g = std::gcd(std::gcd(std::llabs(m), std::llabs(n)), c);
    i64 tau = arith::multiplicative_basics(c).tau;
    return double(tau) * std::sqrt(double(g) * double(c));
}

// Piecewise bound for S_chi(mc', nc'; p^beta) with chi of conductor p^gamma.
inline double weak_weil_bound(i64 p, int beta, int gamma) {
    if (!arith::is_prime(u64(p))) throw std::invalid_argument("weak_weil_bound: p must be prime");
    if (beta < gamma || gamma < 0) throw std::invalid_argument("weak_weil_bound: need beta >= gamma >= 0");
    if (p % 2 == 1) {
        if (beta == gamma && beta >= 3)
            return 2.0 * std::pow(double(p), double((3 * beta + 1) / 4));
        return 2.0 * std::pow(double(p), 0.5 * beta);
    }
    if (gamma + 1 >= beta && beta >= 3)
        return 4.0 * std::pow(2.0, double((3 * beta + 1) / 4));
    return 8.0 * std::pow(2.0, 0.5 * beta);
}

}  // namespace kzt::ksums
