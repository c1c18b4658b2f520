#pragma once

// Exact integer and multiplicative-function utilities shared by all modules.
// Inputs are capped at 63 bits; larger values are rejected rather than
// silently degraded.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kzt::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    for (a %= m; e; e >>= 1) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
    }
    return r;
}

inline i64 extgcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) { x = 1; y = 0; return a; }
    i64 x1, y1;
    i64 g = extgcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline i64 invmod(i64 a, i64 m) {
    if (m <= 0) throw std::invalid_argument("invmod: modulus must be positive");
    a %= m;
    if (a < 0) a += m;
    if (m == 1) return 0;
    i64 x, y;
    i64 g = extgcd(a, m, x, y);
    if (g != 1) throw std::invalid_argument("invmod: arguments not coprime");
    x %= m;
    if (x < 0) x += m;
    return x;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) d >>= 1, ++s;
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

// Brent's cycle variant of Pollard rho; n must be odd, composite, > 1.
inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto step = [n, c](u64 x) { return (mulmod(x, x, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        u64 q = 1;
        int lam = 1;
        while (d == 1) {
            x = y;
            for (int i = 0; i < lam; ++i) y = step(y);
            int k = 0;
            while (k < lam && d == 1) {
                u64 ys = y;
                int lim = std::min(128, lam - k);
                for (int i = 0; i < lim; ++i) {
                    y = step(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                k += lim;
                if (d == n) {
                    // backtrack one step at a time
                    d = 1;
                    y = ys;
                    do {
                        y = step(y);
                        d = std::gcd(x > y ? x - y : y - x, n);
                    } while (d == 1);
                    break;
                }
            }
            lam *= 2;
        }
        if (d != n) return d;
    }
}

}  // namespace detail

struct Factorization {
    std::vector<std::pair<i64, int>> pairs;  // primes strictly increasing, exponents >= 1

    i64 value() const {
        i64 v = 1;
        for (auto [p, e] : pairs)
            for (int i = 0; i < e; ++i) v *= p;
        return v;
    }
    int exponent_of(i64 p) const {
        for (auto [q, e] : pairs)
            if (q == p) return e;
        return 0;
    }
    bool squarefree() const {
        for (auto [p, e] : pairs)
            if (e > 1) return false;
        return true;
    }
};

inline Factorization factorize(i64 n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    Factorization f;
    u64 m = u64(n);
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL,
                  41ULL, 43ULL, 47ULL, 53ULL, 59ULL, 61ULL, 67ULL, 71ULL, 73ULL, 79ULL, 83ULL,
                  89ULL, 97ULL}) {
        if (p * p > m) break;
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) m /= p, ++e;
            f.pairs.emplace_back(i64(p), e);
        }
    }
    if (m > 1) {
        std::vector<u64> stack{m};
        std::vector<u64> primes;
        while (!stack.empty()) {
            u64 x = stack.back();
            stack.pop_back();
            if (x == 1) continue;
            if (is_prime(x)) {
                primes.push_back(x);
                continue;
            }
            u64 d = detail::pollard_rho(x);
            stack.push_back(d);
            stack.push_back(x / d);
        }
        std::sort(primes.begin(), primes.end());
        for (size_t i = 0; i < primes.size();) {
            size_t j = i;
            while (j < primes.size() && primes[j] == primes[i]) ++j;
            f.pairs.emplace_back(i64(primes[i]), int(j - i));
            i = j;
        }
    }
    std::sort(f.pairs.begin(), f.pairs.end());
    return f;
}

struct MultiplicativeBasics {
    i64 phi;
    i64 tau;
    int omega;
    std::vector<i64> divisors;  // ascending
};

inline std::vector<i64> divisors_of(const Factorization& f) {
    std::vector<i64> divs{1};
    for (auto [p, e] : f.pairs) {
        size_t base = divs.size();
        i64 pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline MultiplicativeBasics multiplicative_basics(i64 n) {
    Factorization f = factorize(n);
    MultiplicativeBasics b;
    b.phi = 1;
    b.tau = 1;
    b.omega = int(f.pairs.size());
    for (auto [p, e] : f.pairs) {
        i64 pk = 1;
        for (int i = 1; i < e; ++i) pk *= p;
        b.phi *= pk * (p - 1);
        b.tau *= e + 1;
    }
    b.divisors = divisors_of(f);
    return b;
}

inline i64 euler_phi(i64 n) {
    i64 phi = 1;
    for (auto [p, e] : factorize(n).pairs) {
        i64 pk = 1;
        for (int i = 1; i < e; ++i) pk *= p;
        phi *= pk * (p - 1);
    }
    return phi;
}

struct Residue {
    i64 value;
    i64 modulus;
};

// Chinese remainder composition; moduli must be pairwise coprime.
inline Residue crt_compose(const std::vector<std::pair<i64, i64>>& parts) {
    i64 r = 0, m = 1;
    for (auto [ri, mi] : parts) {
        if (mi < 1) throw std::invalid_argument("crt_compose: moduli must be positive");
        if (std::gcd(m, mi) != 1) throw std::invalid_argument("crt_compose: moduli not pairwise coprime");
        if ((i128)m * mi > i128(INT64_MAX)) throw std::invalid_argument("crt_compose: product exceeds 63 bits");
        i64 ri_n = ri % mi;
        if (ri_n < 0) ri_n += mi;
        // solve x = r (mod m), x = ri (mod mi)
        i64 diff = (ri_n - (r % mi) + mi) % mi;
        i64 t = i64((u128)diff * u64(invmod(m, mi)) % u64(mi));
        r = r + m * t;
        m = m * mi;
        r %= m;
    }
    return {r, m};
}

// Product of prime powers with exponents carried in half-integer units.
struct HalfPowerProduct {
    std::vector<std::pair<i64, i64>> factors;  // (prime, exponent measured in halves)

    double value() const {
        double v = 1.0;
        for (auto [p, h] : factors) v *= std::pow(double(p), 0.5 * double(h));
        return v;
    }
    double log_value() const {
        double s = 0.0;
        for (auto [p, h] : factors) s += 0.5 * double(h) * std::log(double(p));
        return s;
    }
    bool is_one() const { return factors.empty(); }
};

// Local exponent floor((3a+1)/4) - a/2, in half-units.
inline i64 qdot_half_exponent(int alpha) { return 2 * ((3 * alpha + 1) / 4) - alpha; }

inline HalfPowerProduct q_dot(i64 q, i64 q_chi) {
    if (q < 1 || q_chi < 1 || q % q_chi != 0)
        throw std::invalid_argument("q_dot: q_chi must divide q");
    HalfPowerProduct out;
    Factorization fq = factorize(q);
    Factorization fc = factorize(q_chi);
    for (auto [p, alpha] : fq.pairs) {
        int gamma = fc.exponent_of(p);
        bool hit = (p % 2 == 1) ? (alpha == gamma && alpha >= 3)
                                : (gamma + 1 >= alpha && alpha >= 3);
        if (hit) {
            i64 h = qdot_half_exponent(alpha);
            if (h != 0) out.factors.emplace_back(p, h);
        }
    }
    return out;
}

inline i64 q_ddot(i64 q, i64 q_chi) {
    if (q < 1 || q_chi < 1 || q % q_chi != 0)
        throw std::invalid_argument("q_ddot: q_chi must divide q");
    i64 out = 1;
    Factorization fq = factorize(q);
    Factorization fc = factorize(q_chi);
    for (auto [p, alpha] : fq.pairs) {
        int gamma = fc.exponent_of(p);
        if (p % 2 == 1) {
            if (alpha == gamma && alpha >= 3) out *= p;
        } else {
            if (alpha == gamma && alpha >= 3) out *= 4;
            else if (alpha == gamma + 1 && alpha >= 3) out *= 2;
        }
    }
    return out;
}

enum class Group { Gamma0, Gamma1, GammaFull };

inline const char* group_name(Group g) {
    switch (g) {
        case Group::Gamma0: return "gamma0";
        case Group::Gamma1: return "gamma1";
        case Group::GammaFull: return "gamma";
    }
    return "?";
}

// Hyperbolic area of the quotient: pi/3 times the index of the subgroup.
inline double volume(Group g, i64 q) {
    if (q < 1) throw std::invalid_argument("volume: q must be >= 1");
    double idx = double(q);
    Factorization f = factorize(q);
    switch (g) {
        case Group::Gamma0:
            for (auto [p, e] : f.pairs) idx *= 1.0 + 1.0 / double(p);
            break;
        case Group::Gamma1:
            idx *= double(q);
            for (auto [p, e] : f.pairs) idx *= 1.0 - 1.0 / (double(p) * double(p));
            break;
        case Group::GammaFull:
            idx *= double(q) * double(q);
            for (auto [p, e] : f.pairs) idx *= 1.0 - 1.0 / (double(p) * double(p));
            break;
    }
    return std::numbers::pi / 3.0 * idx;
}

}  // namespace kzt::arith
