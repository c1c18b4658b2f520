#pragma once

// Chebyshev/Lobb coefficient algebra, Hecke eigenvalue recurrences, and the
// normalisation functions A_f, B_f, xi_f with the Gram orthonormality check.
// Eigenvalues lambda(p) are user-supplied; no spectral computation happens
// here. Divisor-indexed matrices are built per prime and combined through
// their Kronecker structure.

#include <complex>
#include <map>
#include <vector>

#include "kzt/arith.hpp"
#include "kzt/dirichlet.hpp"

namespace kzt::hecke {

using arith::cplx;
using arith::i64;
using arith::u128;
using dirichlet::DirichletCharacter;

inline u128 binomial_u128(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= u128(n - k + i);
        r /= u128(i);
    }
    return r;
}

// alpha_{2j,2l} = (2j+1)/(l+j+1) * binom(2l, l+j)
inline i64 lobb(int j, int ell) {
    if (j < 0 || ell < 0 || j > ell) throw std::invalid_argument("lobb: need 0 <= j <= ell");
    u128 num = binomial_u128(2 * ell, ell + j) * u128(2 * j + 1);
    if (num % u128(ell + j + 1) != 0) throw std::logic_error("lobb: non-integral value");
    u128 v = num / u128(ell + j + 1);
    return i64(v);
}

// U_j(x), second-kind Chebyshev
template <class T>
T chebyshev_u(int j, T x) {
    if (j < 0) throw std::invalid_argument("chebyshev_u: j >= 0");
    T um1 = T(1), u = T(2) * x;
    if (j == 0) return um1;
    for (int i = 1; i < j; ++i) {
        T next = T(2) * x * u - um1;
        um1 = u;
        u = next;
    }
    return u;
}

// U_j(x/2): U_0 = 1, U_1(x/2) = x, U_{j+1}(x/2) = x U_j(x/2) - U_{j-1}(x/2)
template <class T>
T chebyshev_u_half(int j, T x) {
    if (j < 0) throw std::invalid_argument("chebyshev_u_half: j >= 0");
    T um1 = T(1), u = x;
    if (j == 0) return um1;
    for (int i = 1; i < j; ++i) {
        T next = x * u - um1;
        um1 = u;
        u = next;
    }
    return u;
}

// Level, nebentypus, and lambda(p) for a finite prime set. The nebentypus is
// stored induced modulo the level.
class HeckeSystem {
  public:
    HeckeSystem(i64 level, DirichletCharacter nebentypus, std::map<i64, cplx> lambda)
        : q1_(level), lam_(std::move(lambda)) {
        if (level < 1) throw std::invalid_argument("HeckeSystem: level must be >= 1");
        if (level % nebentypus.modulus() != 0)
            throw std::invalid_argument("HeckeSystem: nebentypus modulus must divide the level");
        chi_ = nebentypus.modulus() == level ? std::move(nebentypus)
                                             : dirichlet::induce(nebentypus, level);
        for (auto& [p, lp] : lam_) {
            if (!arith::is_prime(arith::u64(p)))
                throw std::invalid_argument("HeckeSystem: lambda keys must be prime");
            if (q1_ % p != 0) {
                double cap = std::sqrt(double(p)) + 1.0 / std::sqrt(double(p));
                if (!(std::abs(lp) < cap))
                    throw std::invalid_argument("HeckeSystem: |lambda(p)| must be < sqrt(p)+1/sqrt(p)");
                cplx lhs = std::conj(lp);
                cplx rhs = std::conj(chi_(p)) * lp;
                if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lp)))
                    throw std::invalid_argument(
                        "HeckeSystem: conjugation constraint conj(lambda) = conj(chi(p)) lambda violated");
            }
        }
    }

    i64 level() const { return q1_; }
    const DirichletCharacter& nebentypus() const { return chi_; }
    bool has(i64 p) const { return lam_.count(p) != 0; }
    cplx lambda(i64 p) const {
        auto it = lam_.find(p);
        if (it == lam_.end()) throw std::invalid_argument("HeckeSystem: lambda(p) not supplied");
        return it->second;
    }
    // chi_{0(q1)}(p): 1 on primes away from the level, 0 on level primes
    double chi0(i64 p) const { return q1_ % p == 0 ? 0.0 : 1.0; }
    // chi_{(q1)}(p): the induced nebentypus value
    cplx chi_level(i64 p) const { return chi_(p); }

    // lambda(p) = x * chi(p)^{1/2} with real x satisfies the conjugation
    // constraint; the square root is taken with the exact half-phase.
    static cplx admissible_lambda(const DirichletCharacter& chi, i64 p, double x) {
        i64 num, den;
        if (!chi.phase(p, num, den))
            throw std::invalid_argument("admissible_lambda: p divides the character modulus");
        return x * arith::unit_root(num, 2 * den);
    }

  private:
    i64 q1_;
    DirichletCharacter chi_;
    std::map<i64, cplx> lam_;
};

// lambda(p^t) by the Hecke recurrence (power rule at level primes)
inline cplx hecke_prime_power(const HeckeSystem& sys, i64 p, int t) {
    if (t < 0) throw std::invalid_argument("hecke_prime_power: t >= 0");
    if (t == 0) return 1.0;
    cplx lp = sys.lambda(p);
    if (sys.level() % p == 0) {
        cplx v = 1.0;
        for (int i = 0; i < t; ++i) v *= lp;
        return v;
    }
    cplx chip = sys.chi_level(p);
    cplx prev = 1.0, cur = lp;
    for (int i = 1; i < t; ++i) {
        cplx next = lp * cur - chip * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline cplx hecke_value(const HeckeSystem& sys, i64 n) {
    if (n < 1) throw std::invalid_argument("hecke_value: n >= 1");
    cplx v = 1.0;
    for (auto [p, e] : arith::factorize(n).pairs) v *= hecke_prime_power(sys, p, e);
    return v;
}

// |lambda(p)|^{2l} against the alpha-weighted sum of lambda(p^{2j})
inline std::pair<double, cplx> abs_power_expand(const HeckeSystem& sys, i64 p, int ell) {
    if (sys.level() % p == 0)
        throw std::invalid_argument("abs_power_expand: requires p away from the level");
    double lhs = std::pow(std::abs(sys.lambda(p)), 2.0 * ell);
    cplx chibar = std::conj(sys.chi_level(p));
    cplx rhs = 0.0;
    cplx chipow = 1.0;
    for (int j = 0; j <= ell; ++j) {
        rhs += double(lobb(j, ell)) * chipow * hecke_prime_power(sys, p, 2 * j);
        chipow *= chibar;
    }
    return {lhs, rhs};
}

// B_f(p^t; s)
inline cplx b_f(const HeckeSystem& sys, i64 p, int t, cplx s) {
    if (t < 0) throw std::invalid_argument("b_f: t >= 0");
    if (t == 0) return 1.0;
    cplx pms = std::exp(-s * std::log(double(p)));  // p^{-s}
    cplx den = 1.0 + sys.chi0(p) * pms;
    if (t == 1) return sys.lambda(p) / den;
    return (hecke_prime_power(sys, p, t) - sys.chi_level(p) * hecke_prime_power(sys, p, t - 2) * pms) /
           den;
}

// A_f(p^t) = p^{-t/2} B_f(p^t; 1)
inline cplx a_f(const HeckeSystem& sys, i64 p, int t) {
    if (t < 0) throw std::invalid_argument("a_f: t >= 0");
    return std::pow(double(p), -0.5 * t) * b_f(sys, p, t, 1.0);
}

inline cplx a_f_at(const HeckeSystem& sys, i64 n) {
    cplx v = 1.0;
    for (auto [p, e] : arith::factorize(n).pairs) v *= a_f(sys, p, e);
    return v;
}

// xi_f(p^r, p^t), 0 <= r <= t
inline cplx xi_coeff(const HeckeSystem& sys, i64 p, int r, int t) {
    if (r < 0 || t < 0 || r > t) throw std::invalid_argument("xi_coeff: need 0 <= r <= t");
    if (t == 0) return 1.0;
    cplx A = a_f(sys, p, 1);
    double a2 = std::norm(A);
    if (!(a2 < 1.0)) throw std::invalid_argument("xi_coeff: |A_f(p)| >= 1 (degenerate normalization)");
    double s1 = std::sqrt(1.0 - a2);
    if (t == 1) return r == 0 ? -std::conj(A) / s1 : cplx(1.0) / s1;
    if (r <= t - 3) return 0.0;
    double s2 = std::sqrt((1.0 - sys.chi0(p) / (double(p) * double(p))) * (1.0 - a2));
    if (r == t - 2) return std::conj(sys.chi_level(p)) / double(p) / s2;
    if (r == t - 1) return -std::conj(sys.lambda(p)) / std::sqrt(double(p)) / s2;
    return cplx(1.0) / s2;  // r == t
}

// Max deviation of the xi-conjugated Gram matrix from the identity, over the
// divisors of q2. Blocks are per prime and enter by Kronecker product.
inline double gram_check(const HeckeSystem& sys, i64 q2) {
    if (q2 < 1) throw std::invalid_argument("gram_check: q2 >= 1");
    if (q2 == 1) return 0.0;
    auto fac = arith::factorize(q2);
    std::vector<std::vector<std::vector<cplx>>> blocks;  // per prime: delta block
    for (auto [p, t] : fac.pairs) {
        int n = t + 1;
        std::vector<std::vector<cplx>> M(n, std::vector<cplx>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int mn = std::min(i, j);
                M[i][j] = a_f(sys, p, j - mn) * std::conj(a_f(sys, p, i - mn));
            }
        std::vector<std::vector<cplx>> Xi(n, std::vector<cplx>(n, 0.0));
        for (int d = 0; d < n; ++d)
            for (int r = 0; r <= d; ++r) Xi[r][d] = xi_coeff(sys, p, r, d);
        std::vector<std::vector<cplx>> delta(n, std::vector<cplx>(n, 0.0));
        for (int d1 = 0; d1 < n; ++d1)
            for (int d2 = 0; d2 < n; ++d2) {
                cplx acc = 0.0;
                for (int l1 = 0; l1 <= d1; ++l1)
                    for (int l2 = 0; l2 <= d2; ++l2)
                        acc += Xi[l1][d1] * std::conj(Xi[l2][d2]) * M[l1][l2];
                delta[d1][d2] = acc;
            }
        blocks.push_back(std::move(delta));
    }
    // Kronecker fold: enumerate divisor exponent tuples
    size_t nb = blocks.size();
    std::vector<int> dims(nb);
    for (size_t i = 0; i < nb; ++i) dims[i] = int(blocks[i].size());
    std::vector<int> t1(nb, 0), t2(nb, 0);
    double dev = 0.0;
    auto advance = [&](std::vector<int>& t) {
        for (size_t i = 0; i < nb; ++i) {
            if (++t[i] < dims[i]) return true;
            t[i] = 0;
        }
        return false;
    };
    do {
        std::fill(t2.begin(), t2.end(), 0);
        do {
            cplx prod = 1.0;
            bool diag = true;
            for (size_t i = 0; i < nb; ++i) {
                prod *= blocks[i][size_t(t1[i])][size_t(t2[i])];
                if (t1[i] != t2[i]) diag = false;
            }
            dev = std::max(dev, std::abs(prod - (diag ? cplx(1.0) : cplx(0.0))));
        } while (advance(t2));
    } while (advance(t1));
    return dev;
}

struct XiNormReport {
    double lhs;          // sum over d | q2 of |xi_f(1,d)|^2
    double rhs_partial;  // truncated lambda series times the unramified factor
    double tail_bound;   // rigorous remainder bound for the truncation
};

// Series identity for xi_f = sum_{d|q2} |xi_f(1,d)|^2. Convergence needs a
// growth cap on lambda(p^k): |lambda(p)| <= 2 away from the level gives
// |lambda(p^k)| <= k+1; on level primes the power rule needs |lambda(p)| <= 1.
inline XiNormReport xi_norm(const HeckeSystem& sys, i64 q2, int truncation_depth) {
    if (q2 < 1) throw std::invalid_argument("xi_norm: q2 >= 1");
    if (truncation_depth < 2) throw std::invalid_argument("xi_norm: truncation depth >= 2");
    auto fac = arith::factorize(q2);
    for (auto [p, t] : fac.pairs) {
        double cap = sys.level() % p == 0 ? 1.0 : 2.0;
        if (std::abs(sys.lambda(p)) > cap + 1e-12)
            throw std::invalid_argument("xi_norm: lambda(p) outside the convergence regime");
    }
    double lhs = 1.0, partial = 1.0, upper = 1.0, unram = 1.0;
    for (auto [p, t] : fac.pairs) {
        double block = 0.0;
        for (int r = 0; r <= t; ++r) block += std::norm(xi_coeff(sys, p, 0, r));
        lhs *= block;
        double x = 1.0 / double(p);
        double S = 0.0, xk = 1.0;
        for (int k = 0; k <= truncation_depth; ++k) {
            S += std::norm(hecke_prime_power(sys, p, k)) * xk;
            xk *= x;
        }
        // tail of sum (k+1)^2 x^k beyond the truncation, in closed form
        double full = (1.0 + x) / std::pow(1.0 - x, 3.0);
        double head = 0.0;
        xk = 1.0;
        for (int k = 0; k <= truncation_depth; ++k) {
            head += double(k + 1) * double(k + 1) * xk;
            xk *= x;
        }
        double tail_p = std::max(0.0, full - head);
        partial *= S;
        upper *= S + tail_p;
        if (t == 1) unram *= 1.0 - sys.chi0(p) * x * x;
    }
    return {lhs, partial * unram, (upper - partial) * unram};
}

}  // namespace kzt::hecke
