#pragma once

// Right-hand sides of the density theorems, the Rankin-trick parameter
// choices, the Weyl-law comparator, and the squarefree-level twist-conductor
// rules. Exponents are assembled symbolically (one log-ratio per prime) and
// exponentiated once; epsilon stays an explicit input and the implied
// constant is reported as 1.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kzt/arith.hpp"
#include "kzt/dirichlet.hpp"

namespace kzt::density {

using arith::Group;
using arith::i64;
using dirichlet::DirichletCharacter;

struct PrimeTerm {
    i64 p;
    double alpha;  // in (2, sqrt(p) + 1/sqrt(p))
    double mu;     // in [0, 1]
};

struct DensityParams {
    Group group = Group::Gamma1;
    i64 q = 1;
    std::optional<DirichletCharacter> chi;  // nebentypus, Gamma0 only
    std::vector<PrimeTerm> primes;
    double alpha0 = 0.0, mu0 = 0.0;  // Laplacian window (huxley)
    double T = 1.0;
    double eps = 1e-3;
    bool squarefree_improvement = false;  // Gamma1, squarefree q: exponent 3 -> 4
};

struct BoundValue {
    double value = 0.0;
    double vol = 0.0;
    double shift = 0.0;         // mu-weighted log-ratio sum entering the exponents
    double vol_exponent = 0.0;
    double t_exponent = 0.0;    // exponent on T^2 (sarnak only)
    double qdot = 1.0;
    double qddot = 1.0;
    int min_branch = -1;  // 0: Qdot factor attains the min, 1: Qddot factor
    std::vector<std::string> warnings;
};

namespace detail {

inline void validate_primes(const DensityParams& par, bool huxley) {
    double musum = huxley ? par.mu0 : 0.0;
    if (huxley) {
        if (par.mu0 < 0.0 || par.mu0 > 1.0)
            throw std::invalid_argument("density: mu0 must lie in [0,1]");
        if (par.mu0 > 0.0 && !(par.alpha0 > 0.0 && par.alpha0 < 0.5))
            throw std::invalid_argument("density: alpha0 must lie in (0, 1/2)");
    }
    for (const auto& t : par.primes) {
        if (!arith::is_prime(arith::u64(t.p)))
            throw std::invalid_argument("density: collection must consist of primes");
        if (par.q % t.p == 0)
            throw std::invalid_argument("density: primes must not divide the level");
        double cap = std::sqrt(double(t.p)) + 1.0 / std::sqrt(double(t.p));
        if (!(t.alpha > 2.0 && t.alpha < cap))
            throw std::invalid_argument("density: alpha_p must lie in (2, sqrt(p)+1/sqrt(p))");
        if (t.mu < 0.0 || t.mu > 1.0)
            throw std::invalid_argument("density: mu_p must lie in [0,1]");
        musum += t.mu;
    }
    if (musum > 1.0 + 1e-12) throw std::invalid_argument("density: weights must sum to at most 1");
}

inline double log_shift(const DensityParams& par) {
    double L = 0.0;
    for (const auto& t : par.primes) L += t.mu * std::log(t.alpha / 2.0) / std::log(double(t.p));
    return L;
}

inline i64 q_chi_of(const DensityParams& par) {
    return par.chi ? par.chi->conductor() : 1;
}

inline double vol_exp_coeff(const DensityParams& par) {
    switch (par.group) {
        case Group::Gamma1: {
            bool improved = par.squarefree_improvement && arith::factorize(par.q).squarefree();
            return improved ? 4.0 : 3.0;
        }
        case Group::GammaFull: return 8.0 / 3.0;
        case Group::Gamma0: return 4.0;
    }
    return 3.0;
}

inline BoundValue assemble(const DensityParams& par, double shift, bool with_T) {
    BoundValue out;
    out.vol = arith::volume(par.group, par.q);
    out.shift = shift;
    out.vol_exponent = 1.0 - vol_exp_coeff(par) * shift + par.eps;
    double logv = out.vol_exponent * std::log(out.vol);
    if (with_T) {
        out.t_exponent = 1.0 - 4.0 * shift + par.eps;
        logv += out.t_exponent * std::log(par.T * par.T);
    }
    if (par.group == Group::Gamma0) {
        auto qd = arith::q_dot(par.q, q_chi_of(par));
        out.qdot = qd.value();
        out.qddot = double(arith::q_ddot(par.q, q_chi_of(par)));
        double dot_log = 4.0 * shift * qd.log_value();
        double ddot_log = (1.0 - 4.0 * shift) * std::log(out.qddot);
        out.min_branch = dot_log <= ddot_log ? 0 : 1;
        logv += std::min(dot_log, ddot_log);
    }
    out.value = std::exp(logv);
    for (const auto& t : par.primes)
        if (double(t.p) > par.T)
            out.warnings.push_back("nonuniform: p = " + std::to_string(t.p) +
                                   " exceeds T (requires p << T^eps)");
    if (out.value < 1.0) out.warnings.push_back("vacuously strong: bound below 1");
    return out;
}

}  // namespace detail

// count bound for eigenvalues t_f in [0, T] with |lambda_f(p)| >= alpha_p
inline BoundValue sarnak_rhs(const DensityParams& par) {
    if (!(par.T >= 1.0)) throw std::invalid_argument("sarnak_rhs: T >= 1");
    detail::validate_primes(par, false);
    return detail::assemble(par, detail::log_shift(par), true);
}

// count bound for exceptional Laplacian eigenvalues it_f in (alpha0, 1/2)
inline BoundValue huxley_rhs(const DensityParams& par) {
    detail::validate_primes(par, true);
    double shift = par.mu0 * par.alpha0 + detail::log_shift(par);
    return detail::assemble(par, shift, false);
}

enum class Theorem { sarnak, huxley };

struct EllChoice {
    std::map<i64, i64> ell;  // p -> ell_p
    double X = 1.0;          // huxley only
    double ell_log_base = 0.0;  // log of the quantity inside the floor, per unit mu
};

inline EllChoice ell_choice(Theorem thm, const DensityParams& par) {
    detail::validate_primes(par, thm == Theorem::huxley);
    EllChoice out;
    double vol = arith::volume(par.group, par.q);
    double qdot_log = par.group == Group::Gamma0
                          ? arith::q_dot(par.q, detail::q_chi_of(par)).log_value()
                          : 0.0;
    double base;  // log of vol^e T^4 Qdot^{-2} (sarnak) or vol^e Qdot^{-2} (huxley)
    switch (par.group) {
        case Group::Gamma1: base = 1.5 * std::log(vol); break;
        case Group::GammaFull: base = 4.0 / 3.0 * std::log(vol); break;
        case Group::Gamma0: base = 2.0 * std::log(vol) - 2.0 * qdot_log; break;
        default: base = 0.0;
    }
    if (thm == Theorem::sarnak) base += 4.0 * std::log(par.T);
    out.ell_log_base = base;
    for (const auto& t : par.primes) {
        double raw = t.mu * base / std::log(double(t.p));
        out.ell[t.p] = std::max<i64>(0, i64(std::floor(raw)));
    }
    if (thm == Theorem::huxley) {
        double xlog;
        switch (par.group) {
            case Group::Gamma1: xlog = 1.5 * par.mu0 * std::log(vol); break;
            case Group::GammaFull: xlog = 4.0 / 3.0 * par.mu0 * std::log(vol); break;
            case Group::Gamma0: xlog = par.mu0 * (2.0 * std::log(vol) - 2.0 * qdot_log); break;
            default: xlog = 0.0;
        }
        out.X = std::max(1.0, std::exp(xlog));
    }
    return out;
}

// Weyl-law comparator vol(Gamma\H) T^2 / (4 pi)
inline double weyl_comparator(Group g, i64 q, double T) {
    if (T < 0.0) throw std::invalid_argument("weyl_comparator: T >= 0");
    return arith::volume(g, q) * T * T / (4.0 * 3.14159265358979323846);
}

// ---------------------------------------------------------------------------
// twist-conductor rules in the squarefree-level regime

enum class LocalType { principal_series, steinberg };

namespace detail {

inline int cond_exponent(const DirichletCharacter& chi, i64 p) {
    i64 f = chi.conductor();
    if (f == 1) return 0;
    if (f == p) return 1;
    throw std::invalid_argument("twist_conductor: conductor exponent must lie in {0, 1}");
}

inline DirichletCharacter lift_mod_p(const DirichletCharacter& chi, i64 p) {
    if (chi.modulus() == p) return chi;
    if (p % chi.modulus() != 0)
        throw std::invalid_argument("twist_conductor: characters must live at one prime");
    return dirichlet::induce(chi, p);
}

}  // namespace detail

// conductor exponent of the local twist pi_p (x) omega', with local parameters
// given as Dirichlet characters of modulus 1 or p
inline int twist_conductor(LocalType type, i64 p, const DirichletCharacter& omega1,
                           const DirichletCharacter& omega2,
                           const DirichletCharacter& omega_prime) {
    if (!arith::is_prime(arith::u64(p))) throw std::invalid_argument("twist_conductor: p prime");
    auto w1 = detail::lift_mod_p(omega1, p);
    auto wp = detail::lift_mod_p(omega_prime, p);
    detail::cond_exponent(omega1, p);  // range checks
    detail::cond_exponent(omega_prime, p);
    if (type == LocalType::steinberg) {
        if (detail::cond_exponent(omega1, p) != 0)
            throw std::invalid_argument("twist_conductor: steinberg requires unramified omega1");
        return std::max(1, 2 * detail::cond_exponent(w1 * wp, p));
    }
    auto w2 = detail::lift_mod_p(omega2, p);
    detail::cond_exponent(omega2, p);
    return detail::cond_exponent(w1 * wp, p) + detail::cond_exponent(w2 * wp, p);
}

struct Rational {
    i64 num, den;
    double value() const { return double(num) / double(den); }
};

// tau(q) / phi(q) for squarefree q, as an exact reduced rational
inline Rational twist_count_factor(i64 q) {
    auto f = arith::factorize(q);
    if (!f.squarefree()) throw std::invalid_argument("twist_count_factor: q must be squarefree");
    auto b = arith::multiplicative_basics(q);
    i64 g = std::gcd(b.tau, b.phi);
    return {b.tau / g, b.phi / g};
}

}  // namespace kzt::density
