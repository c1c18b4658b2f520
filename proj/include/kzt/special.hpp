#pragma once

// Special-function kernels needed by the Bessel quadratures: the sine/cosine
// integral pair (series below w = 12, Lentz continued fraction above), a
// Lanczos complex log-gamma completed by reflection, and the power series for
// J_{2ir}(x) scaled by sech(pi r) so nothing overflows at large r.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace kzt::special {

using cplx = std::complex<double>;

struct SiCi {
    double si_compl;  // \int_w^infty sin(u)/u du  (= pi/2 - Si(w))
    double ci;        // Ci(w)
};

namespace detail {

inline SiCi sici_series(double w) {
    long double s = 0.0L, term = w;
    for (int k = 0;; ++k) {
        s += term / (2 * k + 1);
        long double next = -term * (long double)w * w / ((2 * k + 2) * (2 * k + 3));
        if (std::fabs((double)next) < 1e-22 * std::fabs((double)s) + 1e-300) break;
        term = next;
        if (k > 200) break;
    }
    long double c = 0.0L, t2 = -(long double)w * w / 2.0L;
    for (int k = 1;; ++k) {
        c += t2 / (2 * k);
        long double next = -t2 * (long double)w * w / ((2 * k + 1) * (2 * k + 2));
        if (std::fabs((double)next) < 1e-22 * (std::fabs((double)c) + 1.0)) break;
        t2 = next;
        if (k > 200) break;
    }
    const long double gamma = 0.57721566490153286060651209008L;
    const long double pi2 = 1.57079632679489661923132169164L;
    return {double(pi2 - s), double(gamma + std::log((long double)w) + c)};
}

// Gamma(0, iw) by modified Lentz on the standard continued fraction; yields
// \int_w^infty e^{-iu}/u du = -Ci(w) - i si_compl(w).
inline SiCi sici_cf(double w) {
    const cplx z(0.0, w);
    const double tiny = 1e-290;
    cplx b = z + 1.0;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int n = 1; n <= 20000; ++n) {
        double an = -double(n) * double(n);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    cplx g0 = h * std::exp(-z);  // Gamma(0, iw)
    return {-g0.imag(), -g0.real()};
}

}  // namespace detail

inline SiCi sici(double w) {
    if (!(w > 0)) throw std::invalid_argument("sici: w > 0 required");
    return w <= 12.0 ? detail::sici_series(w) : detail::sici_cf(w);
}

// Auxiliary functions with si_compl = f cos + g sin; both are positive and
// decreasing, f ~ 1/w and g ~ 1/w^2.
inline double aux_f(double w) {
    auto [si, ci] = sici(w);
    return ci * std::sin(w) + si * std::cos(w);
}
inline double aux_g(double w) {
    auto [si, ci] = sici(w);
    return -ci * std::cos(w) + si * std::sin(w);
}

// Lanczos (g = 7, 9 terms), reflection for Re z < 1/2; ~1e-13 over the strips
// used here.
inline cplx log_gamma(cplx z) {
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    const double pi = 3.14159265358979323846;
    if (z.real() < 0.5) {
        // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        return std::log(pi / std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + double(i));
    cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// J_{2ir}(x) / cosh(pi r) by the power series, with the prefactor assembled in
// log space so large r stays finite.
inline cplx bessel_j_2ir_sech(double r, double x) {
    if (!(x > 0)) throw std::invalid_argument("bessel_j_2ir_sech: x > 0 required");
    double ar = std::fabs(r);
    double log_cosh = ar * 3.14159265358979323846 + std::log1p(std::exp(-2.0 * 3.14159265358979323846 * ar)) -
                      std::log(2.0);
    cplx nu(0.0, 2.0 * r);
    cplx pref = std::exp(nu * std::log(0.5 * x) - log_gamma(nu + 1.0) - log_cosh);
    cplx term = pref, sum = pref;
    double x24 = 0.25 * x * x;
    for (int k = 1; k <= 4000; ++k) {
        term *= -x24 / (double(k) * (nu + double(k)));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30) && double(k) > 0.5 * x) break;
    }
    return sum;
}

}  // namespace kzt::special
