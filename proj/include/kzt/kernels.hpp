#pragma once

// Kernel functions attached to the pre-Kuznetsov / Kuznetsov formulas:
// the localising test function h_{kappa,T} (closed form vs defining integral),
// the exponential-decay test function h_X, the K-Bessel of imaginary order,
// the semicircle kernel I_kappa, the integrated-kernel identities, and the
// g0 transforms. Supported ranges: |r| <= 50, a in [1e-3, 1e3], T <= 100;
// outside these an explicit range error is raised.

#include <complex>
#include <functional>

#include "kzt/quadrature.hpp"
#include "kzt/special.hpp"

namespace kzt::kernels {

using quad::cplx;
using quad::Method;
using quad::QuadratureSpec;
using quad::ToleranceError;

struct KernelValue {
    cplx value;
    double est_error;
};

namespace detail {

constexpr double pi = 3.14159265358979323846;

inline double sech_pi(double x) {  // 1 / cosh(pi x), overflow-safe
    double u = std::exp(-pi * std::fabs(x));
    return 2.0 * u / (1.0 + u * u);
}

inline void check_T(double T) {
    if (!(T >= 1.0)) throw std::invalid_argument("h_kT: T >= 1 required");
    if (T > 100.0) throw std::domain_error("h_kT: T > 100 unsupported");
}

struct TParam {
    bool imaginary;  // t = i y
    double v;        // |t| along its axis
};

inline TParam classify_t(cplx t, int kappa) {
    bool has_re = std::fabs(t.real()) > 1e-14;
    bool has_im = std::fabs(t.imag()) > 1e-14;
    if (has_re && has_im)
        throw std::invalid_argument("h_kT: t must be real or purely imaginary");
    if (has_im) {
        if (kappa == 1) throw std::invalid_argument("h_kT: kappa = 1 takes real t only");
        double y = std::fabs(t.imag());
        if (y >= 0.5) throw std::invalid_argument("h_kT: |Im t| < 1/2 required");
        return {true, y};
    }
    double v = std::fabs(t.real());
    if (v > 100.0) throw std::domain_error("h_kT: |t| > 100 unsupported");
    return {false, v};
}

}  // namespace detail

// Closed/reduced forms of h_{kappa,T}. kappa = 0 uses the arctan closed form
// (artanh flavour on the imaginary segment); kappa = 1 evaluates the
// arsinh-integral form by quadrature in x, a route distinct from the defining
// r-integral.
inline double h_kT_closed(int kappa, cplx t, double T) {
    detail::check_T(T);
    auto tp = detail::classify_t(t, kappa);
    const double pi = detail::pi;
    if (kappa == 0) {
        if (tp.v < 1e-4) {
            double u = std::exp(-pi * T);
            return (1.0 - 2.0 * u / (1.0 + u * u)) / pi;  // (1 - sech(pi T)) / pi
        }
        double cT = std::cosh(pi * T);
        if (tp.imaginary) {
            double s = std::sin(pi * tp.v);
            double arg = s * (cT - 1.0) / (cT - s * s);
            return std::cos(pi * tp.v) / std::sin(pi * tp.v) / pi * std::atanh(arg);
        }
        double sh = std::sinh(pi * tp.v);
        double arg = (cT - 1.0) / (sh + cT / sh);
        return std::cosh(pi * tp.v) / sh / pi * std::atan(arg);
    }
    if (kappa != 1) throw std::invalid_argument("h_kT: kappa in {0,1}");
    double C = std::cosh(pi * tp.v);
    double factor = tp.v < 1e-4 ? 1.0 / pi : std::sinh(pi * tp.v) / (pi * pi * tp.v);
    double X = std::sinh(pi * T);
    auto f = [C](double x) { return std::asinh(x) / (x * x + C * C); };
    double total = 0.0;
    double lo = 0.0, hi = std::min(1.0, X);
    for (;;) {
        total += quad::adaptive_gl(f, lo, hi, 1e-13, 30).value;
        if (hi >= X) break;
        lo = hi;
        hi = std::min(2.0 * hi, X);
    }
    return factor * total;
}

// Defining r-integral of h_{kappa,T}, by the requested quadrature method.
inline KernelValue h_kT_integral(int kappa, cplx t, double T, const QuadratureSpec& spec) {
    detail::check_T(T);
    auto tp = detail::classify_t(t, kappa);
    const double pi = detail::pi;
    // cosh(pi(r-t)) cosh(pi(r+t)) = sinh^2(pi r) + cosh^2(pi t)
    double C2 = tp.imaginary ? std::cos(pi * tp.v) * std::cos(pi * tp.v)
                             : std::cosh(pi * tp.v) * std::cosh(pi * tp.v);
    quad::ValueErr<double> r;
    if (kappa == 0) {
        double num = tp.imaginary ? std::cos(pi * tp.v) : std::cosh(pi * tp.v);
        auto f = [=](double x) {
            double sh = std::sinh(pi * x);
            return num * sh / (sh * sh + C2);
        };
        r = quad::integrate(f, 0.0, T, spec);
    } else {
        double factor = tp.v < 1e-4 ? pi : std::sinh(pi * tp.v) / tp.v;
        auto f = [=](double x) {
            double sh = std::sinh(pi * x);
            return factor * x * std::cosh(pi * x) / (sh * sh + C2);
        };
        r = quad::integrate(f, 0.0, T, spec);
    }
    if (r.err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(r.value)) * 50.0)
        throw ToleranceError("h_kT_integral: estimated error " + std::to_string(r.err) +
                             " above tolerance");
    return {cplx(r.value, 0.0), r.err};
}

// h_X(t) = ((X^{it} + X^{-it}) / (t^2 + 1))^2
inline cplx h_X(cplx t, double X) {
    if (!(X >= 1.0)) throw std::invalid_argument("h_X: X >= 1 required");
    cplx it(-t.imag(), t.real());
    cplx num = std::exp(it * std::log(X)) + std::exp(-it * std::log(X));
    cplx ratio = num / (t * t + 1.0);
    return ratio * ratio;
}

// K_{2ir}(zeta) = \int_0^infty e^{-zeta cosh xi} cos(2 r xi) dxi, Re zeta > 0.
inline KernelValue bessel_k_imag(double r, cplx zeta, const QuadratureSpec& spec) {
    if (!(zeta.real() > 0)) throw std::invalid_argument("bessel_k_imag: Re(zeta) > 0 required");
    if (std::fabs(r) > 50.0) throw std::domain_error("bessel_k_imag: |r| > 50 unsupported");
    double sigma = zeta.real();
    double Xi = spec.truncation;
    if (Xi <= 0.0) {
        Xi = 1.0;
        while (std::exp(-sigma * std::cosh(Xi)) / (sigma * std::sinh(Xi)) > 0.5 * spec.abs_tol &&
               Xi < 60.0)
            Xi += 0.5;
    }
    double tail = std::exp(-sigma * std::cosh(Xi)) / (sigma * std::sinh(Xi));
    auto f = [=](double xi) -> cplx { return std::exp(-zeta * std::cosh(xi)) * std::cos(2.0 * r * xi); };
    auto q = quad::integrate(f, 0.0, Xi, spec);
    double est = q.err + tail;
    if (est > std::max(spec.abs_tol, spec.rel_tol * std::abs(q.value)) * 50.0)
        throw ToleranceError("bessel_k_imag: estimated error above tolerance");
    return {q.value, est};
}

namespace detail {

inline void check_ikappa_range(double a, double r) {
    if (!(a >= 1e-3 && a <= 1e3))
        throw std::domain_error("i_kappa: a outside [1e-3, 1e3]");
    if (std::fabs(r) > 50.0) throw std::domain_error("i_kappa: |r| > 50 unsupported");
}

// \int_0^infty amp(xi) trig(a cosh xi + b xi) dxi: resolved head panels up to
// the point where the phase speed clears |b|, oscillatory panel summation on
// the tail.
template <class Amp>
quad::ValueErr<double> head_tail_integral(Amp&& amp, bool use_sin, double a, double b,
                                          double tol) {
    double xic = std::asinh((8.0 + std::fabs(b)) / a);
    auto f = [&](double xi) {
        double ph = a * std::cosh(xi) + b * xi;
        return amp(xi) * (use_sin ? std::sin(ph) : std::cos(ph));
    };
    double wmax = (8.0 + std::fabs(b)) + std::fabs(b) + 1.0;
    double width = std::min(0.35, 6.283185307179586 / wmax / 5.0);
    auto head = quad::composite_gl(f, 0.0, xic, width);
    auto tail = quad::osc_cosh_integral(amp, use_sin, a, b, 0.0, xic, tol);
    return {head.value + tail.value, head.err + tail.err};
}

}  // namespace detail

// I_kappa(a, r) = -2a \int (-i zeta)^{kappa-1} K_{2ir}(zeta a) d zeta over the
// unit semicircle with Re zeta > 0. The angular integral collapses to the
// complementary sine integral (kappa = 0) and to sin(a cosh xi)/cosh xi
// (kappa = 1), leaving single xi-integrals.
inline KernelValue i_kappa(int kappa, double a, double r, const QuadratureSpec& spec) {
    detail::check_ikappa_range(a, r);
    double ra = std::fabs(r);
    double tol = spec.abs_tol / std::max(1.0, 8.0 * a);
    if (kappa == 0) {
        double xic = std::asinh((8.0 + 2.0 * ra) / a);
        auto fhead = [&](double xi) {
            return special::sici(a * std::cosh(xi)).si_compl * std::cos(2.0 * r * xi);
        };
        double wmax = 2.0 * (8.0 + 2.0 * ra) + 1.0;
        auto head = quad::composite_gl(fhead, 0.0, xic, std::min(0.35, 6.2831853 / wmax / 5.0));
        auto ampf = [&](double xi) { return special::aux_f(a * std::cosh(xi)); };
        auto ampg = [&](double xi) { return special::aux_g(a * std::cosh(xi)); };
        auto t1 = quad::osc_cosh_integral(ampf, false, a, 2.0 * ra, 0.0, xic, tol);
        auto t2 = quad::osc_cosh_integral(ampf, false, a, -2.0 * ra, 0.0, xic, tol);
        auto t3 = quad::osc_cosh_integral(ampg, true, a, 2.0 * ra, 0.0, xic, tol);
        auto t4 = quad::osc_cosh_integral(ampg, true, a, -2.0 * ra, 0.0, xic, tol);
        double val = 4.0 * a * (head.value + 0.5 * (t1.value + t2.value + t3.value + t4.value));
        double est = 4.0 * a * (head.err + 0.5 * (t1.err + t2.err + t3.err + t4.err));
        if (est > 50.0 * spec.abs_tol)
            throw ToleranceError("i_kappa: estimated error above tolerance");
        return {cplx(val, 0.0), est};
    }
    if (kappa != 1) throw std::invalid_argument("i_kappa: kappa in {0,1}");
    auto amp = [](double xi) { return 1.0 / std::cosh(xi); };
    double xic = std::asinh((8.0 + 2.0 * ra) / a);
    auto fhead = [&](double xi) {
        return std::sin(a * std::cosh(xi)) / std::cosh(xi) * std::cos(2.0 * r * xi);
    };
    double wmax = 2.0 * (8.0 + 2.0 * ra) + 1.0;
    auto head = quad::composite_gl(fhead, 0.0, xic, std::min(0.35, 6.2831853 / wmax / 5.0));
    auto t1 = quad::osc_cosh_integral(amp, true, a, 2.0 * ra, 0.0, xic, tol);
    auto t2 = quad::osc_cosh_integral(amp, true, a, -2.0 * ra, 0.0, xic, tol);
    double val = -4.0 * (head.value + 0.5 * (t1.value + t2.value));
    double est = 4.0 * (head.err + 0.5 * (t1.err + t2.err));
    if (est > 50.0 * spec.abs_tol) throw ToleranceError("i_kappa: estimated error above tolerance");
    return {cplx(0.0, val), est};
}

namespace detail {

// a-phase integral against amp with the (1 - cos 2T xi) window expanded into
// three monotone-phase pieces.
template <class Amp>
double windowed_cosh_integral(Amp&& amp, bool use_sin, double a, double T, double tol) {
    auto p0 = head_tail_integral(amp, use_sin, a, 0.0, tol);
    auto pp = head_tail_integral(amp, use_sin, a, 2.0 * T, tol);
    auto pm = head_tail_integral(amp, use_sin, a, -2.0 * T, tol);
    return p0.value - 0.5 * (pp.value + pm.value);
}

}  // namespace detail

struct IntRI0 {
    double direct;           // nested quadrature of int_0^T r I_0(a,r) dr
    double single_integral;  // a * int (tanh xi / xi)(1 - cos 2T xi) sin(a cosh xi) dxi
};

inline IntRI0 int_r_i0(double a, double T, const QuadratureSpec& spec) {
    if (!(a > 0) || !(T > 0)) throw std::invalid_argument("int_r_i0: a, T > 0");
    detail::check_ikappa_range(a, std::min(T, 50.0));
    QuadratureSpec inner = spec.with_tol(std::max(spec.abs_tol * 0.02, 1e-12));
    auto f = [&](double r) { return r * i_kappa(0, a, r, inner).value.real(); };
    auto d = quad::composite_gl(f, 0.0, T, 0.5);
    auto amp = [](double xi) { return xi < 1e-8 ? 1.0 : std::tanh(xi) / xi; };
    double s = a * detail::windowed_cosh_integral(amp, true, a, T, spec.abs_tol * 0.1);
    return {d.value, s};
}

struct IntRI1 {
    cplx direct;    // nested quadrature (purely imaginary)
    cplx two_term;  // the two-integral representation
};

inline IntRI1 int_r_i1(double a, double T, const QuadratureSpec& spec) {
    if (!(a > 0) || !(T > 0)) throw std::invalid_argument("int_r_i1: a, T > 0");
    detail::check_ikappa_range(a, std::min(T, 50.0));
    QuadratureSpec inner = spec.with_tol(std::max(spec.abs_tol * 0.02, 1e-12));
    auto f = [&](double r) { return r * i_kappa(1, a, r, inner).value.imag(); };
    auto d = quad::composite_gl(f, 0.0, T, 0.5);
    auto amp1 = [](double xi) { return xi < 1e-8 ? 1.0 : std::tanh(xi) / xi; };
    auto amp2 = [](double xi) { return (xi < 1e-8 ? 1.0 : std::tanh(xi) / xi) / std::cosh(xi); };
    double term1 = a * detail::windowed_cosh_integral(amp1, false, a, T, spec.abs_tol * 0.1);
    double term2 = detail::windowed_cosh_integral(amp2, true, a, T, spec.abs_tol * 0.1);
    return {cplx(0.0, d.value), cplx(0.0, term1 - term2)};
}

namespace detail {

inline void decay_check(const std::function<double(double)>& h) {
    double prev = 1e300;
    for (double r : {4.0, 8.0, 16.0, 32.0, 64.0}) {
        double w = std::fabs(h(r)) * std::pow(1.0 + r, 2.05);
        if (!std::isfinite(w) || w > 1.5 * prev)
            throw std::invalid_argument("kernel decay check failed: need h(t) << (|t|+1)^{-2-delta}");
        prev = std::max(1e-300, w);
    }
}

inline double pick_truncation(const std::function<double(double)>& h, double tol) {
    double R = 16.0;
    while (R < 1e6 && std::fabs(h(R)) * R * R > 0.125 * tol) R *= 2.0;
    return R;
}

// decaying integrand over [0, R]: doubling panels keep the mass near the
// origin visible to the adaptive engines
template <class F>
quad::ValueErr<double> integrate_decaying(F&& f, double R, const QuadratureSpec& spec) {
    quad::ValueErr<double> total{0.0, 0.0};
    double lo = 0.0, hi = std::min(4.0, R);
    for (;;) {
        auto r = quad::integrate(f, lo, hi, spec);
        total.value += r.value;
        total.err += r.err;
        if (hi >= R) break;
        lo = hi;
        hi = std::min(2.0 * hi, R);
    }
    return total;
}

}  // namespace detail

// g0 = (1/pi) \int r h(r) tanh(pi r) dr over the real line (even h)
inline KernelValue g0_const(const std::function<double(double)>& h, const QuadratureSpec& spec) {
    detail::decay_check(h);
    double R = detail::pick_truncation(h, spec.abs_tol);
    auto f = [&](double r) { return r * h(r) * std::tanh(detail::pi * r); };
    auto q = detail::integrate_decaying(f, R, spec);
    double tail = std::fabs(h(R)) * R * R;
    return {cplx(2.0 / detail::pi * q.value, 0.0), 2.0 / detail::pi * (q.err + tail)};
}

// g0(x) = 2i \int J_{2ir}(x) r h(r) / cosh(pi r) dr over the real line;
// for even h and real x this reduces to -4 \int_0^infty r h(r) Im J_{2ir}(x) sech(pi r) dr.
inline KernelValue g0_transform(const std::function<double(double)>& h, double x,
                                const QuadratureSpec& spec) {
    if (!(x > 0)) throw std::invalid_argument("g0_transform: x > 0 required");
    detail::decay_check(h);
    double R = std::min(200.0, detail::pick_truncation(h, spec.abs_tol));
    auto f = [&](double r) { return r * h(r) * special::bessel_j_2ir_sech(r, x).imag(); };
    auto q = detail::integrate_decaying(f, R, spec);
    double tail = std::fabs(h(R)) * R * R;
    return {cplx(-4.0 * q.value, 0.0), 4.0 * (q.err + tail)};
}

}  // namespace kzt::kernels
