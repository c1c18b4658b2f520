#pragma once

// Quadrature engines: adaptive Simpson, adaptive Gauss-Legendre panels,
// tanh-sinh, and a phase-panel engine for integrands oscillating through
// cos/sin(a cosh(x) + b x + c). Infinite oscillatory ranges are summed
// panel-by-panel between zeros of the oscillation and accelerated with
// iterated averaging of the partial sums.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kzt::quad {

using cplx = std::complex<double>;

enum class Method { adaptive_simpson, gauss_legendre_panel, double_exponential };

struct QuadratureSpec {
    Method method = Method::adaptive_simpson;
    int max_subdiv = 40;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double truncation = 0.0;  // 0 = choose from the analytic tail bound

    QuadratureSpec with_tol(double t) const {
        QuadratureSpec s = *this;
        s.abs_tol = t;
        return s;
    }
};

struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
struct ValueErr {
    T value;
    double err;
};

namespace detail {

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric half listed)
inline constexpr double gl15_x[8] = {
    0.0,
    0.2011940939974345223006283,
    0.3941513470775633698972074,
    0.5709721726085388475372267,
    0.7244177313601700474161861,
    0.8482065834104272162006483,
    0.9372733924007059043077589,
    0.9879925180204854284895657,
};
inline constexpr double gl15_w[8] = {
    0.2025782419255612728806202,
    0.1984314853271115764561183,
    0.1861610000155622110268006,
    0.1662692058169939335532009,
    0.1395706779261543144478048,
    0.1071592204671719350118695,
    0.0703660474881081247092674,
    0.0307532419961172683546284,
};

template <class F>
auto gl15(F&& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto acc = gl15_w[0] * f(mid);
    for (int i = 1; i < 8; ++i) {
        double dx = half * gl15_x[i];
        acc += gl15_w[i] * (f(mid + dx) + f(mid - dx));
    }
    return acc * half;
}

template <class T>
double absval(const T& v) {
    if constexpr (std::is_same_v<T, cplx>) return std::abs(v);
    else return std::fabs(v);
}

// force_depth guards against integrands whose features fall between the
// initial sample points: acceptance is deferred until a few forced splits.
template <class F, class T>
void simpson_rec(F& f, double a, double m, double b, T fa, T fm, T fb, T whole, double tol,
                 int depth, int force_depth, T& out, double& err) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    T flm = f(lm), frm = f(rm);
    T left = (fa + 4.0 * flm + fm) * ((m - a) / 6.0);
    T right = (fm + 4.0 * frm + fb) * ((b - m) / 6.0);
    T delta = left + right - whole;
    if (depth <= 0 || (force_depth <= 0 && absval(delta) <= 15.0 * tol)) {
        out += left + right + delta / 15.0;
        err += absval(delta) / 15.0;
        return;
    }
    simpson_rec(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1, force_depth - 1, out, err);
    simpson_rec(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1, force_depth - 1, out, err);
}

}  // namespace detail

template <class F>
auto adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    using T = decltype(f(a));
    if (a == b) return ValueErr<T>{T{}, 0.0};
    double m = 0.5 * (a + b);
    T fa = f(a), fm = f(m), fb = f(b);
    T whole = (fa + 4.0 * fm + fb) * ((b - a) / 6.0);
    T out{};
    double err = 0.0;
    detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth, 5, out, err);
    return ValueErr<T>{out, err};
}

// Adaptive bisection with GL-15 panels.
template <class F>
auto adaptive_gl(F&& f, double a, double b, double tol, int max_depth = 40) {
    using T = decltype(f(a));
    struct Panel { double a, b; T coarse; int depth; int force; };
    T total{};
    double err = 0.0;
    std::vector<Panel> stack{{a, b, detail::gl15(f, a, b), max_depth, 3}};
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        double m = 0.5 * (p.a + p.b);
        T left = detail::gl15(f, p.a, m), right = detail::gl15(f, m, p.b);
        double delta = detail::absval(left + right - p.coarse);
        if (p.depth <= 0 || (p.force <= 0 && delta <= tol * (p.b - p.a) / (b - a))) {
            total += left + right;
            err += delta;
            continue;
        }
        stack.push_back({p.a, m, left, p.depth - 1, p.force - 1});
        stack.push_back({m, p.b, right, p.depth - 1, p.force - 1});
    }
    return ValueErr<T>{total, err};
}

// tanh-sinh on a finite interval
template <class F>
auto tanh_sinh(F&& f, double a, double b, double tol, int max_level = 12) {
    using T = decltype(f(a));
    const double pi2 = 1.5707963267948966;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto node = [&](double t, double& x, double& w) {
        double sh = std::sinh(t);
        double u = std::tanh(pi2 * sh);
        x = mid + half * u;
        double ch = std::cosh(pi2 * sh);
        w = half * pi2 * std::cosh(t) / (ch * ch);
    };
    double h = 1.0;
    double x, w;
    node(0.0, x, w);
    T sum = f(x) * w;
    T prev{};
    double err = 1e300;
    for (int level = 0; level < max_level; ++level) {
        prev = sum * h;
        if (level > 0) h *= 0.5;
        T add{};
        double t0 = level == 0 ? h : h;
        double step = level == 0 ? h : 2.0 * h;
        for (double t = t0;; t += step) {
            node(t, x, w);
            double xm, wm;
            node(-t, xm, wm);
            if (w < 1e-320 && wm < 1e-320) break;
            T term = (x > a && x < b ? f(x) * w : T{}) + (xm > a && xm < b ? f(xm) * wm : T{});
            add += term;
            if (t > 7.0) break;
        }
        sum += add;
        T cur = sum * h;
        err = detail::absval(cur - prev);
        if (level > 2 && err < tol) return ValueErr<T>{cur, err};
    }
    return ValueErr<T>{sum * h, err};
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
    using T = decltype(f(a));
    ValueErr<T> r;
    switch (spec.method) {
        case Method::adaptive_simpson:
            r = adaptive_simpson(f, a, b, spec.abs_tol, spec.max_subdiv);
            break;
        case Method::gauss_legendre_panel:
            r = adaptive_gl(f, a, b, spec.abs_tol, spec.max_subdiv);
            break;
        case Method::double_exponential:
            r = tanh_sinh(f, a, b, spec.abs_tol);
            break;
    }
    return r;
}

// Fixed-width composite GL-15, error estimated by one halving.
template <class F>
auto composite_gl(F&& f, double a, double b, double panel_width) {
    using T = decltype(f(a));
    if (b <= a) return ValueErr<T>{T{}, 0.0};
    int n = std::max(1, int(std::ceil((b - a) / panel_width)));
    auto pass = [&](int panels) {
        T acc{};
        double h = (b - a) / panels;
        for (int i = 0; i < panels; ++i) acc += detail::gl15(f, a + i * h, a + (i + 1) * h);
        return acc;
    };
    T coarse = pass(n), fine = pass(2 * n);
    return ValueErr<T>{fine, detail::absval(fine - coarse)};
}

namespace detail {

// Apex of the iterated-averaging triangle over the most recent partial sums.
inline std::pair<double, double> averaged_limit(const std::vector<double>& partial) {
    size_t take = std::min<size_t>(partial.size(), 48);
    std::vector<double> v(partial.end() - long(take), partial.end());
    double prev_apex = v.back();
    double err = 1e300;
    while (v.size() > 1) {
        for (size_t i = 0; i + 1 < v.size(); ++i) v[i] = 0.5 * (v[i] + v[i + 1]);
        v.pop_back();
        err = std::fabs(v.back() - prev_apex);
        prev_apex = v.back();
    }
    return {prev_apex, err};
}

}  // namespace detail

// \int_{x0}^\infty amp(x) * trig(a cosh x + b x + c) dx with a >= 0 and the
// phase strictly increasing on [x0, inf). Panels are cut at successive phase
// multiples of pi; the alternating panel sums are averaged iteratively.
template <class Amp>
ValueErr<double> osc_cosh_integral(Amp&& amp, bool use_sin, double a, double b, double c,
                                   double x0, double tol, int max_panels = 2048) {
    auto phase = [&](double x) { return a * std::cosh(x) + b * x + c; };
    auto dphase = [&](double x) { return a * std::sinh(x) + b; };
    auto integrand = [&](double x) {
        double ph = phase(x);
        return amp(x) * (use_sin ? std::sin(ph) : std::cos(ph));
    };
    if (dphase(x0) <= 0.0)
        throw std::invalid_argument("osc_cosh_integral: phase must increase on the tail");

    const double pi = 3.14159265358979323846;
    double p0 = phase(x0);
    double target = std::ceil(p0 / pi) * pi;
    if (target - p0 < 1e-9) target += pi;

    std::vector<double> partial;
    double sum = 0.0;
    double x_prev = x0;
    double best = 0.0, best_err = 1e300;
    for (int k = 0; k < max_panels; ++k) {
        // Newton with bisection guard for phase(x) = target
        double lo = x_prev, hi = x_prev + pi / dphase(x_prev);
        while (phase(hi) < target) {
            lo = hi;
            hi += pi / dphase(hi);
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 60; ++it) {
            double fx = phase(x) - target;
            if (fx > 0) hi = x;
            else lo = x;
            double step = fx / dphase(x);
            double xn = x - step;
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
            if (std::fabs(xn - x) < 1e-15 * (1.0 + std::fabs(x))) { x = xn; break; }
            x = xn;
        }
        double term = detail::gl15(integrand, x_prev, x);
        sum += term;
        partial.push_back(sum);
        x_prev = x;
        target += pi;

        if (partial.size() >= 12) {
            auto [val, err] = detail::averaged_limit(partial);
            if (err < best_err) { best = val; best_err = err; }
            if (best_err < tol && partial.size() >= 16) return {best, best_err};
        }
        // absolutely convergent exit: panel bound already negligible
        if (std::fabs(term) < tol * 0.01 && k >= 8) return {sum, 2.0 * std::fabs(term)};
    }
    return {best, best_err};
}

}  // namespace kzt::quad
