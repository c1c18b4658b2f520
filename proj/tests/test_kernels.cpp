#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kzt/kernels.hpp"

using namespace kzt;
using namespace kzt::kernels;
using quad::cplx;
using quad::QuadratureSpec;

namespace {

QuadratureSpec spec_tol(double tol, quad::Method m = quad::Method::adaptive_simpson) {
    QuadratureSpec s;
    s.abs_tol = tol;
    s.rel_tol = tol;
    s.method = m;
    return s;
}

// uniform bound shape: sqrt(a) for a >= 1, else min(sqrt(a), a(1 + log 1/a))
double uniform_bound_shape(double a) {
    if (a >= 1.0) return std::sqrt(a);
    return std::min(std::sqrt(a), a * (1.0 + std::log(1.0 / a)));
}

}  // namespace

TEST_CASE("sine and cosine integral auxiliaries") {
    const double pi2 = std::numbers::pi / 2;
    CHECK(special::sici(1.0).si_compl == Catch::Approx(pi2 - 0.94608307036718301).margin(1e-14));
    CHECK(special::sici(1.0).ci == Catch::Approx(0.33740392290096813).margin(1e-14));
    CHECK(special::sici(5.0).si_compl == Catch::Approx(0.020865081850222482).margin(1e-14));
    CHECK(special::sici(5.0).ci == Catch::Approx(-0.19002974965664388).margin(1e-14));
    // both evaluation regimes around the series/CF switch
    CHECK(special::sici(11.5).si_compl == Catch::Approx(0.035084089812745094).margin(1e-13));
    CHECK(special::sici(12.5).si_compl == Catch::Approx(0.078459274508396585).margin(1e-13));
    CHECK(special::sici(12.5).ci == Catch::Approx(-0.011408349595141619).margin(1e-13));
    CHECK(special::sici(100.0).si_compl == Catch::Approx(0.0085708599058403259).margin(1e-14));
    CHECK(special::sici(100.0).ci == Catch::Approx(-0.0051488251426104921).margin(1e-14));

    for (double w : {0.5, 3.0, 9.0, 13.0, 40.0, 300.0}) {
        auto [sic, civ] = special::sici(w);
        CHECK(special::aux_f(w) * std::cos(w) + special::aux_g(w) * std::sin(w) ==
              Catch::Approx(sic).margin(1e-14));
        CHECK(special::aux_f(w) > 0.0);
        CHECK(special::aux_g(w) > 0.0);
    }
}

TEST_CASE("complex log gamma") {
    auto lg = special::log_gamma(cplx(1.0, 1.0));
    CHECK(lg.real() == Catch::Approx(-0.65092319930185634).margin(1e-13));
    CHECK(lg.imag() == Catch::Approx(-0.3016403204675332).margin(1e-13));
    auto lg2 = special::log_gamma(cplx(1.0, 2.6));
    CHECK(lg2.real() == Catch::Approx(-2.6873761537495503).margin(1e-12));
    CHECK(lg2.imag() == Catch::Approx(0.63751091904574662).margin(1e-12));
    CHECK(special::log_gamma(cplx(3.5, 0.0)).real() ==
          Catch::Approx(1.2009736023470742).margin(1e-13));
}

TEST_CASE("scaled imaginary-order J series") {
    for (double x : {0.3, 1.0, 2.5, 8.0}) {
        auto v = special::bessel_j_2ir_sech(0.0, x);
        CHECK(v.real() == Catch::Approx(std::cyl_bessel_j(0.0, x)).margin(1e-13));
        CHECK(std::abs(v.imag()) < 1e-13);
    }
    auto v = special::bessel_j_2ir_sech(1.5, 2.0);
    CHECK(v.real() == Catch::Approx(0.30611978195544332).margin(1e-12));
    CHECK(v.imag() == Catch::Approx(-0.2902356658387605).margin(1e-12));
    // no overflow at large r
    auto big = special::bessel_j_2ir_sech(45.0, 1.0);
    CHECK(std::isfinite(big.real()));
    CHECK(std::isfinite(big.imag()));
}

TEST_CASE("h_kT closed form vs quadrature, kappa = 0") {
    auto spec = spec_tol(1e-10);
    CHECK(h_kT_closed(0, 0.0, 1.0) == Catch::Approx(0.29085033052323096).margin(1e-10));
    CHECK(h_kT_closed(0, 0.7, 2.0) == Catch::Approx(0.43496112287689184).margin(1e-10));

    for (double T : {1.0, 5.0, 10.0}) {
        for (double t = 0.0; t <= T + 1e-9; t += T / 10.0) {
            double closed = h_kT_closed(0, t, T);
            auto integ = h_kT_integral(0, t, T, spec);
            REQUIRE(closed == Catch::Approx(integ.value.real()).margin(1e-8));
            REQUIRE(closed > 0.0);
        }
        for (double y = 0.05; y < 0.5; y += 0.1) {
            double closed = h_kT_closed(0, cplx(0.0, y), T);
            auto integ = h_kT_integral(0, cplx(0.0, y), T, spec);
            REQUIRE(closed == Catch::Approx(integ.value.real()).margin(1e-8));
            REQUIRE(closed > 0.0);
        }
    }
    CHECK_THROWS_AS(h_kT_closed(0, cplx(0.0, 0.6), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(h_kT_closed(0, cplx(0.3, 0.2), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(h_kT_closed(0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("h_kT closed form vs quadrature, kappa = 1") {
    auto spec = spec_tol(1e-10);
    CHECK(h_kT_closed(1, 0.0, 1.0) > 0.0);
    for (double T : {1.0, 5.0, 10.0})
        for (double t = 0.0; t <= T + 1e-9; t += T / 8.0) {
            double closed = h_kT_closed(1, t, T);
            auto integ = h_kT_integral(1, t, T, spec);
            REQUIRE(closed == Catch::Approx(integ.value.real()).margin(1e-8));
            REQUIRE(closed > 0.0);
        }
    CHECK_THROWS_AS(h_kT_closed(1, cplx(0.0, 0.2), 1.0), std::invalid_argument);
}

TEST_CASE("h_kT symmetry and grid minimum") {
    auto spec = spec_tol(1e-10);
    CHECK(h_kT_integral(0, 0.3, 2.0, spec).value.real() ==
          Catch::Approx(h_kT_integral(0, -0.3, 2.0, spec).value.real()).margin(1e-12));
    for (double T : {1.0, 5.0, 10.0}) {
        double mn = 1e300;
        for (double t = 0.0; t <= T + 1e-9; t += T / 64.0)
            mn = std::min(mn, h_kT_closed(0, t, T));
        CHECK(mn >= 0.05);
        double mn1 = 1e300;
        for (double t = 0.0; t <= T + 1e-9; t += T / 64.0)
            mn1 = std::min(mn1, h_kT_closed(1, t, T));
        CHECK(mn1 >= 0.05);
    }
    // t = T edge explicitly
    CHECK(h_kT_closed(0, 1.0, 1.0) >= 0.05);
}

TEST_CASE("h_X closed form") {
    CHECK(std::abs(h_X(cplx(0.0, 0.0), 7.0) - cplx(4.0)) < 1e-14);
    // boundary value it = 1/2, X = 4: ((2 + 1/2)/(3/4))^2 = 100/9
    CHECK(h_X(cplx(0.0, -0.5), 4.0).real() == Catch::Approx(100.0 / 9.0).margin(1e-12));
    // real t identity h_X(t) = 4 cos^2(t ln X)/(t^2+1)^2
    for (double t : {0.3, 1.0, 2.7}) {
        double X = std::exp(1.0);
        double expect = 4.0 * std::pow(std::cos(t * std::log(X)), 2) / std::pow(t * t + 1.0, 2);
        CHECK(h_X(cplx(t, 0.0), X).real() == Catch::Approx(expect).margin(1e-13));
        CHECK(std::abs(h_X(cplx(t, 0.0), X).imag()) < 1e-14);
        CHECK(h_X(cplx(t, 0.0), X).real() >= 0.0);
    }
    // real exponential growth statement: h_X(-is) >= X^{2s} on s in (0, 1/2)
    for (double s = 0.05; s < 0.5; s += 0.1)
        CHECK(h_X(cplx(0.0, -s), 9.0).real() >= std::pow(9.0, 2 * s));
}

TEST_CASE("bessel_k_imag") {
    auto spec = spec_tol(1e-11);
    auto k0 = bessel_k_imag(0.0, cplx(1.0, 0.0), spec);
    CHECK(k0.value.real() == Catch::Approx(std::cyl_bessel_k(0.0, 1.0)).margin(1e-9));
    CHECK(std::abs(k0.value.imag()) < 1e-12);
    CHECK(k0.est_error < 1e-9);

    for (double x : {0.5, 1.0, 2.0, 5.0})
        CHECK(bessel_k_imag(0.0, cplx(x, 0.0), spec).value.real() ==
              Catch::Approx(std::cyl_bessel_k(0.0, x)).margin(1e-9));

    // real zeta gives real values for any r
    auto kr = bessel_k_imag(0.8, cplx(2.0, 0.0), spec);
    CHECK(std::abs(kr.value.imag()) < 1e-12);

    // two-method agreement
    auto a1 = bessel_k_imag(0.5, cplx(2.0, 0.0), spec_tol(1e-11, quad::Method::adaptive_simpson));
    auto a2 = bessel_k_imag(0.5, cplx(2.0, 0.0), spec_tol(1e-11, quad::Method::double_exponential));
    auto a3 = bessel_k_imag(0.5, cplx(2.0, 0.0), spec_tol(1e-11, quad::Method::gauss_legendre_panel));
    CHECK(std::abs(a1.value - a2.value) < 1e-9);
    CHECK(std::abs(a1.value - a3.value) < 1e-9);

    CHECK_THROWS_AS(bessel_k_imag(0.0, cplx(-1.0, 0.5), spec), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k_imag(60.0, cplx(1.0, 0.0), spec), std::domain_error);
}

TEST_CASE("i_kappa against the defining semicircle integral") {
    auto spec = spec_tol(1e-9);
    struct Ref { double a, r, i0, i1imag; };
    // reference values from the semicircle definition at 25-digit precision
    const Ref refs[] = {
        {1.0, 0.7, 1.9080671892775994, -2.31261645982524418},
        {0.5, 0.0, 2.63920700874559529, -3.52986495424312493},
        {2.0, 1.3, 0.859493098451220319, -1.83711136499778},
    };
    for (const auto& R : refs) {
        auto v0 = i_kappa(0, R.a, R.r, spec);
        CHECK(v0.value.real() == Catch::Approx(R.i0).margin(2e-8));
        CHECK(std::abs(v0.value.imag()) < 1e-15);
        auto v1 = i_kappa(1, R.a, R.r, spec);
        CHECK(v1.value.imag() == Catch::Approx(R.i1imag).margin(2e-8));
        CHECK(std::abs(v1.value.real()) < 1e-15);
    }
}

TEST_CASE("i_kappa alternate single-integral route") {
    // I_0(a, r) = (2a/r) \int tanh(xi) sin(2 r xi) sin(a cosh xi) dxi
    auto spec = spec_tol(1e-9);
    for (auto [a, r] : {std::pair{0.5, 1.0}, {1.0, 2.0}, {5.0, 1.5}, {0.05, 0.8}}) {
        if (a < 1e-3) continue;
        auto amp = [](double xi) { return std::tanh(xi); };
        auto pm = quad::osc_cosh_integral(amp, false, a, -2.0 * r, 0.0,
                                          std::asinh((8.0 + 2.0 * r) / a), 1e-11);
        auto pp = quad::osc_cosh_integral(amp, false, a, 2.0 * r, 0.0,
                                          std::asinh((8.0 + 2.0 * r) / a), 1e-11);
        auto fhead = [&](double xi) {
            return std::tanh(xi) * std::sin(2.0 * r * xi) * std::sin(a * std::cosh(xi));
        };
        double xic = std::asinh((8.0 + 2.0 * r) / a);
        auto head = quad::composite_gl(fhead, 0.0, xic, 0.05);
        // sin(2 r xi) sin(a cosh xi) = (cos(phi-) - cos(phi+))/2
        double alt = (2.0 * a / r) * (head.value + 0.5 * (pm.value - pp.value));
        double direct = i_kappa(0, a, r, spec).value.real();
        REQUIRE(direct == Catch::Approx(alt).margin(1e-6));
    }
}

TEST_CASE("i_kappa small-a decay") {
    auto spec = spec_tol(1e-9);
    double prev = 1e300;
    for (double a : {1e-1, 1e-2, 1e-3}) {
        double v = std::abs(i_kappa(0, a, 0.5, spec).value);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.05);
    CHECK_THROWS_AS(i_kappa(0, 1e-4, 0.5, spec), std::domain_error);
    CHECK_THROWS_AS(i_kappa(0, 1.0, 80.0, spec), std::domain_error);
}

TEST_CASE("integrated kernel identities, kappa = 0") {
    auto spec = spec_tol(1e-8);
    auto r11 = int_r_i0(1.0, 1.0, spec);
    CHECK(r11.direct == Catch::Approx(0.89652565594093316).margin(1e-6));
    CHECK(r11.single_integral == Catch::Approx(0.89652565594093316).margin(1e-6));

    auto r01 = int_r_i0(0.1, 1.0, spec);
    CHECK(r01.direct == Catch::Approx(0.044461896548674195).margin(1e-6));

    for (auto [a, T] : {std::pair{0.1, 2.0}, {1.0, 5.0}, {10.0, 1.0}}) {
        auto v = int_r_i0(a, T, spec);
        REQUIRE(std::fabs(v.direct - v.single_integral) < 1e-6);
    }
}

TEST_CASE("integrated kernel identities, kappa = 1") {
    auto spec = spec_tol(1e-8);
    for (auto [a, T] : {std::pair{1.0, 1.0}, {0.1, 2.0}, {10.0, 1.0}}) {
        auto v = int_r_i1(a, T, spec);
        REQUIRE(std::abs(v.direct - v.two_term) < 1e-6);
        REQUIRE(std::fabs(v.direct.real()) < 1e-9);
    }
}

TEST_CASE("uniform bound on the integrated kernel") {
    auto spec = spec_tol(1e-8);
    double worst = 0.0;
    for (double a : {0.1, 0.5, 1.0, 10.0})
        for (double T : {1.0, 2.0, 5.0, 10.0}) {
            auto v0 = int_r_i0(a, T, spec);
            auto v1 = int_r_i1(a, T, spec);
            double shape = uniform_bound_shape(a);
            worst = std::max(worst, std::fabs(v0.single_integral) / shape);
            worst = std::max(worst, std::abs(v1.two_term) / shape);
        }
    CHECK(worst <= 10.0);  // single fixed constant across the sweep
}

TEST_CASE("g0 constant and transform") {
    auto spec = spec_tol(1e-9);
    // h_X with X = 1: h(r) = 4/(r^2+1)^2
    auto h = [](double r) { return 4.0 / std::pow(r * r + 1.0, 2); };
    auto g1 = g0_const(h, spec_tol(1e-9, quad::Method::adaptive_simpson));
    auto g2 = g0_const(h, spec_tol(1e-9, quad::Method::gauss_legendre_panel));
    CHECK(std::abs(g1.value - g2.value) < 1e-7);
    CHECK(g1.value.real() > 0.0);

    auto t1 = g0_transform(h, 1.0, spec);
    CHECK(std::abs(t1.value.imag()) < 1e-12);  // real for real x and even h

    // the transform vanishes as x -> 0, through slow logarithmic decay
    double at_half = std::abs(g0_transform(h, 0.5, spec).value);
    double small = 0.0;
    for (double x : {0.02, 0.004, 0.0008})
        small = std::max(small, std::abs(g0_transform(h, x, spec).value));
    CHECK(small < at_half);
    CHECK(small < 0.25);

    // decay check rejects a non-decaying kernel
    auto bad = [](double) { return 1.0; };
    CHECK_THROWS_AS(g0_const(bad, spec), std::invalid_argument);
}
