#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kzt/density.hpp"

using namespace kzt;
using namespace kzt::density;
using arith::Group;
using arith::i64;

namespace {

DensityParams gamma1_single(i64 q, i64 p, double alpha, double mu, double T) {
    DensityParams par;
    par.group = Group::Gamma1;
    par.q = q;
    par.primes = {{p, alpha, mu}};
    par.T = T;
    return par;
}

}  // namespace

TEST_CASE("sarnak bound, Gamma1 exponent arithmetic") {
    auto par = gamma1_single(5, 2, 2.1, 1.0, 10.0);
    auto b = sarnak_rhs(par);
    double L = std::log(1.05) / std::log(2.0);
    CHECK(b.shift == Catch::Approx(L).epsilon(1e-14));
    CHECK(b.vol_exponent == Catch::Approx(1.0 - 3.0 * L + par.eps).epsilon(1e-14));
    CHECK(b.t_exponent == Catch::Approx(1.0 - 4.0 * L + par.eps).epsilon(1e-14));
    CHECK(b.vol == Catch::Approx(8.0 * std::numbers::pi).epsilon(1e-14));
    double expect = std::pow(b.vol, b.vol_exponent) * std::pow(100.0, b.t_exponent);
    CHECK(b.value == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("weyl-law reduction at mu = 0") {
    for (Group g : {Group::Gamma1, Group::GammaFull, Group::Gamma0}) {
        DensityParams par;
        par.group = g;
        par.q = 6;
        par.T = 4.0;
        par.primes = {{5, 2.2, 0.0}};
        auto b = sarnak_rhs(par);
        double vol = arith::volume(g, 6);
        CHECK(b.value ==
              Catch::Approx(std::pow(vol, 1.0 + par.eps) * std::pow(16.0, 1.0 + par.eps))
                  .epsilon(1e-12));
    }
}

TEST_CASE("gamma0 min-branch selection on hand-computed cases") {
    auto chars27 = dirichlet::enumerate_characters(27);
    const dirichlet::DirichletCharacter* prim27 = nullptr;
    for (auto& c : chars27)
        if (c.conductor() == 27) prim27 = &c;
    REQUIRE(prim27);

    DensityParams par;
    par.group = Group::Gamma0;
    par.q = 27;
    par.chi = *prim27;
    par.T = 10.0;
    par.primes = {{2, 2.05, 1.0}};
    auto b = sarnak_rhs(par);
    CHECK(b.qdot == Catch::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(b.qddot == Catch::Approx(3.0).epsilon(1e-12));
    // small shift: Qdot^{4L} < Qddot^{1-4L}
    CHECK(b.min_branch == 0);

    // large shift flips the branch: alpha near the Ramanujan edge at p = 101
    DensityParams par2 = par;
    par2.primes = {{101, 10.0, 1.0}};
    auto b2 = sarnak_rhs(par2);
    CHECK(4.0 * b2.shift * std::log(b2.qdot) > (1.0 - 4.0 * b2.shift) * std::log(b2.qddot));
    CHECK(b2.min_branch == 1);

    // q = 8, conductor 4: Qdot = sqrt(2), Qddot = 2
    auto chars8 = dirichlet::enumerate_characters(8);
    const dirichlet::DirichletCharacter* cond4 = nullptr;
    for (auto& c : chars8)
        if (c.conductor() == 4) cond4 = &c;
    REQUIRE(cond4);
    DensityParams par8;
    par8.group = Group::Gamma0;
    par8.q = 8;
    par8.chi = *cond4;
    par8.T = 5.0;
    par8.primes = {{3, 2.2, 1.0}};
    auto b8 = sarnak_rhs(par8);
    CHECK(b8.qdot == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(b8.qddot == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("huxley bound") {
    DensityParams par;
    par.group = Group::Gamma1;
    par.q = 7;
    par.mu0 = 1.0;
    par.alpha0 = 0.25;
    auto b = huxley_rhs(par);
    CHECK(b.vol_exponent == Catch::Approx(1.0 - 0.75 + par.eps).epsilon(1e-14));
    CHECK(b.value == Catch::Approx(std::pow(b.vol, 0.25 + par.eps)).epsilon(1e-12));

    // alpha0 near 1/2: exponent below zero, flagged vacuous
    DensityParams par2 = par;
    par2.alpha0 = 0.499;
    auto b2 = huxley_rhs(par2);
    CHECK(b2.vol_exponent < 0.0);
    bool flagged = false;
    for (auto& w : b2.warnings)
        if (w.find("vacuously strong") != std::string::npos) flagged = true;
    CHECK(flagged);

    // Gamma0 variant carries the min factor
    auto chars27 = dirichlet::enumerate_characters(27);
    const dirichlet::DirichletCharacter* prim27 = nullptr;
    for (auto& c : chars27)
        if (c.conductor() == 27) prim27 = &c;
    DensityParams par3;
    par3.group = Group::Gamma0;
    par3.q = 27;
    par3.chi = *prim27;
    par3.mu0 = 1.0;
    par3.alpha0 = 0.2;
    auto b3 = huxley_rhs(par3);
    CHECK(b3.min_branch >= 0);
    CHECK(b3.qdot == Catch::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("monotonicity in alpha") {
    double prev = 1e300;
    for (double alpha = 2.05; alpha < 2.65; alpha += 0.05) {
        auto b = sarnak_rhs(gamma1_single(7, 5, alpha, 1.0, 10.0));
        CHECK(b.value < prev);
        prev = b.value;
    }
    prev = 1e300;
    for (double a0 = 0.05; a0 < 0.5; a0 += 0.1) {
        DensityParams par;
        par.group = Group::Gamma1;
        par.q = 7;
        par.mu0 = 1.0;
        par.alpha0 = a0;
        auto b = huxley_rhs(par);
        CHECK(b.value < prev);
        prev = b.value;
    }
}

TEST_CASE("parameter validation and warnings") {
    CHECK_THROWS_AS(sarnak_rhs(gamma1_single(5, 2, 1.9, 1.0, 10.0)), std::invalid_argument);
    CHECK_THROWS_AS(sarnak_rhs(gamma1_single(5, 2, 2.9, 1.0, 10.0)), std::invalid_argument);
    CHECK_THROWS_AS(sarnak_rhs(gamma1_single(10, 2, 2.1, 1.0, 10.0)), std::invalid_argument);
    CHECK_THROWS_AS(sarnak_rhs(gamma1_single(5, 4, 2.1, 1.0, 10.0)), std::invalid_argument);

    DensityParams two;
    two.group = Group::Gamma1;
    two.q = 1;
    two.T = 2.0;
    two.primes = {{2, 2.1, 0.7}, {3, 2.3, 0.7}};  // weights exceed 1
    CHECK_THROWS_AS(sarnak_rhs(two), std::invalid_argument);

    auto b = sarnak_rhs(gamma1_single(5, 11, 2.5, 1.0, 3.0));  // p > T
    bool warned = false;
    for (auto& w : b.warnings)
        if (w.find("nonuniform") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("rankin parameter choices") {
    // Gamma1(5), mu = 1 at p = 2, T = 10: floor(log((8 pi)^{3/2} 1e4)/log 2) = 20
    auto par = gamma1_single(5, 2, 2.1, 1.0, 10.0);
    auto e = ell_choice(Theorem::sarnak, par);
    CHECK(e.ell.at(2) == 20);

    // floor consistency: ell <= mu log(...)/log p < ell + 1
    for (double mu : {0.3, 0.7, 1.0}) {
        auto p2 = gamma1_single(5, 3, 2.2, mu, 7.0);
        auto ee = ell_choice(Theorem::sarnak, p2);
        double raw = mu * ee.ell_log_base / std::log(3.0);
        CHECK(double(ee.ell.at(3)) <= raw);
        CHECK(raw < double(ee.ell.at(3) + 1));
    }

    // mu = 0 gives ell = 0
    auto pz = gamma1_single(5, 2, 2.1, 0.0, 10.0);
    CHECK(ell_choice(Theorem::sarnak, pz).ell.at(2) == 0);

    // huxley Gamma1(5), mu0 = 1: X = (8 pi)^{3/2}
    DensityParams ph;
    ph.group = Group::Gamma1;
    ph.q = 5;
    ph.mu0 = 1.0;
    ph.alpha0 = 0.25;
    auto eh = ell_choice(Theorem::huxley, ph);
    CHECK(eh.X == Catch::Approx(std::pow(8.0 * std::numbers::pi, 1.5)).epsilon(1e-12));
    CHECK(eh.X == Catch::Approx(126.0).margin(0.1));
}

TEST_CASE("weyl comparator") {
    CHECK(weyl_comparator(Group::Gamma0, 1, 10.0) == Catch::Approx(25.0 / 3.0).epsilon(1e-13));
    CHECK(weyl_comparator(Group::Gamma1, 3, 0.0) == 0.0);
    CHECK(weyl_comparator(Group::GammaFull, 2, 1.0) == Catch::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("squarefree improvement replaces exponent 3 by 4") {
    auto par = gamma1_single(6, 5, 2.2, 1.0, 4.0);
    par.squarefree_improvement = true;
    auto improved = sarnak_rhs(par);
    CHECK(improved.vol_exponent == Catch::Approx(1.0 - 4.0 * improved.shift + par.eps));

    auto par2 = gamma1_single(4, 5, 2.2, 1.0, 4.0);  // not squarefree: no change
    par2.squarefree_improvement = true;
    auto plain = sarnak_rhs(par2);
    CHECK(plain.vol_exponent == Catch::Approx(1.0 - 3.0 * plain.shift + par2.eps));
}

TEST_CASE("twist conductors in the squarefree regime") {
    i64 p = 5;
    auto chars = dirichlet::enumerate_characters(p);
    dirichlet::DirichletCharacter unram = dirichlet::principal_character(1);
    const dirichlet::DirichletCharacter* ram = nullptr;
    for (auto& c : chars)
        if (!c.is_principal()) { ram = &c; break; }
    REQUIRE(ram);

    // steinberg: unramified twist keeps conductor 1, ramified gives 2
    CHECK(twist_conductor(LocalType::steinberg, p, unram, unram, unram) == 1);
    CHECK(twist_conductor(LocalType::steinberg, p, unram, unram, *ram) == 2);

    // principal series, omega1 = conj(omega'): c = 0 + c(omega2 omega')
    auto conj = ram->conjugate();
    CHECK(twist_conductor(LocalType::principal_series, p, conj, unram, *ram) == 1);
    auto sq = (*ram) * (*ram);
    int expect_sq = sq.conductor() == 1 ? 0 : 1;
    CHECK(twist_conductor(LocalType::principal_series, p, conj, *ram, *ram) == expect_sq);

    // unramified twist leaves the conductor unchanged
    CHECK(twist_conductor(LocalType::principal_series, p, *ram, unram, unram) == 1);
    CHECK(twist_conductor(LocalType::principal_series, p, *ram, *ram, unram) == 2);

    // never exceeds 2 under the preconditions
    for (auto& w1 : chars)
        for (auto& w2 : chars)
            for (auto& wp : chars) {
                int c = twist_conductor(LocalType::principal_series, p, w1, w2, wp);
                CHECK(c >= 0);
                CHECK(c <= 2);
            }

    // steinberg rejects ramified omega1
    CHECK_THROWS_AS(twist_conductor(LocalType::steinberg, p, *ram, unram, unram),
                    std::invalid_argument);
}

TEST_CASE("twist count factor") {
    auto r6 = twist_count_factor(6);
    CHECK(r6.num == 2);
    CHECK(r6.den == 1);
    auto r1 = twist_count_factor(1);
    CHECK(r1.num == 1);
    CHECK(r1.den == 1);
    auto r30 = twist_count_factor(30);
    CHECK(r30.num == 1);
    CHECK(r30.den == 1);
    CHECK_THROWS_AS(twist_count_factor(12), std::invalid_argument);
}
