#include <catch2/catch_amalgamated.hpp>

#include "optomech/variational.hpp"
#include "support/oracles.hpp"

using namespace optomech;
using Catch::Approx;

TEST_CASE("series energy spot values", "[variational]") {
    SECTION("free theory") {
        REQUIRE(variational_energy(0.0, 0.0, 0.0, 50.0, 4) == Approx(0.0).margin(1e-15));
    }
    SECTION("hand-evaluated order-1 value at the origin") {
        // gamma = 0.4, eta = 50, r = s = 0, n <= 1:
        // gamma^2/8 - gamma^2/4 - gamma^2/(8 eta) - gamma^4/(16 eta) = -0.020432
        double e = variational_energy(0.0, 0.0, 0.4, 50.0, 1);
        REQUIRE(e == Approx(-0.020432).margin(1e-12));
    }
    SECTION("convexity near the optimum along r") {
        auto sol = solve_squeezing(0.5, 20.0, 4, SqueezingSolution::Regime::finite_eta);
        REQUIRE_FALSE(sol.diverged);
        double e0 = variational_energy(sol.r, sol.s, 0.5, 20.0, 4);
        for (double d : {0.02, 0.05, 0.1, 0.2}) {
            REQUIRE(variational_energy(sol.r + d, sol.s, 0.5, 20.0, 4) > e0);
            REQUIRE(variational_energy(sol.r - d, sol.s, 0.5, 20.0, 4) > e0);
        }
    }
    SECTION("series order must be positive") {
        REQUIRE_THROWS_AS(variational_energy(0.0, 0.0, 0.4, 50.0, 0), InvalidParameterError);
    }
}

TEST_CASE("classical-limit closed forms", "[variational]") {
    SECTION("r at gamma 0.6") {
        auto sol = solve_squeezing(0.6, 1e9, 4, SqueezingSolution::Regime::classical_limit);
        REQUIRE_FALSE(sol.diverged);
        REQUIRE(sol.r == Approx(0.25 * std::log(1.0 / 0.64)).margin(1e-14));
        REQUIRE(sol.r == Approx(0.111572).margin(1e-6));
    }
    SECTION("s at gamma 0.6 from the plug-through of the s equation") {
        // with e^{4r} = 1/0.64: sinh^2 r = 0.0125, sinh 2r = 0.225, e^{2r} = 1.25
        // bracket = 0.0125 + 0.225 + 0.5 + 0.09*1.25 = 0.85 exactly,
        // so e^{4s} = 1/(1 - 0.36*0.85) = 1/0.694
        auto sol = solve_squeezing(0.6, 1e9, 4, SqueezingSolution::Regime::classical_limit);
        double s_want = 0.25 * std::log(1.0 / 0.694);
        REQUIRE(sol.s == Approx(s_want).margin(1e-12));
        REQUIRE(sol.s == Approx(0.0913208296188331).margin(1e-12));
        REQUIRE(sol.residual < 1e-10);
    }
    SECTION("divergence flagged at and beyond the critical coupling") {
        REQUIRE(solve_squeezing(1.0, 1e9, 4, SqueezingSolution::Regime::classical_limit)
                    .diverged);
        REQUIRE(solve_squeezing(1.3, 1e9, 4, SqueezingSolution::Regime::classical_limit)
                    .diverged);
    }
}

TEST_CASE("finite-eta fixed point", "[variational]") {
    const double gamma = 0.5, eta = 20.0;
    auto sol = solve_squeezing(gamma, eta, 4, SqueezingSolution::Regime::finite_eta);
    REQUIRE_FALSE(sol.diverged);
    REQUIRE(sol.residual < 1e-10);

    SECTION("agrees with an independent 2-D minimization of the series energy") {
        auto f = [&](double r, double s) {
            return variational_energy(r, s, gamma, eta, 4);
        };
        auto best = test_oracle::grid_polish(f, 0.0, 0.2, 0.0, 0.2, 100, 1e-13);
        REQUIRE(std::abs(best.x - sol.r) < 1e-6);
        REQUIRE(std::abs(best.y - sol.s) < 1e-6);
    }
    SECTION("stationarity of the series energy at the fixed point") {
        auto f = [&](double r, double s) {
            return variational_energy(r, s, gamma, eta, 4);
        };
        REQUIRE(test_oracle::fd_gradient_norm(f, sol.r, sol.s) < 1e-6);
    }
    SECTION("finite-eta r differs from the classical value") {
        auto cl = solve_squeezing(gamma, eta, 4, SqueezingSolution::Regime::classical_limit);
        REQUIRE(std::abs(sol.r - cl.r) > 1e-4);  // mutual feedback at finite eta
    }
    SECTION("divergence flagged near the critical coupling") {
        auto bad = solve_squeezing(0.99, eta, 4, SqueezingSolution::Regime::finite_eta);
        REQUIRE(bad.diverged);
    }
}

TEST_CASE("dependence structure of the coupled equations", "[variational]") {
    // classical limit: r is a closed form, independent of anything s-related;
    // finite eta: the s equation feeds back into r
    auto cl1 = solve_squeezing(0.5, 10.0, 4, SqueezingSolution::Regime::classical_limit);
    auto fe = solve_squeezing(0.5, 10.0, 4, SqueezingSolution::Regime::finite_eta);
    REQUIRE(cl1.r == Approx(0.25 * std::log(1.0 / 0.75)).margin(1e-14));
    REQUIRE(std::abs(fe.r - cl1.r) > 1e-4);
    REQUIRE_FALSE(fe.diverged);
}

TEST_CASE("series warning on oversized expansion parameter", "[variational]") {
    bool warn = false;
    // e^{2s} gamma^2 / eta of order 10: the q-series stops contracting
    variational_energy(0.1, 2.5, 0.9, 1.2, 6, &warn);
    REQUIRE(warn);
}
