#include <catch2/catch_amalgamated.hpp>

#include "optomech/meanfield.hpp"
#include "support/oracles.hpp"

using namespace optomech;
using Catch::Approx;

TEST_CASE("mean-field energy of the displaced-frame model", "[meanfield]") {
    SECTION("origin") { REQUIRE(mf_energy_hom(0.0, 0.0, 2.0, 10.0) == 0.0); }
    SECTION("kappa = 2 at the ring radius") {
        double a = std::sqrt(1.5);
        REQUIRE(mf_energy_hom(a, 0.0, 2.0, 10.0) == Approx(0.5625).margin(1e-12));
        // matches the closed-form branch energy (kappa^2 + kappa^-2 - 2)/4
        REQUIRE(mf_ground_energy_hom(2.0) == Approx(0.5625).margin(1e-15));
    }
    SECTION("energy is exactly phase independent at quarter turns") {
        Cplx a(0.83, -0.41);
        double e0 = mf_energy_hom(a, 0.2, 1.7, 25.0);
        REQUIRE(mf_energy_hom(Cplx(-a.imag(), a.real()), 0.2, 1.7, 25.0) == e0);  // i a
        REQUIRE(mf_energy_hom(-a, 0.2, 1.7, 25.0) == e0);
        REQUIRE(mf_energy_hom(Cplx(a.imag(), -a.real()), 0.2, 1.7, 25.0) == e0);
    }
    SECTION("general phases to rounding") {
        Cplx a(0.83, -0.41);
        double e0 = mf_energy_hom(a, 0.0, 1.7, 25.0);
        for (double phi : {0.3, 1.1, 2.9, 5.2}) {
            Cplx rot = a * std::exp(Cplx(0, phi));
            REQUIRE(mf_energy_hom(rot, 0.0, 1.7, 25.0) == Approx(e0).margin(1e-15));
        }
    }
}

TEST_CASE("mean-field minimizer", "[meanfield]") {
    SECTION("normal side") {
        MeanFieldPoint pt = mf_minimize_hom(0.5, 10.0);
        REQUIRE(pt.alpha_mag == 0.0);
        REQUIRE(pt.energy == 0.0);
        REQUIRE(pt.classification == StationaryClass::minimum);
        REQUIRE_FALSE(pt.degenerate_ring);
    }
    SECTION("broken side kappa = 2") {
        MeanFieldPoint pt = mf_minimize_hom(2.0, 10.0);
        REQUIRE(pt.alpha_mag == Approx(std::sqrt(1.5)).margin(1e-12));
        REQUIRE(pt.beta == 0.0);
        REQUIRE(pt.degenerate_ring);
        // photon number matches the staircase value (kappa^2-1)/2
        REQUIRE(pt.alpha_mag * pt.alpha_mag == Approx(1.5).margin(1e-12));
    }
    SECTION("closed-form branch energy across kappa") {
        for (double k : {1.2, 1.5, 2.0, 3.0}) {
            MeanFieldPoint pt = mf_minimize_hom(k, 50.0);
            REQUIRE(pt.energy == Approx(mf_ground_energy_hom(k)).margin(1e-10));
        }
    }
}

TEST_CASE("minimizer against grid + polish oracle", "[meanfield]") {
    // flipped-frame alpha-plane landscape at beta = 0
    for (double kappa : {1.2, 1.5, 2.0, 3.0}) {
        auto f = [&](double re, double im) {
            return mf_energy_hom_framed(Cplx(re, im), 0.0, kappa, 20.0, Frame::flipped);
        };
        auto best = test_oracle::grid_polish(f, -2.5, 2.5, -2.5, 2.5, 200);
        MeanFieldPoint pt = mf_minimize_hom(kappa, 20.0);
        double r_opt = std::hypot(best.x, best.y);
        REQUIRE(std::abs(r_opt - pt.alpha_mag) < 1e-5);
        REQUIRE(pt.energy <= -best.value + 1e-12);  // printed = -flipped
    }
}

TEST_CASE("flipped-frame Hessian classifies the stationary points", "[meanfield]") {
    SECTION("normal phase: minimum at the origin") {
        auto f = [&](double re, double im) {
            return mf_energy_hom_framed(Cplx(re, im), 0.0, 0.8, 20.0, Frame::flipped);
        };
        auto [lo, hi] = test_oracle::fd_hessian_eigs(f, 0.0, 0.0);
        REQUIRE(lo > 1e-8);
        REQUIRE(mf_minimize_hom(0.8, 20.0).classification == StationaryClass::minimum);
    }
    SECTION("broken phase: ring point is a minimum with a flat phase direction") {
        MeanFieldPoint pt = mf_minimize_hom(2.0, 20.0);
        auto f = [&](double re, double im) {
            return mf_energy_hom_framed(Cplx(re, im), 0.0, 2.0, 20.0, Frame::flipped);
        };
        auto [lo, hi] = test_oracle::fd_hessian_eigs(f, pt.alpha_mag, 0.0);
        REQUIRE(std::abs(lo) < 1e-6);  // Goldstone direction
        REQUIRE(hi > 1e-6);            // radial direction
        REQUIRE(pt.classification == StationaryClass::minimum);
    }
}

TEST_CASE("stationarity of the returned optima", "[meanfield]") {
    SECTION("displaced-frame landscape") {
        MeanFieldPoint pt = mf_minimize_hom(1.8, 30.0);
        auto f = [&](double a, double b) {
            return mf_energy_hom(Cplx(a, 0.0), Cplx(b, 0.0), 1.8, 30.0);
        };
        REQUIRE(test_oracle::fd_gradient_norm(f, pt.alpha_mag, pt.beta) < 1e-6);
    }
}

TEST_CASE("second derivative discontinuity", "[meanfield]") {
    auto scan = mf_second_derivative_scan(0.5, 1.5, 1001);
    SECTION("zero below the transition") {
        for (size_t i = 0; i < scan.kappa.size(); ++i)
            if (scan.kappa[i] < 0.99) REQUIRE(scan.d2_energy[i] == Approx(0.0).margin(1e-9));
    }
    SECTION("analytic one-sided limit (2 + 6 kappa^-4)/4 -> 2") {
        // derivative oracle: d2/dk2 of (k^2 + k^-2 - 2)/4
        double k = 1.1;
        double want = 0.25 * (2.0 + 6.0 / std::pow(k, 4));
        size_t idx = 0;
        for (size_t i = 0; i < scan.kappa.size(); ++i)
            if (std::abs(scan.kappa[i] - k) < 5e-4) idx = i;
        REQUIRE(scan.d2_energy[idx] == Approx(want).margin(1e-3));
    }
    SECTION("jump of 2 at the critical point") {
        REQUIRE(scan.jump_at_critical == Approx(2.0).margin(1e-3));
    }
    SECTION("coarse grids rejected") {
        REQUIRE_THROWS_AS(mf_second_derivative_scan(0.9, 1.1, 5), InvalidGridError);
        REQUIRE_THROWS_AS(mf_second_derivative_scan(1.2, 1.5, 100), InvalidGridError);
    }
}

namespace {

ModelParams hop_params(double gamma, double n_factor, double omega_m = 0.01) {
    ModelParams p;
    p.omega_c = 1.0;
    p.omega_m = omega_m;
    p.set_gamma(gamma);
    p.n_factor = n_factor;
    double eps = hop_consistent_eps(p);
    p.eps1 = eps;
    p.eps2 = eps;
    return p;
}

}  // namespace

TEST_CASE("quartic-model stationary branch", "[meanfield]") {
    SECTION("boundary gamma = 1") {
        MeanFieldPoint pt = mf_minimize_hop(hop_params(1.0, 50.0));
        REQUIRE(pt.alpha_mag == 0.0);
    }
    SECTION("closed form gamma = sqrt 2, N = 100") {
        MeanFieldPoint pt = mf_minimize_hop(hop_params(std::sqrt(2.0), 100.0));
        REQUIRE(pt.alpha_mag * pt.alpha_mag == Approx(25.0).margin(1e-9));
    }
    SECTION("numeric stationarity oracle at gamma = 1.3, N = 50") {
        ModelParams p = hop_params(1.3, 50.0);
        MeanFieldPoint pt = mf_minimize_hop(p);
        // independent check: polish the squared gradient from a detuned seed
        auto g2 = [&](double a, double b) {
            double h = 1e-5;
            double dda = (hop_energy(a + h, b, p) - hop_energy(a - h, b, p)) / (2 * h);
            double ddb = (hop_energy(a, b + h, p) - hop_energy(a, b - h, p)) / (2 * h);
            return dda * dda + ddb * ddb;
        };
        auto best = test_oracle::grid_polish(g2, pt.alpha_mag * 0.7, pt.alpha_mag * 1.3,
                                             pt.beta * 1.3, pt.beta * 0.7, 60, 1e-13);
        REQUIRE(std::abs(best.x - pt.alpha_mag) <= 1e-5 * pt.alpha_mag);
        REQUIRE(std::abs(best.y - pt.beta) <= 1e-5 * std::abs(pt.beta));
    }
    SECTION("gradient at the returned point vanishes at small omega_m") {
        ModelParams p = hop_params(1.2, 80.0, 0.001);
        MeanFieldPoint pt = mf_minimize_hop(p);
        auto f = [&](double a, double b) { return hop_energy(a, b, p); };
        REQUIRE(test_oracle::fd_gradient_norm(f, pt.alpha_mag, pt.beta, 1e-6) < 1e-6);
    }
}

TEST_CASE("hybrid mean field", "[meanfield]") {
    SECTION("critical boundary") {
        HybridMeanField m = hybrid_meanfield(1.0);
        REQUIRE(m.beta_spin == 0.0);
        REQUIRE(m.zeta == 0.0);
    }
    SECTION("asymptote") {
        HybridMeanField m = hybrid_meanfield(1e6);
        REQUIRE(m.beta_spin == Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
    }
    SECTION("bound on the spin displacement") {
        for (double d : {1.01, 1.5, 3.0, 10.0})
            REQUIRE(std::abs(hybrid_meanfield(d).beta_spin) <= 1.0 / std::sqrt(2.0) + 1e-12);
    }
    SECTION("numeric minimization oracle at delta = 1.5") {
        const double dt = 1.5;
        auto f = [&](double z, double b) { return hybrid_mf_energy(z, b, dt); };
        auto best = test_oracle::grid_polish(f, -2.0, 2.0, -0.99, 0.99, 200);
        HybridMeanField m = hybrid_meanfield(dt);
        // the minimizer ring is two symmetric points; compare magnitudes
        REQUIRE(std::abs(std::abs(best.y) - m.beta_spin) < 1e-6);
        REQUIRE(std::abs(std::abs(best.x) - std::abs(m.zeta)) < 1e-6);
        REQUIRE(best.value == Approx(m.energy).margin(1e-10));
    }
    SECTION("gradient check at the returned optimum") {
        HybridMeanField m = hybrid_meanfield(1.5);
        auto f = [&](double z, double b) { return hybrid_mf_energy(z, b, 1.5); };
        REQUIRE(test_oracle::fd_gradient_norm(f, m.zeta, m.beta_spin) < 1e-6);
    }
}
