#pragma once

#include <cmath>
#include <limits>

#include "optomech/errors.hpp"

namespace optomech {

// Two-parameter squeezed-vacuum variational layer. The energy function is the
// series expansion in powers of q = (gamma^2/eta) e^{2s}; the reduced
// coefficients below absorb the double factorials:
//   T1(n) = (1-2n)/(n! 2^{2n+3}) q^n   (multiplies 8 sinh^2 r + 4)
//   T2(n) = gamma^2/(n! 2^{2n+2}) q^n  (multiplies -e^{2r}; n starts at 0)
//   T3(n) = n/(n! 2^{2n}) q^n          (multiplies -sinh 2r)

namespace var_detail {

struct SeriesSums {
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    bool warning = false;  // last term ratio exceeded 1/2
};

inline SeriesSums series_sums(double gamma, double eta, double s, int order) {
    if (order < 1) throw InvalidParameterError("series_order must be >= 1");
    SeriesSums out;
    const double q = gamma * gamma / eta * std::exp(2.0 * s);
    double qn = 1.0;       // q^n
    double nfact = 1.0;    // n!
    double prev = std::numeric_limits<double>::infinity();
    out.t2 = gamma * gamma / 4.0;  // n = 0 term
    for (int n = 1; n <= order; ++n) {
        qn *= q;
        nfact *= n;
        double pow4 = std::ldexp(1.0, -2 * n);  // 2^{-2n}
        double t1 = (1.0 - 2.0 * n) / (nfact * 8.0) * pow4 * qn;
        double t2 = gamma * gamma / (nfact * 4.0) * pow4 * qn;
        double t3 = n / nfact * pow4 * qn;
        out.t1 += t1;
        out.t2 += t2;
        out.t3 += t3;
        double mag = std::abs(t1) + std::abs(t2) + std::abs(t3);
        if (n > 1 && mag > 0.5 * prev) out.warning = true;
        prev = mag;
    }
    return out;
}

// n >= 2 feedback sum in the s equation (the exact s-derivative of the series).
inline double a2_sum(double gamma, double eta, double r, double s, int order) {
    const double q = gamma * gamma / eta * std::exp(2.0 * s);
    const double e2s = std::exp(2.0 * s);
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double s2r = std::sinh(2.0 * r);
    const double e2r = std::exp(2.0 * r);
    double qn = q;      // q^1
    double nfact = 1.0; // 1!
    double a2 = 0.0;
    for (int n = 2; n <= order; ++n) {
        qn *= q;
        nfact *= n;
        double pow4 = std::ldexp(1.0, -2 * n);
        double t1 = (1.0 - 2.0 * n) / (nfact * 8.0) * pow4 * qn;
        double t2 = gamma * gamma / (nfact * 4.0) * pow4 * qn;
        double t3 = n / nfact * pow4 * qn;
        a2 += 4.0 * n * eta * e2s *
              (-t1 * (8.0 * sh2 + 4.0) + t2 * e2r + t3 * s2r);
    }
    return a2;
}

}  // namespace var_detail

// Series energy at truncation order n_max (units of omega_c). The optional
// warning flag reports a term ratio above 1/2 in the q-series.
inline double variational_energy(double r, double s, double gamma, double eta,
                                 int series_order, bool* series_warning = nullptr) {
    auto sums = var_detail::series_sums(gamma, eta, s, series_order);
    if (series_warning) *series_warning = sums.warning;
    double sh2r = std::sinh(r) * std::sinh(r);
    double sh2s = std::sinh(s) * std::sinh(s);
    return sh2r + sh2s / eta + gamma * gamma / 8.0 +
           (8.0 * sh2r + 4.0) * sums.t1 - std::exp(2.0 * r) * sums.t2 -
           std::sinh(2.0 * r) * sums.t3;
}

struct SqueezingSolution {
    double r = 0.0;
    double s = 0.0;
    double energy = 0.0;
    int iterations = 0;
    double residual = 0.0;
    int series_order = 4;
    enum class Regime { finite_eta, classical_limit } regime = Regime::finite_eta;
    bool diverged = false;       // no real fixed point / iteration ran away
    bool series_warning = false;
};

namespace var_detail {

// Right-hand sides of the coupled fixed-point equations
//   e^{4r} = (1 + A1 + C1)/(1 + A1 - B1 - C1)
//   e^{4s} = (1 + A2)/(1 - W),  W = gamma^2 [sinh^2 r + 1/2 + sinh 2r + (gamma^2/4) e^{2r}]
// A1 = 8 Sum T1, B1 = 4 Sum T2, C1 = 2 Sum T3; A2 collects the n >= 2 feedback.
struct FixedPointRhs {
    double e4r = 0.0, e4s = 0.0;
    bool valid = false;
};

inline FixedPointRhs rhs(double gamma, double eta, double r, double s, int order) {
    FixedPointRhs out;
    auto sums = series_sums(gamma, eta, s, order);
    double a1 = 8.0 * sums.t1, b1 = 4.0 * sums.t2, c1 = 2.0 * sums.t3;
    double num_r = 1.0 + a1 + c1;
    double den_r = 1.0 + a1 - b1 - c1;
    double w = gamma * gamma * (std::sinh(r) * std::sinh(r) + 0.5 + std::sinh(2.0 * r) +
                                0.25 * gamma * gamma * std::exp(2.0 * r));
    double num_s = 1.0 + a2_sum(gamma, eta, r, s, order);
    double den_s = 1.0 - w;
    if (den_r <= 0.0 || den_s <= 0.0 || num_r <= 0.0 || num_s <= 0.0) return out;
    out.e4r = num_r / den_r;
    out.e4s = num_s / den_s;
    out.valid = std::isfinite(out.e4r) && std::isfinite(out.e4s);
    return out;
}

inline double classical_w(double gamma, double r) {
    return gamma * gamma * (std::sinh(r) * std::sinh(r) + 0.5 + std::sinh(2.0 * r) +
                            0.25 * gamma * gamma * std::exp(2.0 * r));
}

}  // namespace var_detail

// Solve the squeezing fixed point. The classical limit uses the closed forms
// e^{4r} = 1/(1-gamma^2) and e^{4s} = 1/(1-W(r)); r no longer depends on s
// there, while s still depends on r. At finite eta the coupled equations are
// iterated with damping 0.5 (halved on overshoot); divergence near the
// critical coupling is reported, not thrown.
inline SqueezingSolution solve_squeezing(double gamma, double eta, int series_order,
                                         SqueezingSolution::Regime regime) {
    if (gamma < 0.0) throw InvalidParameterError("gamma must be >= 0");
    SqueezingSolution sol;
    sol.series_order = series_order;
    sol.regime = regime;

    if (regime == SqueezingSolution::Regime::classical_limit) {
        if (gamma >= 1.0) {
            sol.diverged = true;
            return sol;
        }
        sol.r = 0.25 * std::log(1.0 / (1.0 - gamma * gamma));
        double w = var_detail::classical_w(gamma, sol.r);
        if (w >= 1.0) {
            sol.diverged = true;
            return sol;
        }
        sol.s = 0.25 * std::log(1.0 / (1.0 - w));
        sol.residual = std::abs(std::exp(4.0 * sol.r) * (1.0 - gamma * gamma) - 1.0) +
                       std::abs(std::exp(4.0 * sol.s) * (1.0 - w) - 1.0);
        sol.energy = std::sinh(sol.r) * std::sinh(sol.r) + gamma * gamma / 8.0 -
                     gamma * gamma / 4.0 * std::exp(2.0 * sol.r);
        return sol;
    }

    if (series_order < 1) throw InvalidParameterError("series_order must be >= 1");
    double r = 0.0, s = 0.0;
    double damp = 0.5;
    const int max_iter = 100000;
    int it = 0;
    for (; it < max_iter; ++it) {
        auto rhs = var_detail::rhs(gamma, eta, r, s, series_order);
        if (!rhs.valid || rhs.e4s > 1e12 || rhs.e4r > 1e12) {
            sol.diverged = true;
            break;
        }
        double rn = 0.25 * std::log(rhs.e4r);
        double sn = 0.25 * std::log(rhs.e4s);
        double r2 = r + damp * (rn - r);
        double s2 = s + damp * (sn - s);
        double move = std::abs(r2 - r) + std::abs(s2 - s);
        r = r2;
        s = s2;
        if (move < 1e-14) break;
        if (move > 10.0) damp = std::max(0.05, 0.5 * damp);  // under-relax near criticality
    }
    sol.iterations = it;
    sol.r = r;
    sol.s = s;
    if (!sol.diverged) {
        auto rhs = var_detail::rhs(gamma, eta, r, s, series_order);
        if (!rhs.valid) {
            sol.diverged = true;
        } else {
            sol.residual = std::abs(std::exp(4.0 * r) - rhs.e4r) +
                           std::abs(std::exp(4.0 * s) - rhs.e4s);
            if (sol.residual > 1e-10 || it >= max_iter) sol.diverged = true;
        }
    }
    sol.energy = variational_energy(r, s, gamma, eta, series_order, &sol.series_warning);
    return sol;
}

}  // namespace optomech
