#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "optomech/errors.hpp"
#include "optomech/params.hpp"

namespace optomech {

// Closed-form spectra and critical lines. Everything here is the reference
// layer the numerical modules are tested against.

struct RealOrFlag {
    double value = 0.0;
    bool valid = false;  // false: expression turned imaginary, beyond validity
};

// Normal-phase excitation of the classical-limit quadratic model:
// sqrt((1/4)(1 - gamma^2)), real for gamma <= 1 and vanishing at gamma = 1.
inline RealOrFlag epsilon_np(double gamma) {
    if (gamma < 0.0) throw InvalidParameterError("gamma must be >= 0");
    double r = 0.25 * (1.0 - gamma * gamma);
    if (r < 0.0) return {0.0, false};
    return {std::sqrt(r), true};
}

// Same under a squeezed drive. theta = 0: (1/2)sqrt(1 - gamma^2 e^{-2 xi});
// theta = pi: (1/2)sqrt(1 - gamma^2 e^{+2 xi}).
inline RealOrFlag epsilon_squeezed(double gamma, double xi, double theta) {
    if (gamma < 0.0) throw InvalidParameterError("gamma must be >= 0");
    double sgn;
    if (std::abs(theta) < 1e-12) sgn = -1.0;
    else if (std::abs(theta - M_PI) < 1e-12) sgn = +1.0;
    else throw UnsupportedDirectionError("closed forms exist for theta in {0, pi} only");
    double r = 0.25 * (1.0 - gamma * gamma * std::exp(2.0 * sgn * xi));
    if (r < 0.0) return {0.0, false};
    return {std::sqrt(r), true};
}

// Cavity squeezing parameter of the hybrid normal phase:
// r = -(1/4) ln(1 + alpha mu^2 - gamma^2); requires the log argument > 0.
inline RealOrFlag hybrid_squeeze_r(double mu, double gamma, double alpha) {
    double arg = 1.0 + alpha * mu * mu - gamma * gamma;
    if (arg <= 0.0) return {0.0, false};
    return {-0.25 * std::log(arg), true};
}

struct HybridSpectrum {
    double eps_plus = 0.0;
    double eps_minus = 0.0;
    bool valid = false;
};

// Polariton branches of the hybrid normal phase, evaluated with the dressed
// frequency w_c e^{-2r} and coupling lambda e^{r}. Frequencies in the units
// omega_c, omega_a are given in.
inline HybridSpectrum hybrid_spectrum_np_raw(double omega_c, double omega_a, double lambda,
                                             double mu, double gamma, double alpha) {
    RealOrFlag r = hybrid_squeeze_r(mu, gamma, alpha);
    if (!r.valid) return {};
    double wt = omega_c * std::exp(-2.0 * r.value);
    double lt = lambda * std::exp(r.value);
    double s = wt * wt + omega_a * omega_a;
    double inner = (wt * wt - omega_a * omega_a) * (wt * wt - omega_a * omega_a) +
                   16.0 * lt * lt * wt * omega_a;
    if (inner < 0.0) return {};
    double root = std::sqrt(inner);
    double minus_sq = 0.5 * (s - root);
    HybridSpectrum out;
    out.eps_plus = std::sqrt(0.5 * (s + root));
    // clamp tiny negative round-off on the critical line
    out.eps_minus = minus_sq > 0.0 ? std::sqrt(minus_sq) : 0.0;
    out.valid = minus_sq > -1e-12;
    return out;
}

inline HybridSpectrum hybrid_spectrum_np(const ModelParams& p) {
    return hybrid_spectrum_np_raw(p.omega_c, p.omega_a, p.lambda, p.mu(), p.gamma(),
                                  p.alpha_a2);
}

// Superradiant-phase branches as functions of the dressed coupling
// delta_tilde = 2 lambda_tilde / sqrt(omega_a omega_tilde_c) >= 1.
inline HybridSpectrum hybrid_spectrum_sp(double delta_tilde, double omega_tilde_c,
                                         double omega_a) {
    if (delta_tilde < 1.0)
        throw InvalidRegimeError("superradiant branch needs delta_tilde >= 1");
    double d4 = delta_tilde * delta_tilde * delta_tilde * delta_tilde;
    double wt2 = omega_tilde_c * omega_tilde_c;
    double wa2 = omega_a * omega_a;
    double s = wt2 + d4 * wa2;
    double root = std::sqrt((wt2 - d4 * wa2) * (wt2 - d4 * wa2) + 4.0 * wt2 * wa2);
    HybridSpectrum out;
    out.eps_plus = std::sqrt(0.5 * (s + root));
    double minus_sq = 0.5 * (s - root);
    out.eps_minus = minus_sq > 0.0 ? std::sqrt(minus_sq) : 0.0;
    out.valid = true;
    return out;
}

// Dressed coupling of the hybrid system; diverges on approach to the critical
// line mu^2 (1 - alpha) + gamma^2 = 1 where it crosses 1.
inline RealOrFlag hybrid_delta_tilde(double mu, double gamma, double alpha) {
    double arg = 1.0 + alpha * mu * mu - gamma * gamma;
    if (arg <= 0.0) return {0.0, false};
    return {mu / std::sqrt(arg), true};
}

// gamma_c = sqrt(1 - mu^2 (1 - alpha)) when reachable along gamma.
inline std::optional<double> critical_gamma(double mu, double alpha) {
    if (mu < 0.0 || alpha < 0.0) throw InvalidParameterError("mu, alpha must be >= 0");
    double r = 1.0 - mu * mu * (1.0 - alpha);
    if (r < 0.0) return std::nullopt;
    return std::sqrt(r);
}

enum class Phase { Normal, Superradiant };

struct PhasePoint {
    double mu = 0.0;
    double gamma = 0.0;
    double alpha_a2 = 0.0;
    Phase phase = Phase::Normal;
    RealOrFlag epsilon_minus;  // lowest branch where the formulas stay real
};

inline PhasePoint classify_phase_point(double mu, double gamma, double alpha,
                                       double omega_c = 1.0, double omega_a = 1.0) {
    PhasePoint pt;
    pt.mu = mu;
    pt.gamma = gamma;
    pt.alpha_a2 = alpha;
    double indicator = mu * mu * (1.0 - alpha) + gamma * gamma;
    pt.phase = indicator > 1.0 ? Phase::Superradiant : Phase::Normal;
    if (pt.phase == Phase::Normal) {
        HybridSpectrum s = hybrid_spectrum_np_raw(omega_c, omega_a,
                                                  0.5 * mu * std::sqrt(omega_a * omega_c),
                                                  mu, gamma, alpha);
        pt.epsilon_minus = {s.eps_minus, s.valid};
    } else {
        RealOrFlag dt = hybrid_delta_tilde(mu, gamma, alpha);
        RealOrFlag r = hybrid_squeeze_r(mu, gamma, alpha);
        if (dt.valid && r.valid && dt.value >= 1.0) {
            double wt = omega_c * std::exp(-2.0 * r.value);
            HybridSpectrum s = hybrid_spectrum_sp(dt.value, wt, omega_a);
            pt.epsilon_minus = {s.eps_minus, s.valid};
        } else {
            pt.epsilon_minus = {0.0, false};
        }
    }
    return pt;
}

// Row-major grid over (mu, gamma); mu varies fastest.
inline std::vector<PhasePoint> classify_phase_grid(double mu_lo, double mu_hi, double gamma_lo,
                                                   double gamma_hi, int steps, double alpha) {
    if (steps < 2) throw InvalidGridError("grid needs at least 2 steps per axis");
    if (mu_lo < 0.0 || gamma_lo < 0.0) throw InvalidParameterError("ranges must be positive");
    std::vector<PhasePoint> out;
    out.reserve(static_cast<size_t>(steps) * steps);
    for (int j = 0; j < steps; ++j) {
        double gamma = gamma_lo + (gamma_hi - gamma_lo) * j / (steps - 1);
        for (int i = 0; i < steps; ++i) {
            double mu = mu_lo + (mu_hi - mu_lo) * i / (steps - 1);
            out.push_back(classify_phase_point(mu, gamma, alpha));
        }
    }
    return out;
}

}  // namespace optomech
