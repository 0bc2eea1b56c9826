#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "optomech/errors.hpp"
#include "optomech/optim.hpp"
#include "optomech/params.hpp"

namespace optomech {

using Cplx = std::complex<double>;

// Reporting frame for the mean-field landscapes. "printed" evaluates the
// energy expression as written; "flipped" negates it, which is the frame in
// which the broken-symmetry landscape is a Mexican hat with a minimum ring.
enum class Frame { printed, flipped };

enum class StationaryClass { minimum, saddle, maximum };

inline const char* to_string(StationaryClass c) {
    switch (c) {
        case StationaryClass::minimum: return "minimum";
        case StationaryClass::saddle: return "saddle";
        case StationaryClass::maximum: return "maximum";
    }
    return "?";
}

struct MeanFieldPoint {
    double alpha_mag = 0.0;
    double alpha_phase = 0.0;  // reported at 0 on the degenerate ring
    double beta = 0.0;
    double energy = 0.0;  // printed-frame value, units of omega_c
    StationaryClass classification = StationaryClass::minimum;
    bool degenerate_ring = false;
};

// Mean value of the displaced-frame ground-state energy (units of omega_c):
// |alpha|^2 + eta^-1 |beta|^2 - (1/kappa^2)(|alpha|^2 + |alpha|^4).
// Depends on |alpha| only, so the phase direction is exactly flat.
inline double mf_energy_hom(Cplx alpha, Cplx beta, double kappa, double eta) {
    double a2 = std::norm(alpha);
    double b2 = std::norm(beta);
    return a2 + b2 / eta - (a2 + a2 * a2) / (kappa * kappa);
}

inline double mf_energy_hom_framed(Cplx alpha, Cplx beta, double kappa, double eta,
                                   Frame frame) {
    double e = mf_energy_hom(alpha, beta, kappa, eta);
    return frame == Frame::printed ? e : -e;
}

// Ground branch energy: 0 for kappa <= 1, (kappa^2 + kappa^-2 - 2)/4 beyond.
inline double mf_ground_energy_hom(double kappa) {
    if (!(kappa > 0.0)) throw InvalidParameterError("kappa must be > 0");
    if (kappa <= 1.0) return 0.0;
    double k2 = kappa * kappa;
    return 0.25 * (k2 + 1.0 / k2 - 2.0);
}

// Stationary point of the landscape. The classification refers to the
// alpha-plane landscape at beta = 0 in the flipped frame, where both the
// single minimum (kappa <= 1) and the minimum ring (kappa > 1) live.
inline MeanFieldPoint mf_minimize_hom(double kappa, double eta) {
    if (!(kappa > 0.0)) throw InvalidParameterError("kappa must be > 0");
    MeanFieldPoint pt;
    if (kappa <= 1.0) {
        pt.alpha_mag = 0.0;
        pt.energy = 0.0;
        pt.classification = StationaryClass::minimum;
        pt.degenerate_ring = false;
    } else {
        pt.alpha_mag = std::sqrt(0.5 * (kappa * kappa - 1.0));
        pt.energy = mf_energy_hom(pt.alpha_mag, 0.0, kappa, eta);
        pt.classification = StationaryClass::minimum;  // radial curvature > 0 when flipped
        pt.degenerate_ring = true;
    }
    pt.beta = 0.0;
    pt.alpha_phase = 0.0;
    (void)eta;
    return pt;
}

struct SecondDerivativeScan {
    std::vector<double> kappa;
    std::vector<double> energy;    // ground branch, printed frame
    std::vector<double> d2_energy; // central finite differences
    double jump_at_critical = 0.0; // d2 discontinuity across kappa = 1
};

// Central finite differences of the piecewise ground energy over a kappa grid
// straddling 1; the discontinuity of the second derivative at kappa = 1 is the
// second-order transition marker.
inline SecondDerivativeScan mf_second_derivative_scan(double lo, double hi, int steps) {
    if (!(lo < 1.0 && 1.0 < hi)) throw InvalidGridError("range must straddle kappa = 1");
    if (steps < 9) throw InvalidGridError("need at least 4 grid points per side");
    double h = (hi - lo) / (steps - 1);
    int below = static_cast<int>(std::floor((1.0 - lo) / h));
    if (below < 4 || steps - below - 1 < 4)
        throw InvalidGridError("need at least 4 grid points per side of kappa = 1");

    SecondDerivativeScan out;
    out.kappa.resize(steps);
    out.energy.resize(steps);
    out.d2_energy.assign(steps, 0.0);
    for (int i = 0; i < steps; ++i) {
        out.kappa[i] = lo + h * i;
        out.energy[i] = mf_ground_energy_hom(out.kappa[i]);
    }
    for (int i = 1; i + 1 < steps; ++i)
        out.d2_energy[i] = (out.energy[i + 1] - 2.0 * out.energy[i] + out.energy[i - 1]) / (h * h);
    out.d2_energy[0] = out.d2_energy[1];
    out.d2_energy[steps - 1] = out.d2_energy[steps - 2];

    // one-sided limits at kappa -> 1 from each side: 4-point O(h^2) stencils
    // anchored at the nearest grid point, shifted back to the kink with the
    // one-sided third derivative
    auto one_sided = [&](int i0, int dir) {
        double f0 = out.energy[i0];
        double f1 = out.energy[i0 + dir];
        double f2 = out.energy[i0 + 2 * dir];
        double f3 = out.energy[i0 + 3 * dir];
        double d2 = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
        double d3 = dir * (f3 - 3.0 * f2 + 3.0 * f1 - f0) / (h * h * h);
        return d2 + (1.0 - out.kappa[i0]) * d3;
    };
    int first_above = below + 1;
    if (std::abs(out.kappa[below] - 1.0) < 1e-12 * h) first_above = below;  // grid hits 1
    out.jump_at_critical = one_sided(first_above, +1) - one_sided(below - (first_above == below ? 1 : 0), -1);
    return out;
}

// ---- quartic-stabilized macroscopic model ----------------------------------

// Mean-field energy of the macroscopic-N model for real amplitudes
// (physical units, not renormalized):
// N wc a^2 + wm b^2 + 2 g b (N + 4 a^2) + (eps1/N^2) a^4 + (eps2/N^2) b^4.
inline double hop_energy(double alpha, double beta, const ModelParams& p) {
    double n = p.n_factor;
    return n * p.omega_c * alpha * alpha + p.omega_m * beta * beta +
           2.0 * p.g * beta * (n + 4.0 * alpha * alpha) +
           p.eps1 / (n * n) * std::pow(alpha, 4) + p.eps2 / (n * n) * std::pow(beta, 4);
}

// The consistency choice of the quartic coefficients under which the
// superradiant branch has the closed form alpha^2 = (N/4)(gamma^2 - 1),
// beta = -N omega_c / (8 g).
inline double hop_consistent_eps(const ModelParams& p) {
    double gam = p.gamma();
    return 4.0 * p.omega_m * p.omega_m / p.omega_c * (std::pow(gam, 6) - gam * gam);
}

namespace detail {

// alpha = 0 branch: stationary beta of wm b^2 + 2gNb + (eps2/N^2) b^4, found
// by Newton from the harmonic value; may not exist for eps2 < 0 when the
// negative quartic swallows the harmonic well.
inline bool hop_beta_branch(const ModelParams& p, double& beta_out) {
    double n = p.n_factor;
    double beta = -p.g * n / p.omega_m;
    if (p.eps2 == 0.0) { beta_out = beta; return true; }
    for (int it = 0; it < 200; ++it) {
        double f = 2.0 * p.omega_m * beta + 2.0 * p.g * n +
                   4.0 * p.eps2 / (n * n) * beta * beta * beta;
        double fp = 2.0 * p.omega_m + 12.0 * p.eps2 / (n * n) * beta * beta;
        if (std::abs(fp) < 1e-300) return false;
        double step = f / fp;
        beta -= step;
        if (!std::isfinite(beta)) return false;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(beta))) {
            beta_out = beta;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Stationary point of the macroscopic-N landscape. With the consistent
// quartics and gamma > 1 this is the closed-form superradiant branch (a
// stationary point with one flat direction at leading order in N). With
// arbitrary quartic coefficients it falls back to a numeric search.
inline MeanFieldPoint mf_minimize_hop(const ModelParams& p) {
    p.validate();
    double gam = p.gamma();
    double eps_c = hop_consistent_eps(p);
    double scale = std::max(1.0, std::abs(eps_c));
    bool consistent = std::abs(p.eps1 - eps_c) <= 1e-9 * scale &&
                      std::abs(p.eps2 - eps_c) <= 1e-9 * scale;

    MeanFieldPoint pt;
    if (consistent) {
        if (gam > 1.0) {
            pt.alpha_mag = std::sqrt(p.n_factor / 4.0 * (gam * gam - 1.0));
            pt.beta = -p.n_factor * p.omega_c / (8.0 * p.g);
            pt.degenerate_ring = false;
            // finite-N Hessian of the flat direction makes this a saddle
            pt.classification = StationaryClass::saddle;
        } else {
            pt.alpha_mag = 0.0;
            double beta;
            pt.beta = detail::hop_beta_branch(p, beta) ? beta : -p.g * p.n_factor / p.omega_m;
            pt.classification = StationaryClass::minimum;
        }
        pt.energy = hop_energy(pt.alpha_mag, pt.beta, p) / p.omega_c;
        return pt;
    }

    // general quartics: numeric stationary search from the harmonic scales
    double a0 = gam > 1.0 ? std::sqrt(p.n_factor / 4.0 * std::abs(gam * gam - 1.0)) : 0.0;
    double b0 = -p.g * p.n_factor / p.omega_m;
    auto grad2 = [&](const std::vector<double>& x) {
        double n = p.n_factor;
        double da = 2.0 * n * p.omega_c * x[0] + 16.0 * p.g * x[0] * x[1] +
                    4.0 * p.eps1 / (n * n) * x[0] * x[0] * x[0];
        double db = 2.0 * p.omega_m * x[1] + 2.0 * p.g * (n + 4.0 * x[0] * x[0]) +
                    4.0 * p.eps2 / (n * n) * x[1] * x[1] * x[1];
        return da * da + db * db;
    };
    auto r = nelder_mead(grad2, {a0, b0}, std::max(0.1, 0.05 * std::abs(b0)));
    pt.alpha_mag = std::abs(r.x[0]);
    pt.beta = r.x[1];
    pt.energy = hop_energy(pt.alpha_mag, pt.beta, p) / p.omega_c;
    pt.classification = StationaryClass::saddle;
    return pt;
}

// ---- hybrid mean field ------------------------------------------------------

struct HybridMeanField {
    double zeta = 0.0;       // boson coherence per sqrt(N_a)
    double beta_spin = 0.0;  // atomic displacement, |beta| <= 1/sqrt(2)
    double energy = 0.0;     // per atom, units of omega_a... see hybrid_mf_energy
    double delta_tilde = 0.0;
};

// Ground-state energy per atom of the displaced hybrid Hamiltonian:
// wa b^2 + wt z^2 + 4 lt z b sqrt(1-b^2) - wa/2,  with lt = delta sqrt(wa wt)/2.
inline double hybrid_mf_energy(double zeta, double beta, double delta_tilde,
                               double omega_a = 1.0, double omega_tc = 1.0) {
    if (std::abs(beta) > 1.0) return std::numeric_limits<double>::infinity();
    double lt = 0.5 * delta_tilde * std::sqrt(omega_a * omega_tc);
    return omega_a * beta * beta + omega_tc * zeta * zeta +
           4.0 * lt * zeta * beta * std::sqrt(1.0 - beta * beta) - 0.5 * omega_a;
}

// Minimizer: zero below delta_tilde = 1; beyond it
// beta = +-sqrt((1 - delta^-2)/2), zeta = -+ sqrt(wa/(4 wt)) sqrt(delta^2 - delta^-2).
inline HybridMeanField hybrid_meanfield(double delta_tilde, double omega_a = 1.0,
                                        double omega_tc = 1.0) {
    if (!(delta_tilde > 0.0)) throw InvalidParameterError("delta_tilde must be > 0");
    HybridMeanField out;
    out.delta_tilde = delta_tilde;
    if (delta_tilde <= 1.0) {
        out.zeta = 0.0;
        out.beta_spin = 0.0;
        out.energy = -0.5 * omega_a;
        return out;
    }
    double inv2 = 1.0 / (delta_tilde * delta_tilde);
    out.beta_spin = std::sqrt(0.5 * (1.0 - inv2));
    out.zeta = -std::sqrt(omega_a / (4.0 * omega_tc)) *
               std::sqrt(delta_tilde * delta_tilde - inv2);
    out.energy = hybrid_mf_energy(out.zeta, out.beta_spin, delta_tilde, omega_a, omega_tc);
    return out;
}

}  // namespace optomech
