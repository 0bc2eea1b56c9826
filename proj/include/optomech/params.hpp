#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

// Physical frequencies and couplings. Builders renormalize everything by
// omega_c internally; the params keep the physical values for reporting.
struct ModelParams {
    double omega_c = 1.0;   // cavity frequency
    double omega_m = 1.0;   // mechanical frequency
    double g = 0.0;         // single-photon optomechanical coupling
    double omega_a = 1.0;   // atomic transition frequency
    double lambda = 0.0;    // light-atom coupling
    int n_atoms = 1;        // N_a
    double alpha_a2 = 0.0;  // A^2-term coefficient alpha >= 0
    double xi = 0.0;        // squeezing amplitude of the drive
    double theta = 0.0;     // squeezing direction in [0, 2pi)
    double eps1 = 0.0;      // cavity quartic coefficient
    double eps2 = 0.0;      // mechanical quartic coefficient
    double n_factor = 1.0;  // macroscopic factor N

    void validate() const {
        if (!(omega_c > 0.0)) throw InvalidParameterError("omega_c must be > 0");
        if (!(omega_m > 0.0)) throw InvalidParameterError("omega_m must be > 0");
        if (g < 0.0) throw InvalidParameterError("g must be >= 0");
        if (!(omega_a > 0.0)) throw InvalidParameterError("omega_a must be > 0");
        if (lambda < 0.0) throw InvalidParameterError("lambda must be >= 0");
        if (n_atoms < 1) throw InvalidParameterError("N_a must be >= 1");
        if (alpha_a2 < 0.0) throw InvalidParameterError("alpha_A2 must be >= 0");
        if (xi < 0.0) throw InvalidParameterError("xi must be >= 0");
        if (theta < 0.0 || theta >= 2.0 * M_PI + 1e-12)
            throw InvalidParameterError("theta must lie in [0, 2pi)");
        if (n_factor < 1.0) throw InvalidParameterError("N_factor must be >= 1");
        if (!std::isfinite(eps1) || !std::isfinite(eps2))
            throw InvalidParameterError("quartic coefficients must be finite");
    }

    // Derived dimensionless groups. gamma^2 kappa^2 = 2 under these conventions.
    double eta() const { return omega_c / omega_m; }
    double kappa() const {
        if (g == 0.0) return std::numeric_limits<double>::infinity();
        return std::sqrt(omega_c * omega_m) / (2.0 * g);
    }
    double gamma() const { return 2.0 * std::sqrt(2.0) * g / std::sqrt(omega_c * omega_m); }
    double mu() const { return 2.0 * lambda / std::sqrt(omega_a * omega_c); }
    double chi() const { return alpha_a2 * lambda * lambda / omega_a; }

    // Inverse maps used by sweeps: set g from a dimensionless coupling at
    // fixed frequencies, or set omega_m from eta at fixed omega_c.
    ModelParams& set_gamma(double gamma_value) {
        if (gamma_value < 0.0) throw InvalidParameterError("gamma must be >= 0");
        g = gamma_value * std::sqrt(omega_c * omega_m) / (2.0 * std::sqrt(2.0));
        return *this;
    }
    ModelParams& set_kappa(double kappa_value) {
        if (!(kappa_value > 0.0)) throw InvalidParameterError("kappa must be > 0");
        g = std::sqrt(omega_c * omega_m) / (2.0 * kappa_value);
        return *this;
    }
    ModelParams& set_mu(double mu_value) {
        if (mu_value < 0.0) throw InvalidParameterError("mu must be >= 0");
        lambda = 0.5 * mu_value * std::sqrt(omega_a * omega_c);
        return *this;
    }
    ModelParams& set_eta(double eta_value) {
        if (!(eta_value > 0.0)) throw InvalidParameterError("eta must be > 0");
        omega_m = omega_c / eta_value;
        return *this;
    }
};

enum class HamiltonianKind {
    FullH,               // omega_c a^t a + omega_m b^t b + g (a+a^t)^2 (b+b^t)
    ApproxHom,           // 2g a^t a (b+b^t) coupling only
    EffectiveHomTilde,   // single-mode diagonal n - n^2/kappa^2
    DisplacedHbar,       // FullH conjugated by the mechanical displacement
    QuadraticLimitHbarF, // single-mode a^t a - (gamma^2/4)(a+a^t)^2 + gamma^2/8
    SqueezedDrive,       // squeezed-frame Hamiltonian incl. conjugated drive
    QuarticHop,          // macroscopic-N model with stabilizing quartics
    HybridFullSpin,      // optomechanics + Dicke atoms, exact spin-(Na/2) block
    HybridHP,            // same with the Holstein-Primakoff boson
};

inline std::string to_string(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::FullH: return "FullH";
        case HamiltonianKind::ApproxHom: return "ApproxHom";
        case HamiltonianKind::EffectiveHomTilde: return "EffectiveHomTilde";
        case HamiltonianKind::DisplacedHbar: return "DisplacedHbar";
        case HamiltonianKind::QuadraticLimitHbarF: return "QuadraticLimitHbarF";
        case HamiltonianKind::SqueezedDrive: return "SqueezedDrive";
        case HamiltonianKind::QuarticHop: return "QuarticHop";
        case HamiltonianKind::HybridFullSpin: return "HybridFullSpin";
        case HamiltonianKind::HybridHP: return "HybridHP";
    }
    throw InvalidParameterError("unknown HamiltonianKind");
}

inline HamiltonianKind kind_from_string(const std::string& s) {
    if (s == "FullH") return HamiltonianKind::FullH;
    if (s == "ApproxHom") return HamiltonianKind::ApproxHom;
    if (s == "EffectiveHomTilde") return HamiltonianKind::EffectiveHomTilde;
    if (s == "DisplacedHbar") return HamiltonianKind::DisplacedHbar;
    if (s == "QuadraticLimitHbarF") return HamiltonianKind::QuadraticLimitHbarF;
    if (s == "SqueezedDrive") return HamiltonianKind::SqueezedDrive;
    if (s == "QuarticHop") return HamiltonianKind::QuarticHop;
    if (s == "HybridFullSpin") return HamiltonianKind::HybridFullSpin;
    if (s == "HybridHP") return HamiltonianKind::HybridHP;
    throw InvalidParameterError("unknown model name: " + s);
}

inline int mode_count(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::EffectiveHomTilde:
        case HamiltonianKind::QuadraticLimitHbarF:
            return 1;
        case HamiltonianKind::HybridFullSpin:
        case HamiltonianKind::HybridHP:
            return 3;
        default:
            return 2;
    }
}

}  // namespace optomech
