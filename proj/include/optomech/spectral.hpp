#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "optomech/analytic.hpp"
#include "optomech/bosonic.hpp"
#include "optomech/models.hpp"
#include "optomech/params.hpp"

namespace optomech {

struct Observables {
    double photon_number = std::numeric_limits<double>::quiet_NaN();
    double phonon_number = std::numeric_limits<double>::quiet_NaN();
    Cplx coherence_a{0.0, 0.0};
    Cplx coherence_b{0.0, 0.0};
    double parity_c = std::numeric_limits<double>::quiet_NaN();
    double var_x_a = std::numeric_limits<double>::quiet_NaN();
    double var_p_a = std::numeric_limits<double>::quiet_NaN();
    double var_x_b = std::numeric_limits<double>::quiet_NaN();
    double var_p_b = std::numeric_limits<double>::quiet_NaN();
    // per-label mean occupations for any extra modes
    std::map<std::string, double> mode_numbers;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;  // lowest k, ascending, units of omega_c
    Vec ground_vector;
    double gap = 0.0;                 // eigenvalues[1] - eigenvalues[0]
    double gap_odd_parity = std::numeric_limits<double>::quiet_NaN();
    Observables observables;
    bool converged = false;
    FockSpaceLayout dim_used;
    double b_frame_shift = 0.0;       // build frame the solve ran in
    std::string note;                 // "", "runaway-detected", "dim-cap", ...
};

namespace spectral_detail {

// reduced density matrix of one mode, contracted from the pure state
inline Mat reduced_density(const Vec& psi, const FockSpaceLayout& layout, int mode) {
    const int nm = layout.modes();
    std::vector<long> stride(nm);
    long s = 1;
    for (int m = nm - 1; m >= 0; --m) {
        stride[m] = s;
        s *= layout.mode_dims[m];
    }
    const int d = layout.mode_dims[mode];
    const long str = stride[mode];
    const long total = layout.total_dim();
    const long outer = total / d;
    Mat rho = Mat::Zero(d, d);
    // enumerate all indices with mode digit stripped
    for (long o = 0; o < outer; ++o) {
        // rebuild base index with a zero digit at `mode`
        long rem = o, base = 0;
        for (int m = 0; m < nm; ++m) {
            if (m == mode) continue;
            long dm = layout.mode_dims[m];
            long digit = (rem / (stride[m] / ((m > mode) ? 1 : d))) % dm;
            (void)digit;
            (void)dm;
        }
        // simpler: decode o in the reduced mixed-radix system
        rem = o;
        base = 0;
        for (int m = nm - 1; m >= 0; --m) {
            if (m == mode) continue;
            long dm = layout.mode_dims[m];
            long digit = rem % dm;
            rem /= dm;
            base += digit * stride[m];
        }
        for (int p = 0; p < d; ++p) {
            Cplx ap = psi(base + p * str);
            if (ap == Cplx(0.0, 0.0)) continue;
            for (int q = 0; q < d; ++q) rho(p, q) += ap * std::conj(psi(base + q * str));
        }
    }
    return rho;
}

inline double parity_expectation(const Vec& v, const FockSpaceLayout& layout) {
    const long d0 = layout.mode_dims[0];
    const long inner = layout.total_dim() / d0;
    double p = 0.0;
    for (long n = 0; n < d0; ++n) {
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        double w = 0.0;
        for (long r = 0; r < inner; ++r) w += std::norm(v(n * inner + r));
        p += sign * w;
    }
    return p;
}

inline void mode_moments(const Mat& rho, double& num, Cplx& coh, double& var_x,
                         double& var_p) {
    const int d = static_cast<int>(rho.rows());
    Mat a = annihilation_m(d);
    Mat x = (a + Mat(a.adjoint())) / std::sqrt(2.0);
    Mat p = Cplx(0, 1) * (Mat(a.adjoint()) - a) / std::sqrt(2.0);
    num = std::real((rho * Mat(Mat(a.adjoint()) * a)).trace());
    coh = (rho * a).trace();
    double mx = std::real((rho * x).trace());
    double mp = std::real((rho * p).trace());
    var_x = std::real((rho * Mat(x * x)).trace()) - mx * mx;
    var_p = std::real((rho * Mat(p * p)).trace()) - mp * mp;
}

// weight of the state near the truncation edge (top quarter of any mode)
inline double edge_weight(const Vec& psi, const FockSpaceLayout& layout) {
    const int nm = layout.modes();
    std::vector<long> stride(nm);
    long s = 1;
    for (int m = nm - 1; m >= 0; --m) {
        stride[m] = s;
        s *= layout.mode_dims[m];
    }
    double w = 0.0;
    for (long i = 0; i < layout.total_dim(); ++i) {
        double a2 = std::norm(psi(i));
        if (a2 == 0.0) continue;
        for (int m = 0; m < nm; ++m) {
            long digit = (i / stride[m]) % layout.mode_dims[m];
            if (4 * digit >= 3L * layout.mode_dims[m]) {
                w += a2;
                break;
            }
        }
    }
    return w;
}

}  // namespace spectral_detail

// Full self-adjoint eigendecomposition with ground-state observables.
// `converged` stays false here; the convergence machinery flips it.
inline SpectrumResult eigendecompose(const OperatorMatrix& h, int k_lowest) {
    if (k_lowest < 1) throw InvalidParameterError("k_lowest must be >= 1");
    h.require_hermitian(1e-10 * std::max(1.0, h.mat().cwiseAbs().maxCoeff()));

    Eigen::SelfAdjointEigenSolver<Mat> es(h.mat());
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");

    SpectrumResult r;
    r.dim_used = h.layout();
    const long dim = h.dim();
    const int k = static_cast<int>(std::min<long>(k_lowest, dim));
    r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
    r.ground_vector = es.eigenvectors().col(0);
    r.gap = dim > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : 0.0;

    // ground-state observables from reduced density matrices
    const FockSpaceLayout& L = h.layout();
    Mat rho0 = spectral_detail::reduced_density(r.ground_vector, L, 0);
    spectral_detail::mode_moments(rho0, r.observables.photon_number, r.observables.coherence_a,
                                  r.observables.var_x_a, r.observables.var_p_a);
    r.observables.parity_c = std::real((rho0 * parity_m(L.mode_dims[0])).trace());
    if (L.modes() >= 2) {
        Mat rho1 = spectral_detail::reduced_density(r.ground_vector, L, 1);
        spectral_detail::mode_moments(rho1, r.observables.phonon_number,
                                      r.observables.coherence_b, r.observables.var_x_b,
                                      r.observables.var_p_b);
    }
    for (int m = 2; m < L.modes(); ++m) {
        Mat rhom = spectral_detail::reduced_density(r.ground_vector, L, m);
        double num;
        Cplx coh;
        double vx, vp;
        spectral_detail::mode_moments(rhom, num, coh, vx, vp);
        r.observables.mode_numbers[L.mode_labels[m]] = num;
    }

    // lowest excitation with odd cavity parity
    const double p0 = spectral_detail::parity_expectation(r.ground_vector, L);
    const long scan = std::min<long>(dim, 800);
    for (long j = 1; j < scan; ++j) {
        double pj = spectral_detail::parity_expectation(es.eigenvectors().col(j), L);
        if (pj * ((p0 >= 0.0) ? 1.0 : -1.0) < -0.5) {
            r.gap_odd_parity = es.eigenvalues()(j) - es.eigenvalues()(0);
            break;
        }
    }
    return r;
}

// ---- convergence machinery --------------------------------------------------

struct SolveOptions {
    int k_lowest = 8;
    bool use_frame = true;     // displaced-phonon build frame for linear-b models
    int start_cavity = 16;
    int start_mech = 40;
    long total_cap = 4096;     // auto-escalation cap on the base layout
    double eig_tol = 1e-7;     // lowest-3 stability under dim doubling
    double occ_tol = 1e-5;     // photon-number stability
    int max_escalations = 6;
};

struct ConvergenceReport {
    bool converged = false;
    std::string note;
    FockSpaceLayout layout;
    double b_shift = 0.0;
    std::vector<std::string> mode_notes;
};

namespace spectral_detail {

inline bool has_linear_phonon(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::FullH:
        case HamiltonianKind::ApproxHom:
        case HamiltonianKind::DisplacedHbar:
        case HamiltonianKind::SqueezedDrive:
        case HamiltonianKind::HybridFullSpin:
        case HamiltonianKind::HybridHP:
            return true;
        default:
            return false;
    }
}

// Smaller root u > 1 of Gamma u^3 - u^2 + 1 = 0: the self-consistent
// x-variance of the phonon-conditioned branch. Beyond the spinodal
// Gamma = 4/27 (no root) the branch is gone; sqrt(3) is returned as the
// last-branch value and `alive` turns false.
inline double conditioned_branch_u(double gamma_sq, bool* alive = nullptr) {
    const double spinodal = 4.0 / 27.0;
    if (gamma_sq <= 0.0) {
        if (alive) *alive = true;
        return 1.0;
    }
    if (gamma_sq >= spinodal) {
        if (alive) *alive = false;
        return std::sqrt(3.0);
    }
    double u = gamma_sq < 1.0 ? std::min(1.0 / std::sqrt(1.0 - gamma_sq), std::sqrt(3.0))
                              : std::sqrt(3.0);
    for (int it = 0; it < 100; ++it) {
        double f = gamma_sq * u * u * u - u * u + 1.0;
        double fp = 3.0 * gamma_sq * u * u - 2.0 * u;
        if (std::abs(fp) < 1e-300) break;
        double un = u - f / fp;
        un = std::clamp(un, 1.0, std::sqrt(3.0));
        if (std::abs(un - u) < 1e-14) {
            u = un;
            break;
        }
        u = un;
    }
    if (alive) *alive = true;
    return u;
}

// Mean-field seed for the displaced-phonon frame (negative displacement).
inline double frame_seed(HamiltonianKind k, const ModelParams& p) {
    const double gm = p.gamma();
    switch (k) {
        case HamiltonianKind::FullH:
        case HamiltonianKind::DisplacedHbar:
        case HamiltonianKind::SqueezedDrive: {
            bool alive = true;
            double v = conditioned_branch_u(gm * gm, &alive);
            double shift = -(p.g / p.omega_m) * v;
            if (k == HamiltonianKind::DisplacedHbar)
                shift += p.g / p.omega_m;  // residual after the built-in displacement
            return shift;
        }
        case HamiltonianKind::HybridFullSpin:
        case HamiltonianKind::HybridHP:
            return -(p.g / p.omega_m);
        default:
            return 0.0;
    }
}

inline FockSpaceLayout start_layout(HamiltonianKind k, const ModelParams& p,
                                    const SolveOptions& o) {
    switch (mode_count(k)) {
        case 1: {
            // squeezing grows toward the critical coupling: schedule the dim
            int dim = o.start_cavity;
            if (k == HamiltonianKind::QuadraticLimitHbarF) {
                double gm = p.gamma();
                if (gm < 1.0)
                    dim = std::max(dim, static_cast<int>(std::ceil(16.0 / (1.0 - gm * gm))));
                dim = static_cast<int>(std::min<long>(dim, o.total_cap));
            }
            return single_mode(std::max(dim, 8), "cavity");
        }
        case 2:
            return cavity_mech(o.start_cavity, o.start_mech);
        default: {
            int datom = std::min(p.n_atoms + 1, 32);
            if (k == HamiltonianKind::HybridFullSpin) datom = p.n_atoms + 1;
            return cavity_mech_atom(o.start_cavity, std::min(o.start_mech, 16), datom);
        }
    }
}

inline SpectrumResult solve_at(HamiltonianKind k, const ModelParams& p,
                               const FockSpaceLayout& layout, double shift, int k_lowest) {
    BuildOptions bo;
    bo.b_shift = shift;
    SpectrumResult r = eigendecompose(build(k, p, layout, bo), k_lowest);
    r.b_frame_shift = shift;
    if (shift != 0.0) {
        // map frame observables back to the lab frame
        r.observables.phonon_number += 2.0 * shift * std::real(r.observables.coherence_b) +
                                       shift * shift;
        r.observables.coherence_b += shift;
    }
    return r;
}

}  // namespace spectral_detail

// Rebuild with each mode dimension doubled (one mode at a time) and compare
// the lowest three eigenvalues and the photon number. A probe that dives to a
// lower branch while the base ground state is well contained is the signature
// of the variational instability of the truncated model; it is reported as
// unconverged rather than chased.
inline ConvergenceReport convergence_check(HamiltonianKind kind, const ModelParams& p,
                                           const FockSpaceLayout& base_layout,
                                           double b_shift = 0.0, SolveOptions opts = {}) {
    ConvergenceReport rep;
    rep.layout = base_layout;
    rep.b_shift = b_shift;

    SpectrumResult base;
    try {
        base = spectral_detail::solve_at(kind, p, base_layout, b_shift, 3);
    } catch (const std::bad_alloc&) {
        rep.note = "truncation-unresolved: base allocation";
        return rep;
    }
    const double base_edge = spectral_detail::edge_weight(base.ground_vector, base_layout);

    bool all_ok = true;
    for (int m = 0; m < base_layout.modes(); ++m) {
        if (kind == HamiltonianKind::HybridFullSpin && m == 2) continue;  // exact block
        FockSpaceLayout probe = base_layout;
        probe.mode_dims[m] *= 2;
        if (kind == HamiltonianKind::HybridHP)
            probe.mode_dims[m] = std::min(probe.mode_dims[m], 4 * (p.n_atoms + 1));
        if (probe.mode_dims[m] == base_layout.mode_dims[m]) continue;
        SpectrumResult pr;
        try {
            pr = spectral_detail::solve_at(kind, p, probe, b_shift, 3);
        } catch (const std::bad_alloc&) {
            rep.mode_notes.push_back(base_layout.mode_labels[m] +
                                     ": truncation-unresolved (resource limit)");
            all_ok = false;
            continue;
        }
        double eig_shift = 0.0;
        for (size_t i = 0; i < std::min<size_t>(3, base.eigenvalues.size()); ++i)
            eig_shift = std::max(eig_shift,
                                 std::abs(base.eigenvalues[i] - pr.eigenvalues[i]));
        double occ_shift =
            std::abs(base.observables.photon_number - pr.observables.photon_number);

        bool drop = (pr.eigenvalues[0] - base.eigenvalues[0]) < -1e-3;
        if (drop && base_edge < 1e-4) {
            rep.note = "runaway-detected";
            rep.mode_notes.push_back(base_layout.mode_labels[m] +
                                     ": lower branch appeared under doubling");
            all_ok = false;
            continue;
        }
        if (eig_shift >= opts.eig_tol || occ_shift >= opts.occ_tol) {
            rep.mode_notes.push_back(base_layout.mode_labels[m] + ": shift " +
                                     std::to_string(eig_shift));
            all_ok = false;
        }
    }
    rep.converged = all_ok;
    return rep;
}

// Auto-dims solve: displaced-phonon frame from the variational seed, guarded
// frame refinement, per-mode escalation until the doubling check passes, the
// cap is hit, or a runaway is detected. The returned result carries the
// honest flag either way.
inline SpectrumResult solve_auto(HamiltonianKind kind, const ModelParams& p,
                                 SolveOptions opts = {}) {
    p.validate();
    double shift = (opts.use_frame && spectral_detail::has_linear_phonon(kind))
                       ? spectral_detail::frame_seed(kind, p)
                       : 0.0;
    FockSpaceLayout layout = spectral_detail::start_layout(kind, p, opts);

    SpectrumResult best = spectral_detail::solve_at(kind, p, layout, shift, opts.k_lowest);

    // one guarded frame refinement: recenter on the measured displacement,
    // revert if the refined frame exposes a lower branch
    if (shift != 0.0) {
        double resid = std::real(best.observables.coherence_b) - shift;
        if (std::abs(resid) > 0.5) {
            double shift2 = shift + resid;
            SpectrumResult r2 =
                spectral_detail::solve_at(kind, p, layout, shift2, opts.k_lowest);
            if (r2.eigenvalues[0] >= best.eigenvalues[0] - 0.02) {
                shift = shift2;
                best = std::move(r2);
            }
        }
    }

    for (int esc = 0; esc <= opts.max_escalations; ++esc) {
        ConvergenceReport rep = convergence_check(kind, p, layout, shift, opts);
        if (rep.converged) {
            best = spectral_detail::solve_at(kind, p, layout, shift, opts.k_lowest);
            best.converged = true;
            return best;
        }
        if (rep.note == "runaway-detected") {
            best = spectral_detail::solve_at(kind, p, layout, shift, opts.k_lowest);
            best.converged = false;
            best.note = rep.note;
            return best;
        }
        // escalate the failing modes
        FockSpaceLayout next = layout;
        for (const std::string& n : rep.mode_notes) {
            for (int m = 0; m < layout.modes(); ++m)
                if (n.rfind(layout.mode_labels[m] + ":", 0) == 0) next.mode_dims[m] *= 2;
        }
        if (kind == HamiltonianKind::HybridFullSpin)
            next.mode_dims[2] = p.n_atoms + 1;
        if (next.total_dim() > opts.total_cap || next == layout) {
            best = spectral_detail::solve_at(kind, p, layout, shift, opts.k_lowest);
            best.converged = false;
            best.note = "dim-cap";
            return best;
        }
        layout = next;
        best = spectral_detail::solve_at(kind, p, layout, shift, opts.k_lowest);
    }
    best.converged = false;
    best.note = "escalation-limit";
    return best;
}

// ---- level crossings of the anharmonic staircase -----------------------------

struct CrossingReport {
    struct Crossing {
        double kappa;
        int lower_level;  // crossing between |n> and |n+1>
    };
    std::vector<Crossing> crossings;
    std::vector<std::pair<double, int>> staircase;  // (kappa, ceil(n_G))
};

// Scan the anharmonic diagonal model in the flipped reporting frame: the
// staircase counts the occupation minimizing n^2/kappa^2 - n, and crossings
// are bisected to 1e-9 from the sign of E(n+1) - E(n).
inline CrossingReport level_crossing_scan(double lo, double hi, int steps, int dim) {
    if (lo < 0.0) throw InvalidParameterError("kappa range must be >= 0");
    if (steps < 2) throw InvalidGridError("need at least 2 steps");
    if (dim < 2) throw InvalidDimensionError("dim must be >= 2");

    auto level = [&](int n, double kappa) {
        double nn = n;
        return nn - nn * nn / (kappa * kappa);
    };
    auto occupation = [&](double kappa) {
        // argmin over n of the flipped energy n^2/kappa^2 - n
        int best = 0;
        double bv = 0.0;
        for (int n = 0; n < dim; ++n) {
            double v = static_cast<double>(n) * n / (kappa * kappa) - n;
            if (v < bv - 1e-15) {
                bv = v;
                best = n;
            }
        }
        return best;
    };

    CrossingReport rep;
    for (int i = 0; i < steps; ++i) {
        double kappa = lo + (hi - lo) * i / (steps - 1);
        if (kappa <= 0.0) kappa = std::min(1e-9, hi);
        rep.staircase.emplace_back(kappa, occupation(kappa));
    }
    for (int n = 0; n + 1 < dim; ++n) {
        double kc = std::sqrt(2.0 * n + 1.0);
        if (kc < std::max(lo, 1e-12) || kc > hi) continue;
        // bisection on E(n+1) - E(n), negative above the crossing
        double a = std::max(lo, kc * 0.5), b = std::min(hi, kc * 1.5);
        auto f = [&](double k) { return level(n + 1, k) - level(n, k); };
        if (f(a) * f(b) > 0.0) continue;
        for (int it = 0; it < 200 && (b - a) > 1e-12 * kc; ++it) {
            double m = 0.5 * (a + b);
            if (f(a) * f(m) <= 0.0) b = m;
            else a = m;
        }
        rep.crossings.push_back({0.5 * (a + b), n});
    }
    std::sort(rep.crossings.begin(), rep.crossings.end(),
              [](auto& x, auto& y) { return x.kappa < y.kappa; });
    return rep;
}

// ---- parameter sweeps ---------------------------------------------------------

struct SweepRow {
    double control = 0.0;
    double gap = 0.0;
    double gap_odd_parity = std::numeric_limits<double>::quiet_NaN();
    double photon_number = 0.0;
    double parity = 0.0;
    double energy0 = 0.0;
    bool converged = false;
    std::string note;
};

inline ModelParams apply_control(ModelParams p, const std::string& name, double value) {
    if (name == "gamma") p.set_gamma(value);
    else if (name == "kappa") p.set_kappa(value);
    else if (name == "mu") p.set_mu(value);
    else if (name == "xi") p.xi = value;
    else if (name == "eta") p.set_eta(value);
    else throw InvalidParameterError("unknown control: " + name);
    return p;
}

// Per-point auto-dims diagonalization over a control grid. Points are
// independent; rows are computed by a small worker pool and merged in control
// order. Unresolved points carry their flag instead of aborting the sweep.
inline std::vector<SweepRow> gap_sweep(HamiltonianKind kind, const ModelParams& base,
                                       const std::string& control, double lo, double hi,
                                       int steps, SolveOptions opts = {}, int workers = 1) {
    if (steps < 2) throw InvalidGridError("need at least 2 steps");
    std::vector<SweepRow> rows(steps);
    auto work = [&](int i) {
        double value = lo + (hi - lo) * i / (steps - 1);
        SweepRow row;
        row.control = value;
        try {
            ModelParams p = apply_control(base, control, value);
            SpectrumResult r = solve_auto(kind, p, opts);
            row.gap = r.gap;
            row.gap_odd_parity = r.gap_odd_parity;
            row.photon_number = r.observables.photon_number;
            row.parity = r.observables.parity_c;
            row.energy0 = r.eigenvalues.empty() ? 0.0 : r.eigenvalues[0];
            row.converged = r.converged;
            row.note = r.note;
        } catch (const Error& e) {
            row.converged = false;
            row.note = e.what();
        }
        rows[i] = std::move(row);
    };
    if (workers <= 1) {
        for (int i = 0; i < steps; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < steps; i = next.fetch_add(1)) work(i);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

// Quadrature-variance based effective squeezing of the ground state.
inline std::pair<double, double> squeezing_extract(const SpectrumResult& r) {
    if (!r.converged)
        throw TruncationUnresolvedError("squeezing extraction needs a converged result");
    double r_eff = 0.25 * std::log(r.observables.var_x_a / r.observables.var_p_a);
    double s_eff = std::numeric_limits<double>::quiet_NaN();
    if (r.dim_used.modes() >= 2)
        s_eff = 0.25 * std::log(r.observables.var_x_b / r.observables.var_p_b);
    return {r_eff, s_eff};
}

// Symmetry-broken coherence probe: ground-state <a> under a pinning field
// delta (a + a^dag). Finite systems restore the symmetry, so the unpinned
// coherence vanishes; this reports the pinned value separately.
inline Cplx pinned_coherence(const OperatorMatrix& h, double delta = 1e-6) {
    Mat pin = embed_m(position_sum_m(h.layout().mode_dims[0]), 0, h.layout());
    OperatorMatrix hp(h.layout(), h.mat() + delta * pin, true);
    SpectrumResult r = eigendecompose(hp, 2);
    return r.observables.coherence_a;
}

}  // namespace optomech
