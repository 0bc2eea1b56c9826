#pragma once

#include <cmath>

#include "optomech/bosonic.hpp"
#include "optomech/fock.hpp"
#include "optomech/params.hpp"

namespace optomech {

// Optional exact-unitary build frame: constructing the model with the
// mechanical mode displaced by b -> b + b_shift. The spectrum is unchanged;
// the truncated representation of displaced ground states improves massively
// near criticality. Variances and cavity observables are frame independent,
// <b+b^dag> picks up 2*b_shift.
struct BuildOptions {
    double b_shift = 0.0;
};

namespace detail {

// b^dag b and (b+b^dag) in the displaced frame.
inline void framed_mech(int dim_b, double shift, Mat& num_out, Mat& x_out) {
    Mat b = annihilation_m(dim_b);
    Mat xb = b + Mat(b.adjoint());
    num_out = Mat(b.adjoint()) * b + shift * xb +
              (shift * shift) * identity_m(dim_b);
    x_out = xb + (2.0 * shift) * identity_m(dim_b);
}

inline void require_modes(const FockSpaceLayout& layout, int n, const char* who) {
    if (layout.modes() != n)
        throw LayoutMismatchError(std::string(who) + " needs a layout with " +
                                  std::to_string(n) + " mode(s)");
}

}  // namespace detail

// H/omega_c = a^t a + eta^-1 b^t b + (g/omega_c)(a+a^t)^2 (b+b^t)
inline OperatorMatrix build_full_h(const ModelParams& p, const FockSpaceLayout& layout,
                                   BuildOptions opt = {}) {
    p.validate();
    detail::require_modes(layout, 2, "build_full_h");
    const int da = layout.mode_dims[0], db = layout.mode_dims[1];
    Mat xa = position_sum_m(da);
    Mat xa2 = xa * xa;
    Mat nb, xb;
    detail::framed_mech(db, opt.b_shift, nb, xb);
    Mat h = kron(number_m(da), identity_m(db));
    h += (p.omega_m / p.omega_c) * kron(identity_m(da), nb);
    h += (p.g / p.omega_c) * kron(xa2, xb);
    return OperatorMatrix(layout, std::move(h), true);
}

// Radiation-pressure approximation: coupling 2g a^t a (b+b^t) only.
inline OperatorMatrix build_approx_hom(const ModelParams& p, const FockSpaceLayout& layout,
                                       BuildOptions opt = {}) {
    p.validate();
    detail::require_modes(layout, 2, "build_approx_hom");
    const int da = layout.mode_dims[0], db = layout.mode_dims[1];
    Mat nb, xb;
    detail::framed_mech(db, opt.b_shift, nb, xb);
    Mat h = kron(number_m(da), identity_m(db));
    h += (p.omega_m / p.omega_c) * kron(identity_m(da), nb);
    h += (2.0 * p.g / p.omega_c) * kron(number_m(da), xb);
    return OperatorMatrix(layout, std::move(h), true);
}

// Single-mode anharmonic spectrum n - n^2/kappa^2 (units of omega_c).
inline OperatorMatrix build_effective_hom_tilde(double kappa, int dim) {
    if (!(kappa > 0.0)) throw InvalidParameterError("kappa must be > 0");
    if (dim < 2) throw InvalidDimensionError("dim must be >= 2");
    Mat h = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        double nn = static_cast<double>(n);
        h(n, n) = nn - nn * nn / (kappa * kappa);
    }
    return OperatorMatrix(single_mode(dim, "cavity"), std::move(h), true);
}

// Mechanically displaced frame of the full model: the displacement trades the
// linear phonon force for an anti-squeezing term -(2g^2/omega_m)(a+a^t)^2.
inline OperatorMatrix build_displaced_hbar(const ModelParams& p, const FockSpaceLayout& layout,
                                           BuildOptions opt = {}) {
    p.validate();
    detail::require_modes(layout, 2, "build_displaced_hbar");
    const int da = layout.mode_dims[0], db = layout.mode_dims[1];
    Mat a = annihilation_m(da);
    Mat ad = a.adjoint();
    Mat xa = position_sum_m(da);
    Mat pairs = a * a + ad * ad;
    Mat nb, xb;
    detail::framed_mech(db, opt.b_shift, nb, xb);
    const double wc = p.omega_c;
    Mat h = kron(number_m(da), identity_m(db));
    h += (p.omega_m / wc) * kron(identity_m(da), nb);
    h -= (2.0 * p.g * p.g / (p.omega_m * wc)) * kron(xa * xa, identity_m(db));
    h += (p.g * p.g / (p.omega_m * wc)) * kron(identity_m(da), identity_m(db));
    h += (p.g / wc) * kron(pairs, xb);
    h += (2.0 * p.g / wc) * kron(number_m(da), xb);
    return OperatorMatrix(layout, std::move(h), true);
}

// Classical-limit quadratic form: a^t a - (gamma^2/4)(a+a^t)^2 + gamma^2/8.
inline OperatorMatrix build_quadratic_limit(double gamma, int dim) {
    if (gamma < 0.0 && !(gamma == gamma)) throw InvalidParameterError("gamma must be finite");
    if (dim < 2) throw InvalidDimensionError("dim must be >= 2");
    const double g2 = gamma * gamma;
    Mat xa = position_sum_m(dim);
    Mat h = number_m(dim) - (g2 / 4.0) * (xa * xa) + (g2 / 8.0) * identity_m(dim);
    return OperatorMatrix(single_mode(dim, "cavity"), std::move(h), true);
}

// Squeezed-frame Hamiltonian H_(theta,xi) = S^dag (H + xi(a^t2 e^-it + a^2 e^it)) S,
// in units of omega_c. The drive amplitude is the literal xi in the same units
// the frequencies are given in. theta in {0, pi} matches the closed-form layer;
// other directions are built the same way but are not validated against it.
inline OperatorMatrix build_squeezed_drive(const ModelParams& p, const FockSpaceLayout& layout,
                                           BuildOptions opt = {}) {
    p.validate();
    detail::require_modes(layout, 2, "build_squeezed_drive");
    if (p.xi == 0.0) return build_full_h(p, layout, opt);

    const int da = layout.mode_dims[0], db = layout.mode_dims[1];
    const double wc = p.omega_c;
    const Cplx eit = std::exp(Cplx(0, p.theta));
    const Cplx emit = std::conj(eit);

    Mat a = annihilation_m(da);
    Mat ad = a.adjoint();
    Mat ia = identity_m(da);

    // cavity quadratic part of the transformed frame
    Mat cav = 0.5 * std::cosh(2.0 * p.xi) * (2.0 * Mat(ad * a) + ia);
    cav -= 0.5 * std::sinh(2.0 * p.xi) * Mat(eit * (ad * ad) + emit * (a * a));
    cav -= 0.5 * ia;

    // residual drive, conjugated explicitly: S = exp[(z* a^2 - z a^t2)/2], z = xi e^{i theta}
    Cplx z = p.xi * eit;
    Mat s = squeeze_m(da, -z);
    Mat drive = (p.xi / wc) * Mat(s.adjoint() * (emit * (ad * ad) + eit * (a * a)) * s);

    // coupling g [cosh(xi)(a+a^t) - sinh(xi)(e^-it a + e^it a^t)]^2 (b+b^t)
    Mat k = std::cosh(p.xi) * Mat(a + ad) - std::sinh(p.xi) * Mat(emit * a + eit * ad);
    Mat k2 = k * k;

    Mat nb, xb;
    detail::framed_mech(db, opt.b_shift, nb, xb);

    Mat h = kron(cav + drive, identity_m(db));
    h += (p.omega_m / wc) * kron(ia, nb);
    h += (p.g / wc) * kron(k2, xb);
    return OperatorMatrix(layout, std::move(h), true);
}

// Macroscopic-factor model with stabilizing quartic terms (units of omega_c):
// N a^t a + eta^-1 b^t b + g(a^2+a^t2+2a^t a)(b+b^t) + N g (b+b^t)
// + (eps1/N^2) a^t2 a^2 + (eps2/N^2) b^t2 b^2.
inline OperatorMatrix build_quartic_hop(const ModelParams& p, const FockSpaceLayout& layout,
                                        BuildOptions opt = {}) {
    p.validate();
    detail::require_modes(layout, 2, "build_quartic_hop");
    if (opt.b_shift != 0.0)
        throw InvalidParameterError("build frame is not supported for the quartic model");
    const int da = layout.mode_dims[0], db = layout.mode_dims[1];
    const double wc = p.omega_c, n = p.n_factor;
    Mat a = annihilation_m(da);
    Mat ad = a.adjoint();
    Mat b = annihilation_m(db);
    Mat bd = b.adjoint();
    Mat xb = b + bd;
    Mat coup = a * a + ad * ad + 2.0 * Mat(ad * a);

    Mat h = n * kron(number_m(da), identity_m(db));
    h += (p.omega_m / wc) * kron(identity_m(da), Mat(bd * b));
    h += (p.g / wc) * kron(coup, xb);
    h += (n * p.g / wc) * kron(identity_m(da), xb);
    h += (p.eps1 / (n * n * wc)) * kron(Mat(ad * ad * a * a), identity_m(db));
    h += (p.eps2 / (n * n * wc)) * kron(identity_m(da), Mat(bd * bd * b * b));
    return OperatorMatrix(layout, std::move(h), true);
}

enum class HybridRep { FullSpin, HP };

// Hybrid system: optomechanics + Dicke atoms + A^2 term chi (a+a^t)^2 with
// chi = alpha lambda^2 / omega_a. Third mode is either the exact spin-(Na/2)
// block (dimension Na+1) or the Holstein-Primakoff boson with the clamped
// square-root factor.
inline OperatorMatrix build_hybrid(const ModelParams& p, const FockSpaceLayout& layout,
                                   HybridRep rep, BuildOptions opt = {}) {
    p.validate();
    detail::require_modes(layout, 3, "build_hybrid");
    const int da = layout.mode_dims[0], db = layout.mode_dims[1], dc = layout.mode_dims[2];
    if (rep == HybridRep::FullSpin && dc != p.n_atoms + 1)
        throw LayoutMismatchError("full-spin representation needs mode dimension N_a + 1");
    const double wc = p.omega_c;

    Mat xa = position_sum_m(da);
    Mat xa2 = xa * xa;
    Mat nb, xb;
    detail::framed_mech(db, opt.b_shift, nb, xb);

    Mat jz, jpm;  // J_z and J_+ + J_-
    if (rep == HybridRep::FullSpin) {
        jz = spin_jz_m(dc);
        Mat jp = spin_jplus_m(dc);
        jpm = jp + Mat(jp.adjoint());
    } else {
        Mat c = annihilation_m(dc);
        Mat sq = hp_sqrt_m(dc, p.n_atoms);
        jz = Mat(c.adjoint()) * c - (0.5 * p.n_atoms) * identity_m(dc);
        Mat jp = Mat(c.adjoint()) * sq;
        jpm = jp + Mat(jp.adjoint());
    }

    const FockSpaceLayout& L = layout;
    Mat h = embed_m(number_m(da), 0, L);
    h += (p.omega_m / wc) * embed_m(nb, 1, L);
    h += (p.g / wc) * kron(xa2, kron(xb, identity_m(dc)));
    h += (p.omega_a / wc) * embed_m(jz, 2, L);
    h += (p.lambda / (std::sqrt(static_cast<double>(p.n_atoms)) * wc)) *
         kron(xa, kron(identity_m(db), jpm));
    h += (p.chi() / wc) * embed_m(xa2, 0, L);
    return OperatorMatrix(layout, std::move(h), true);
}

// Polaron transform diagonalizing the radiation-pressure model: the
// displacement per photon is 2g/omega_m, which reproduces the eigenvalues
// E = n - n^2/kappa^2 + k/eta.
inline OperatorMatrix polaron_unitary(const ModelParams& p, const FockSpaceLayout& layout) {
    p.validate();
    detail::require_modes(layout, 2, "polaron_unitary");
    const int da = layout.mode_dims[0], db = layout.mode_dims[1];
    Mat b = annihilation_m(db);
    Mat gen = kron(number_m(da), Mat(b.adjoint() - b));
    return OperatorMatrix(layout, matrix_exp_m(-(2.0 * p.g / p.omega_m) * gen));
}

// Conserved operator of the radiation-pressure model in the original basis,
// built by conjugating exp(i theta (a^t a + b^t b)) with the polaron unitary.
inline OperatorMatrix u1_conserved_op(const ModelParams& p, const FockSpaceLayout& layout,
                                      double theta_angle) {
    const int da = layout.mode_dims[0], db = layout.mode_dims[1];
    Mat n_tot = kron(number_m(da), identity_m(db)) + kron(identity_m(da), number_m(db));
    Mat pbar = matrix_exp_m(Cplx(0, theta_angle) * n_tot);
    Mat u = polaron_unitary(p, layout).mat();
    return OperatorMatrix(layout, u * pbar * Mat(u.adjoint()));
}

// Cavity photon parity embedded on the composite space.
inline OperatorMatrix cavity_parity(const FockSpaceLayout& layout) {
    return OperatorMatrix(layout, embed_m(parity_m(layout.mode_dims[0]), 0, layout), true);
}

inline OperatorMatrix build(HamiltonianKind kind, const ModelParams& p,
                            const FockSpaceLayout& layout, BuildOptions opt = {}) {
    switch (kind) {
        case HamiltonianKind::FullH: return build_full_h(p, layout, opt);
        case HamiltonianKind::ApproxHom: return build_approx_hom(p, layout, opt);
        case HamiltonianKind::EffectiveHomTilde:
            return build_effective_hom_tilde(p.kappa(), layout.mode_dims[0]);
        case HamiltonianKind::DisplacedHbar: return build_displaced_hbar(p, layout, opt);
        case HamiltonianKind::QuadraticLimitHbarF:
            return build_quadratic_limit(p.gamma(), layout.mode_dims[0]);
        case HamiltonianKind::SqueezedDrive: return build_squeezed_drive(p, layout, opt);
        case HamiltonianKind::QuarticHop: return build_quartic_hop(p, layout, opt);
        case HamiltonianKind::HybridFullSpin:
            return build_hybrid(p, layout, HybridRep::FullSpin, opt);
        case HamiltonianKind::HybridHP: return build_hybrid(p, layout, HybridRep::HP, opt);
    }
    throw InvalidParameterError("unknown HamiltonianKind");
}

}  // namespace optomech
