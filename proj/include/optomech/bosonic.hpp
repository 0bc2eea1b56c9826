#pragma once

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "optomech/fock.hpp"

namespace optomech {

// ---- raw single-mode building blocks -------------------------------------

// <n-1| a |n> = sqrt(n): entries sqrt(n) on the first superdiagonal.
inline Mat annihilation_m(int dim) {
    if (dim < 2) throw InvalidDimensionError("annihilation needs dim >= 2");
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline Mat identity_m(int dim) { return Mat::Identity(dim, dim); }

inline Mat number_m(int dim) {
    Mat n = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

inline Mat position_sum_m(int dim) {  // a + a^dag
    Mat a = annihilation_m(dim);
    return a + a.adjoint();
}

// exp(i pi n): diag(+1, -1, +1, ...)
inline Mat parity_m(int dim) {
    Mat p = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return p;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// ---- matrix exponential ---------------------------------------------------

// Hermitian and anti-Hermitian inputs go through an eigendecomposition, which
// keeps anti-Hermitian exponentials unitary to ~1e-14. Everything else falls
// back to scaling-and-squaring Pade.
inline Mat matrix_exp_m(const Mat& m) {
    if (!m.allFinite()) throw NumericError("matrix_exp: non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const double antiherm_defect = (m + m.adjoint()).cwiseAbs().maxCoeff();
    const double tol = 1e-13 * scale;

    if (herm_defect <= tol) {
        Eigen::SelfAdjointEigenSolver<Mat> es(m);
        if (es.info() != Eigen::Success) throw NumericError("matrix_exp: eigensolver failed");
        Eigen::VectorXcd ev = es.eigenvalues().array().exp().matrix().cast<Cplx>();
        return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    }
    if (antiherm_defect <= tol) {
        // m = i h with h Hermitian; exp(m) = V exp(i w) V^dag
        Mat h = Cplx(0, -1) * m;
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        if (es.info() != Eigen::Success) throw NumericError("matrix_exp: eigensolver failed");
        Eigen::VectorXcd ph(es.eigenvalues().size());
        for (long k = 0; k < ph.size(); ++k)
            ph(k) = std::exp(Cplx(0, es.eigenvalues()(k)));
        return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }
    return m.exp();
}

// D(x) = exp[x (b - b^dag)]; acts as D(x)^dag b D(x) = b - x.
inline Mat displacement_m(int dim, double x) {
    Mat b = annihilation_m(dim);
    return matrix_exp_m(x * (b - Mat(b.adjoint())));
}

// S(z) = exp[(z b^dag^2 - z* b^2)/2]; real z > 0 stretches the x quadrature:
// <0|S^dag (b+b^dag)^2 S|0> = e^{2z}.
inline Mat squeeze_m(int dim, Cplx z) {
    Mat b = annihilation_m(dim);
    Mat bd = b.adjoint();
    return matrix_exp_m(0.5 * (z * (bd * bd) - std::conj(z) * (b * b)));
}

// ---- collective spin (dimension 2j+1, m = -j ... +j in Fock order) --------

inline Mat spin_jz_m(int dim) {
    double j = 0.5 * (dim - 1);
    Mat jz = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) jz(k, k) = -j + k;
    return jz;
}

inline Mat spin_jplus_m(int dim) {
    double j = 0.5 * (dim - 1);
    Mat jp = Mat::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) {
        double m = -j + k;
        jp(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    return jp;
}

// ---- Holstein-Primakoff factors -------------------------------------------

// diag sqrt(max(Na - n, 0)): the square-root dressing of the HP mapping,
// clamped at zero beyond the physical sector.
inline Mat hp_sqrt_m(int dim, int n_atoms) {
    Mat s = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        s(n, n) = std::sqrt(std::max(0.0, static_cast<double>(n_atoms - n)));
    return s;
}

// ---- layout-aware wrappers -------------------------------------------------

inline OperatorMatrix annihilation(int dim) {
    return OperatorMatrix(single_mode(dim), annihilation_m(dim));
}

// Kronecker embedding with identities on all other modes.
inline OperatorMatrix tensor_embed(const OperatorMatrix& op, int mode_index,
                                   const FockSpaceLayout& layout) {
    if (mode_index < 0 || mode_index >= layout.modes())
        throw LayoutMismatchError("mode index out of range");
    if (op.dim() != layout.mode_dims[static_cast<size_t>(mode_index)])
        throw LayoutMismatchError("operator dimension does not match target mode");
    Mat acc = (mode_index == 0) ? op.mat() : Mat(identity_m(layout.mode_dims[0]));
    for (int m = 1; m < layout.modes(); ++m) {
        const Mat& next = (m == mode_index) ? op.mat() : Mat(identity_m(layout.mode_dims[m]));
        acc = kron(acc, next);
    }
    return OperatorMatrix(layout, std::move(acc), op.hermitian_hint());
}

inline Mat embed_m(const Mat& op, int mode_index, const FockSpaceLayout& layout) {
    Mat acc = (mode_index == 0) ? op : Mat(identity_m(layout.mode_dims[0]));
    for (int m = 1; m < layout.modes(); ++m) {
        const Mat& next = (m == mode_index) ? op : Mat(identity_m(layout.mode_dims[m]));
        acc = kron(acc, next);
    }
    return acc;
}

inline OperatorMatrix matrix_exp(const OperatorMatrix& op) {
    return OperatorMatrix(op.layout(), matrix_exp_m(op.mat()));
}

inline OperatorMatrix displacement(int dim, double x) {
    return OperatorMatrix(single_mode(dim), displacement_m(dim, x));
}

inline OperatorMatrix squeeze(int dim, Cplx z) {
    return OperatorMatrix(single_mode(dim), squeeze_m(dim, z));
}

}  // namespace optomech
