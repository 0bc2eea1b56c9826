#pragma once

#include <complex>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "optomech/errors.hpp"

namespace optomech {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Ordered list of per-mode Fock truncations. Mode 0 is the leftmost (slowest)
// Kronecker factor: basis index = n_0 * (d_1 * d_2 * ...) + n_1 * (d_2 * ...) + ...
struct FockSpaceLayout {
    std::vector<int> mode_dims;
    std::vector<std::string> mode_labels;

    FockSpaceLayout() = default;
    FockSpaceLayout(std::vector<int> dims, std::vector<std::string> labels)
        : mode_dims(std::move(dims)), mode_labels(std::move(labels)) {
        validate();
    }

    void validate() const {
        if (mode_dims.empty())
            throw InvalidDimensionError("layout needs at least one mode");
        if (mode_labels.size() != mode_dims.size())
            throw LayoutMismatchError("one label per mode required");
        for (int d : mode_dims)
            if (d < 2)
                throw InvalidDimensionError("every mode dimension must be >= 2, got " +
                                            std::to_string(d));
        std::unordered_set<std::string> seen(mode_labels.begin(), mode_labels.end());
        if (seen.size() != mode_labels.size())
            throw LayoutMismatchError("mode labels must be unique");
    }

    int modes() const { return static_cast<int>(mode_dims.size()); }

    long total_dim() const {
        long t = 1;
        for (int d : mode_dims) t *= d;
        return t;
    }

    bool operator==(const FockSpaceLayout& o) const {
        return mode_dims == o.mode_dims && mode_labels == o.mode_labels;
    }
    bool operator!=(const FockSpaceLayout& o) const { return !(*this == o); }
};

inline FockSpaceLayout single_mode(int dim, std::string label = "mode") {
    return FockSpaceLayout({dim}, {std::move(label)});
}

inline FockSpaceLayout cavity_mech(int dim_cavity, int dim_mech) {
    return FockSpaceLayout({dim_cavity, dim_mech}, {"cavity", "mechanical"});
}

inline FockSpaceLayout cavity_mech_atom(int dim_cavity, int dim_mech, int dim_atom) {
    return FockSpaceLayout({dim_cavity, dim_mech, dim_atom},
                           {"cavity", "mechanical", "atom-HP"});
}

// Dense complex operator over a labeled composite Fock basis. Values are
// immutable after construction; share freely across threads.
class OperatorMatrix {
  public:
    OperatorMatrix(FockSpaceLayout layout, Mat entries, bool hermitian_hint = false)
        : layout_(std::move(layout)), entries_(std::move(entries)),
          hermitian_hint_(hermitian_hint) {
        layout_.validate();
        if (entries_.rows() != entries_.cols())
            throw LayoutMismatchError("operator matrix must be square");
        if (entries_.rows() != layout_.total_dim())
            throw LayoutMismatchError("matrix dimension " + std::to_string(entries_.rows()) +
                                      " does not match layout total " +
                                      std::to_string(layout_.total_dim()));
    }

    const FockSpaceLayout& layout() const { return layout_; }
    const Mat& mat() const { return entries_; }
    long dim() const { return entries_.rows(); }
    bool hermitian_hint() const { return hermitian_hint_; }

    double hermiticity_defect() const {
        return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    }

    void require_hermitian(double tol = 1e-12) const {
        double d = hermiticity_defect();
        if (d > tol)
            throw HermiticityError("hermiticity defect " + std::to_string(d) +
                                   " exceeds tolerance");
    }

    OperatorMatrix adjoint() const {
        return OperatorMatrix(layout_, entries_.adjoint(), hermitian_hint_);
    }

  private:
    FockSpaceLayout layout_;
    Mat entries_;
    bool hermitian_hint_;
};

inline void require_same_layout(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.layout() != b.layout())
        throw LayoutMismatchError("operands live on different layouts");
}

inline OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_layout(a, b);
    return OperatorMatrix(a.layout(), a.mat() + b.mat(),
                          a.hermitian_hint() && b.hermitian_hint());
}

inline OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_layout(a, b);
    return OperatorMatrix(a.layout(), a.mat() - b.mat(),
                          a.hermitian_hint() && b.hermitian_hint());
}

inline OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_layout(a, b);
    return OperatorMatrix(a.layout(), a.mat() * b.mat(), false);
}

inline OperatorMatrix operator*(Cplx c, const OperatorMatrix& a) {
    return OperatorMatrix(a.layout(), c * a.mat(), false);
}

inline OperatorMatrix operator*(double c, const OperatorMatrix& a) {
    return OperatorMatrix(a.layout(), c * a.mat(), a.hermitian_hint());
}

}  // namespace optomech
