#include <catch2/catch_amalgamated.hpp>

#include "optomech/bosonic.hpp"

using namespace optomech;
using Catch::Approx;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("annihilation operator matrix elements", "[bosonic]") {
    SECTION("dim 2") {
        Mat a = annihilation_m(2);
        REQUIRE(a(0, 1) == Cplx(1.0, 0.0));
        REQUIRE(a(0, 0) == Cplx(0.0, 0.0));
        REQUIRE(a(1, 0) == Cplx(0.0, 0.0));
        REQUIRE(a(1, 1) == Cplx(0.0, 0.0));
    }
    SECTION("dim 3 superdiagonal") {
        Mat a = annihilation_m(3);
        REQUIRE(std::real(a(0, 1)) == Approx(1.0));
        REQUIRE(std::real(a(1, 2)) == Approx(std::sqrt(2.0)));
    }
    SECTION("truncated commutator [a, a^dag] on dim 8") {
        Mat a = annihilation_m(8);
        Mat c = a * Mat(a.adjoint()) - Mat(a.adjoint()) * a;
        for (int n = 0; n < 7; ++n) REQUIRE(std::real(c(n, n)) == Approx(1.0));
        // truncation boundary artifact
        REQUIRE(std::real(c(7, 7)) == Approx(-7.0));
    }
    SECTION("dim < 2 rejected") {
        REQUIRE_THROWS_AS(annihilation_m(1), InvalidDimensionError);
    }
}

TEST_CASE("layout validation", "[bosonic]") {
    REQUIRE_THROWS_AS(FockSpaceLayout({1, 4}, {"a", "b"}), InvalidDimensionError);
    REQUIRE_THROWS_AS(FockSpaceLayout({4, 4}, {"a", "a"}), LayoutMismatchError);
    REQUIRE_THROWS_AS(FockSpaceLayout({4, 4}, {"a"}), LayoutMismatchError);
    FockSpaceLayout L({3, 5}, {"cavity", "mechanical"});
    REQUIRE(L.total_dim() == 15);
    // matrix must match the layout dimension
    REQUIRE_THROWS_AS(OperatorMatrix(L, Mat::Zero(14, 14)), LayoutMismatchError);
    REQUIRE_THROWS_AS(OperatorMatrix(L, Mat::Zero(15, 14)), LayoutMismatchError);
}

TEST_CASE("tensor embedding", "[bosonic]") {
    FockSpaceLayout L({2, 2}, {"cavity", "mechanical"});
    SECTION("mode 0 is the leftmost factor") {
        OperatorMatrix e = tensor_embed(annihilation(2), 0, L);
        Mat want = kron(annihilation_m(2), identity_m(2));
        REQUIRE(max_abs(e.mat() - want) == 0.0);
    }
    SECTION("identity embeds to the global identity") {
        OperatorMatrix e = tensor_embed(OperatorMatrix(single_mode(2), identity_m(2)), 1, L);
        REQUIRE(max_abs(e.mat() - Mat(Mat::Identity(4, 4))) == 0.0);
    }
    SECTION("operators on different modes commute exactly") {
        FockSpaceLayout L44({4, 4}, {"cavity", "mechanical"});
        Mat A = embed_m(annihilation_m(4), 0, L44);
        Mat B = embed_m(annihilation_m(4), 1, L44);
        REQUIRE(max_abs(A * B - B * A) == 0.0);  // bitwise zero
    }
    SECTION("dimension mismatch rejected") {
        REQUIRE_THROWS_AS(tensor_embed(annihilation(3), 0, L), LayoutMismatchError);
    }
}

TEST_CASE("matrix exponential", "[bosonic]") {
    SECTION("exp(0) = I") {
        Mat z = Mat::Zero(6, 6);
        REQUIRE(max_abs(matrix_exp_m(z) - identity_m(6)) < 1e-14);
    }
    SECTION("exp(i pi n) is the parity operator") {
        Mat gen = Cplx(0, M_PI) * number_m(4);
        Mat p = matrix_exp_m(gen);
        REQUIRE(max_abs(p - parity_m(4)) < 1e-12);
    }
    SECTION("displacement unitarity: D(x) D(-x) = I") {
        Mat d1 = displacement_m(40, 0.5);
        Mat d2 = displacement_m(40, -0.5);
        REQUIRE(max_abs(d1 * d2 - identity_m(40)) < 1e-10);
    }
    SECTION("anti-Hermitian generators exponentiate to unitaries") {
        // i * (random Hermitian), fixed seed
        srand(12345);
        for (int trial = 0; trial < 3; ++trial) {
            Mat r = Mat::Random(12, 12);
            Mat h = 0.5 * (r + Mat(r.adjoint()));
            Mat u = matrix_exp_m(Cplx(0, 1) * h);
            REQUIRE(max_abs(Mat(u.adjoint()) * u - identity_m(12)) < 1e-10);
        }
    }
}

TEST_CASE("displacement operator", "[bosonic]") {
    SECTION("x = 0 gives the identity") {
        REQUIRE(max_abs(displacement_m(10, 0.0) - identity_m(10)) < 1e-14);
    }
    SECTION("coherent-state mean occupation <0|D^dag n D|0> = x^2") {
        const int dim = 60;
        const double x = 1.2;
        Mat d = displacement_m(dim, x);
        Vec vac = Vec::Zero(dim);
        vac(0) = 1.0;
        Vec coh = d * vac;
        double n = std::real(coh.dot(number_m(dim) * coh));
        REQUIRE(n == Approx(x * x).margin(1e-8));
    }
    SECTION("conjugation identity D(x)^dag b D(x) = b - x on the interior") {
        const int dim = 40;
        const double x = 0.7;
        Mat d = displacement_m(dim, x);
        Mat b = annihilation_m(dim);
        Mat lhs = Mat(d.adjoint()) * b * d;
        Mat rhs = b - x * identity_m(dim);
        // away from the truncation edge
        REQUIRE(max_abs((lhs - rhs).topLeftCorner(16, 16)) < 1e-9);
    }
}

TEST_CASE("squeeze operator", "[bosonic]") {
    SECTION("z = 0 gives the identity") {
        REQUIRE(max_abs(squeeze_m(10, 0.0) - identity_m(10)) < 1e-14);
    }
    SECTION("x-quadrature second moment <0|S^dag (a+a^t)^2 S|0> = e^{2r}") {
        const int dim = 80;
        const double r = 0.3;
        Mat s = squeeze_m(dim, r);
        Vec vac = Vec::Zero(dim);
        vac(0) = 1.0;
        Vec sq = s * vac;
        Mat x = position_sum_m(dim);
        double mom = std::real(sq.dot(x * x * sq));
        REQUIRE(mom == Approx(std::exp(2.0 * r)).margin(1e-6));
    }
    SECTION("S(z) S(-z) = I") {
        Cplx z(0.4, 0.25);
        Mat s1 = squeeze_m(60, z);
        Mat s2 = squeeze_m(60, -z);
        REQUIRE(max_abs(s1 * s2 - identity_m(60)) < 1e-9);
    }
}

TEST_CASE("truncation locality of polynomial operators", "[bosonic]") {
    // degree-3 polynomial built at two truncations agrees exactly on the
    // interior block (indices < dim - degree)
    const int dim = 20, big = 36, deg = 3;
    auto poly = [](int d) {
        Mat a = annihilation_m(d);
        Mat ad = a.adjoint();
        return Mat(ad * a * a + a * ad * ad + ad * a);
    };
    Mat small_p = poly(dim);
    Mat big_p = poly(big);
    Mat diff = small_p.topLeftCorner(dim - deg, dim - deg) -
               big_p.topLeftCorner(dim - deg, dim - deg);
    REQUIRE(max_abs(diff) == 0.0);
}

TEST_CASE("hermiticity bookkeeping", "[bosonic]") {
    Mat a = annihilation_m(6);
    OperatorMatrix n(single_mode(6), Mat(a.adjoint()) * a, true);
    REQUIRE(n.hermiticity_defect() == 0.0);
    REQUIRE_NOTHROW(n.require_hermitian());
    OperatorMatrix raw(single_mode(6), a);
    REQUIRE_THROWS_AS(raw.require_hermitian(), HermiticityError);
}

TEST_CASE("collective spin block", "[bosonic]") {
    const int na = 6;
    Mat jp = spin_jplus_m(na + 1);
    Mat jm = jp.adjoint();
    Mat jz = spin_jz_m(na + 1);
    REQUIRE(max_abs(jm * jp - jp * jm + 2.0 * jz) < 1e-12);
}
