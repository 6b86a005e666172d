#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "landscape/dense_numerics.hpp"
#include "landscape/operator_factory.hpp"

using namespace landscape;

TEST_CASE("solve: identity returns the right-hand side") {
    MatrixOperator I(Matrix(Matrix::Identity(4, 4)), true, "identity");
    Vector b(4);
    b << 1.0, -2.0, 0.5, 3.0;
    CHECK((solve_real(I, b) - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solve: n=3 Laplacian torsion values") {
    MatrixOperator A = build_laplacian_1d(Grid1D(3));
    Vector x = solve_real(A, Vector::Ones(3));
    CHECK(x[0] == Catch::Approx(0.09375).epsilon(1e-13));
    CHECK(x[1] == Catch::Approx(0.125).epsilon(1e-13));
    CHECK(x[2] == Catch::Approx(0.09375).epsilon(1e-13));
}

TEST_CASE("solve: singular matrix reports the failing pivot") {
    Matrix M(2, 2);
    M << 1.0, 1.0, 1.0, 1.0;
    MatrixOperator A(M, true, "rank1");
    try {
        solve_real(A, Vector::Ones(2));
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.pivot_index == 1);
    }
}

TEST_CASE("solve residual contract on random well-conditioned systems") {
    std::mt19937 rng(2024);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 25; ++trial) {
        const Index n = 2 + trial % 9;
        Matrix M(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) M(i, j) = dist(rng);
        M += 3.0 * static_cast<double>(n) * Matrix::Identity(n, n);
        MatrixOperator A(M, false, "random");
        Vector b(n);
        for (Index i = 0; i < n; ++i) b[i] = dist(rng);
        Vector x = solve_real(A, b);
        const double resid = (M * x - b).cwiseAbs().maxCoeff();
        CHECK(resid <= 1e-10 * (A.inf_norm() * x.cwiseAbs().maxCoeff() +
                                b.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("eig_hermitian: diagonal matrix") {
    Matrix D = Vector::LinSpaced(3, 1.0, 3.0).asDiagonal();
    MatrixOperator A(D, true, "diag");
    auto eig = eig_hermitian(A);
    CHECK(eig->eigenvalues[0] == Catch::Approx(1.0));
    CHECK(eig->eigenvalues[1] == Catch::Approx(2.0));
    CHECK(eig->eigenvalues[2] == Catch::Approx(3.0));
    // standard basis up to sign, made positive by the phase convention
    for (Index k = 0; k < 3; ++k) {
        CHECK(eig->eigenvectors(k, k).real() == Catch::Approx(1.0));
    }
}

TEST_CASE("eig_hermitian: closed-form tridiagonal eigenpairs at n=199") {
    const Index n = 199;
    Grid1D g(n);
    MatrixOperator A = build_laplacian_1d(g);
    auto eig = eig_hermitian(A);
    CHECK(eig->residual <= 1e-10 * A.inf_norm());
    ComplexMatrix gram = eig->eigenvectors.adjoint() * eig->eigenvectors;
    CHECK((gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int k = 1; k <= 5; ++k) {
        const double expected = 4.0 / (g.h * g.h) * std::pow(std::sin(k * M_PI * g.h / 2.0), 2);
        CHECK(eig->eigenvalues[k - 1] == Catch::Approx(expected).epsilon(1e-10));
        // eigenvector proportional to sin(k pi x_j)
        Vector phi = eig->eigenvectors.col(k - 1).real();
        Vector ref(n);
        for (Index j = 0; j < n; ++j) ref[j] = std::sin(k * M_PI * (j + 1) * g.h);
        ref /= ref.norm();
        const double align = std::abs(phi.dot(ref));
        CHECK(align == Catch::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("eig_hermitian: complex Hermitian spectrum is real and certified") {
    Graph tri;
    tri.vertices = {"a", "b", "c"};
    tri.edge_weight = Matrix::Zero(3, 3);
    for (Index v = 0; v < 3; ++v)
        for (Index w = 0; w < 3; ++w)
            if (v != w) tri.edge_weight(v, w) = 1.0;
    tri.vertex_weight = Vector::Ones(3);
    MagneticSignature sig = MagneticSignature::zero(3);
    sig.alpha(0, 1) = M_PI / 2.0;
    sig.alpha(1, 0) = -M_PI / 2.0;
    MatrixOperator L = build_magnetic_laplacian(tri, sig);
    REQUIRE(!L.is_real());
    auto eig = eig_hermitian(L);
    CHECK(eig->residual <= 1e-10 * L.inf_norm());
    // reconstruction: V diag(lambda) V* = A
    ComplexMatrix rec = eig->eigenvectors *
                        eig->eigenvalues.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                        eig->eigenvectors.adjoint();
    CHECK((rec - L.entries()).cwiseAbs().maxCoeff() <= 1e-9 * L.inf_norm());
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
    Matrix M(2, 2);
    M << 0.0, 1.0, 0.0, 0.0;
    MatrixOperator A(M, false, "nilpotent");
    CHECK_THROWS_AS(eig_hermitian(A), std::invalid_argument);
}

TEST_CASE("expm_apply basics") {
    Vector d(3);
    d << 0.5, 1.0, 2.0;
    MatrixOperator A(Matrix(d.asDiagonal()), true, "diag");
    Vector v(3);
    v << 1.0, 2.0, -1.0;
    SECTION("t = 0 is the identity") {
        CHECK((expm_apply(A, 0.0, v) - v).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("diagonal exponential") {
        Vector out = expm_apply(A, 0.7, v);
        for (Index i = 0; i < 3; ++i)
            CHECK(out[i] == Catch::Approx(std::exp(-0.7 * d[i]) * v[i]).epsilon(1e-12));
    }
    SECTION("negative times are rejected") {
        CHECK_THROWS_AS(expm_apply(A, -1.0, v), std::invalid_argument);
    }
}

TEST_CASE("expm_apply: semigroup law and linearity") {
    MatrixOperator A = build_laplacian_1d(Grid1D(17));
    std::mt19937 rng(5);
    std::normal_distribution<double> dist;
    Vector v(17), w(17);
    for (Index i = 0; i < 17; ++i) {
        v[i] = dist(rng);
        w[i] = dist(rng);
    }
    SECTION("exp(-tA) exp(-sA) v = exp(-(t+s)A) v") {
        Vector lhs = expm_apply(A, 0.003, expm_apply(A, 0.001, v));
        Vector rhs = expm_apply(A, 0.004, v);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <=
              1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
    SECTION("superposition") {
        Vector lhs = expm_apply(A, 0.002, Vector(2.0 * v - 3.0 * w));
        Vector rhs = 2.0 * expm_apply(A, 0.002, v) - 3.0 * expm_apply(A, 0.002, w);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * rhs.cwiseAbs().maxCoeff() + 1e-12);
    }
}

TEST_CASE("inverse: matches solve on all unit vectors") {
    MatrixOperator A = build_laplacian_1d(Grid1D(7));
    auto inv = inverse(A);
    for (Index j = 0; j < 7; ++j) {
        Vector e = Vector::Zero(7);
        e[j] = 1.0;
        Vector col = solve_real(A, e);
        CHECK((inv->col(j).real() - col).cwiseAbs().maxCoeff() < 1e-12);
    }
}
