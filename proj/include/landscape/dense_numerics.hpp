#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "landscape/types.hpp"

namespace landscape {

class SingularMatrixError : public std::runtime_error {
  public:
    SingularMatrixError(Index pivot, double value)
        : std::runtime_error(make_message(pivot, value)), pivot_index(pivot), pivot_value(value) {}

    Index pivot_index;
    double pivot_value;

  private:
    static std::string make_message(Index pivot, double value) {
        std::ostringstream os;
        os << "matrix is singular to working tolerance (pivot " << pivot << " has magnitude "
           << value << ")";
        return os.str();
    }
};

namespace detail {

inline void check_pivots(const ComplexMatrix& lu, double scale) {
    const double tol = 1e-13 * std::max(scale, 1e-300);
    for (Index i = 0; i < lu.rows(); ++i) {
        const double piv = std::abs(lu(i, i));
        if (piv <= tol) throw SingularMatrixError(i, piv);
    }
}

inline void check_pivots(const Matrix& lu, double scale) {
    const double tol = 1e-13 * std::max(scale, 1e-300);
    for (Index i = 0; i < lu.rows(); ++i) {
        const double piv = std::abs(lu(i, i));
        if (piv <= tol) throw SingularMatrixError(i, piv);
    }
}

/// Deterministic eigenvector phases: rotate each column so its largest
/// entry is real and positive.
inline void canonicalize_columns(ComplexMatrix& vecs) {
    for (Index k = 0; k < vecs.cols(); ++k) {
        Index imax = 0;
        vecs.col(k).cwiseAbs().maxCoeff(&imax);
        const std::complex<double> z = vecs(imax, k);
        const double az = std::abs(z);
        if (az > 0.0) vecs.col(k) *= std::conj(z) / az;
    }
}

} // namespace detail

/// LU solve with partial pivoting; throws SingularMatrixError with the
/// offending pivot index when the factorization degenerates.
inline ComplexVector solve(const MatrixOperator& A, const ComplexVector& b) {
    if (b.size() != A.size()) throw std::invalid_argument("solve: right-hand side has wrong length");
    if (A.is_real() && b.imag().cwiseAbs().maxCoeff() == 0.0) {
        Matrix re = A.entries().real();
        Eigen::PartialPivLU<Matrix> lu(re);
        detail::check_pivots(lu.matrixLU(), A.max_abs());
        Vector x = lu.solve(Vector(b.real()));
        return x.cast<std::complex<double>>();
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(A.entries());
    detail::check_pivots(lu.matrixLU(), A.max_abs());
    return lu.solve(b);
}

inline ComplexVector solve(const MatrixOperator& A, const Vector& b) {
    return solve(A, ComplexVector(b.cast<std::complex<double>>()));
}

/// Solve with an essentially real result; throws when a complex operator
/// produces a genuinely complex solution.
inline Vector solve_real(const MatrixOperator& A, const Vector& b) {
    ComplexVector x = solve(A, b);
    const double im = x.imag().cwiseAbs().maxCoeff();
    const double sc = std::max(1.0, x.real().cwiseAbs().maxCoeff());
    if (im > 1e-10 * sc)
        throw std::invalid_argument("solve_real: solution has a non-negligible imaginary part");
    return x.real();
}

/// Full Hermitian eigendecomposition, cached on the operator. Eigenvalues
/// ascending, orthonormal eigenvector columns with deterministic phases.
inline std::shared_ptr<const EigenDecomposition> eig_hermitian(const MatrixOperator& A) {
    if (!A.hermitian() || !A.hermitian_check_passes())
        throw std::invalid_argument("eig_hermitian: operator is not Hermitian");
    auto& cache = A.cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    if (cache.eig) return cache.eig;

    auto out = std::make_shared<EigenDecomposition>();
    if (A.is_real()) {
        Matrix re = A.entries().real();
        Matrix sym = 0.5 * (re + re.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
        if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
        out->eigenvalues = es.eigenvalues();
        out->eigenvectors = es.eigenvectors().cast<std::complex<double>>();
    } else {
        ComplexMatrix herm = 0.5 * (A.entries() + A.entries().adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
        if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
        out->eigenvalues = es.eigenvalues();
        out->eigenvectors = es.eigenvectors();
    }
    detail::canonicalize_columns(out->eigenvectors);

    ComplexMatrix resid = A.entries() * out->eigenvectors -
                          out->eigenvectors * out->eigenvalues.asDiagonal().toDenseMatrix()
                                                  .cast<std::complex<double>>();
    out->residual = resid.cwiseAbs().maxCoeff();

    cache.eig = out;
    return cache.eig;
}

inline Eigenpair eigenpair(const MatrixOperator& A, Index k) {
    auto eig = eig_hermitian(A);
    if (k < 0 || k >= eig->size()) throw std::out_of_range("eigenpair: index out of range");
    Eigenpair pair;
    pair.lambda = eig->eigenvalues[k];
    pair.phi = eig->eigenvectors.col(k);
    pair.residual = eig->residual;
    return pair;
}

/// exp(-tA) v through the spectral decomposition; Hermitian operators only.
inline ComplexVector expm_apply(const MatrixOperator& A, double t, const ComplexVector& v) {
    if (t < 0.0) throw std::invalid_argument("expm_apply: time must be nonnegative");
    if (v.size() != A.size()) throw std::invalid_argument("expm_apply: vector has wrong length");
    auto eig = eig_hermitian(A);
    ComplexVector coeff = eig->eigenvectors.adjoint() * v;
    for (Index k = 0; k < coeff.size(); ++k)
        coeff[k] *= std::exp(-t * eig->eigenvalues[k]);
    return eig->eigenvectors * coeff;
}

inline Vector expm_apply(const MatrixOperator& A, double t, const Vector& v) {
    ComplexVector x = expm_apply(A, t, ComplexVector(v.cast<std::complex<double>>()));
    return x.real();
}

/// Dense exp(-tA) for entrywise comparisons.
inline ComplexMatrix expm_dense(const MatrixOperator& A, double t) {
    if (t < 0.0) throw std::invalid_argument("expm_dense: time must be nonnegative");
    auto eig = eig_hermitian(A);
    ComplexMatrix scaled = eig->eigenvectors;
    for (Index k = 0; k < eig->size(); ++k)
        scaled.col(k) *= std::exp(-t * eig->eigenvalues[k]);
    return scaled * eig->eigenvectors.adjoint();
}

/// Cached full inverse, materialized column-by-column through the LU
/// factorization.
inline std::shared_ptr<const ComplexMatrix> inverse(const MatrixOperator& A) {
    auto& cache = A.cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    if (cache.inverse) return cache.inverse;
    const Index n = A.size();
    auto inv = std::make_shared<ComplexMatrix>(n, n);
    if (A.is_real()) {
        Matrix re = A.entries().real();
        Eigen::PartialPivLU<Matrix> lu(re);
        detail::check_pivots(lu.matrixLU(), A.max_abs());
        *inv = lu.solve(Matrix::Identity(n, n)).cast<std::complex<double>>();
    } else {
        Eigen::PartialPivLU<ComplexMatrix> lu(A.entries());
        detail::check_pivots(lu.matrixLU(), A.max_abs());
        *inv = lu.solve(ComplexMatrix::Identity(n, n));
    }
    cache.inverse = inv;
    return cache.inverse;
}

} // namespace landscape
