#pragma once

#include <cmath>
#include <stdexcept>

#include "landscape/dense_numerics.hpp"
#include "landscape/types.hpp"

namespace landscape {

/// ||f||_rho = max_i |f_i| / rho_i, the smallest c with |f| <= c*rho.
inline double gauge_norm(const Vector& f, const WeightVector& rho) {
    if (f.size() != rho.size()) throw std::invalid_argument("gauge_norm: length mismatch");
    if (rho.values.minCoeff() <= 0.0)
        throw std::invalid_argument("gauge_norm: weight must be strictly positive");
    return (f.cwiseAbs().cwiseQuotient(rho.values)).maxCoeff();
}

inline double gauge_norm(const ComplexVector& f, const WeightVector& rho) {
    return gauge_norm(Vector(f.cwiseAbs()), rho);
}

struct DominationReport {
    bool dominated = false;
    Index worst_row = -1;
    Index worst_col = -1;
    double worst_violation = 0.0; // max over entries of |S_ij| - T_ij
};

/// |S_ij| <= T_ij + tol entrywise, with the worst entry reported.
inline DominationReport is_entrywise_dominated(const ComplexMatrix& S, const Matrix& T,
                                               double tol) {
    if (S.rows() != T.rows() || S.cols() != T.cols())
        throw std::invalid_argument("is_entrywise_dominated: shape mismatch");
    DominationReport rep;
    Matrix gap = S.cwiseAbs() - T;
    rep.worst_violation = gap.maxCoeff(&rep.worst_row, &rep.worst_col);
    rep.dominated = rep.worst_violation <= tol;
    return rep;
}

inline DominationReport is_entrywise_dominated(const Matrix& S, const Matrix& T, double tol) {
    return is_entrywise_dominated(ComplexMatrix(S.cast<std::complex<double>>()), T, tol);
}

/// Generator of the smallest positive semigroup dominating (e^{-tA}):
/// real diagonal, negated absolute values off the diagonal. Sends the
/// magnetic Laplacian L_alpha to L and -L_alpha to -Q.
inline MatrixOperator modulus_generator(const MatrixOperator& A) {
    const Index n = A.size();
    Matrix M(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            M(i, j) = (i == j) ? A.entries()(i, i).real() : -std::abs(A.entries()(i, j));
    const bool herm = M.isApprox(M.transpose());
    return MatrixOperator(std::move(M), herm, A.label() + "#");
}

/// True iff all entries of A^{-1} are >= -tol (weak maximum principle).
inline bool inverse_positivity_check(const MatrixOperator& A, double tol) {
    auto inv = inverse(A);
    const double min_real = inv->real().minCoeff();
    const double max_imag = inv->imag().cwiseAbs().maxCoeff();
    return min_real >= -tol && max_imag <= tol;
}

inline bool inverse_positivity_check(const MatrixOperator& A) {
    auto inv = inverse(A);
    const double scale = inv->cwiseAbs().maxCoeff();
    return inverse_positivity_check(A, 1e-12 * std::max(scale, 1.0));
}

/// A^{-1} rho <= rho entrywise (equality allowed).
inline bool submarkov_check(const MatrixOperator& A, const WeightVector& rho) {
    Vector v = solve_real(A, rho.values);
    const double slack = (rho.values - v).minCoeff();
    return slack >= -1e-12 * std::max(1.0, rho.values.maxCoeff());
}

/// s(-A) = -(smallest eigenvalue of A) for Hermitian A.
inline double spectral_bound_neg(const MatrixOperator& A) {
    auto eig = eig_hermitian(A);
    return -eig->eigenvalues[0];
}

} // namespace landscape
