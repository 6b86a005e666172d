#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "landscape/dense_numerics.hpp"
#include "landscape/lattice_ops.hpp"
#include "landscape/operator_factory.hpp"
#include "landscape/parallel.hpp"
#include "landscape/types.hpp"

namespace landscape {

enum class LandscapeKind {
    Torsion,
    Resolvent,
    Parabolic,
    Envelope,
    BirmanSchwinger,
    AntiMaximum,
    Perron,
    Iterated,
};

inline const char* to_string(LandscapeKind k) {
    switch (k) {
        case LandscapeKind::Torsion: return "torsion";
        case LandscapeKind::Resolvent: return "resolvent";
        case LandscapeKind::Parabolic: return "parabolic";
        case LandscapeKind::Envelope: return "envelope";
        case LandscapeKind::BirmanSchwinger: return "birman_schwinger";
        case LandscapeKind::AntiMaximum: return "anti_maximum";
        case LandscapeKind::Perron: return "perron";
        case LandscapeKind::Iterated: return "iterated";
    }
    return "unknown";
}

/// A positive vector dominating eigenvector moduli, plus the parameters
/// that generated it. Values are never clamped; positivity_warning carries
/// the most negative entry seen instead.
struct LandscapeFunction {
    Vector values;
    LandscapeKind kind = LandscapeKind::Torsion;
    double mu = std::numeric_limits<double>::quiet_NaN();
    double t = std::numeric_limits<double>::quiet_NaN();
    double eps = std::numeric_limits<double>::quiet_NaN();
    double lambda = std::numeric_limits<double>::quiet_NaN();
    Index iterate = 0;
    std::string rho_id;
    bool positivity_warning = false;
    double min_entry = 0.0;
    double solver_residual = 0.0;

    void finalize() { min_entry = values.minCoeff(); }
};

/// Grid of resolvent shifts used by envelopes when the caller does not
/// supply one: just above the spectral bound, then decades 1e-1..1e5.
inline std::vector<double> default_mu_grid(const MatrixOperator& A) {
    std::vector<double> grid;
    grid.push_back(spectral_bound_neg(A) + 1e-5);
    for (int e = -1; e <= 5; ++e) grid.push_back(std::pow(10.0, e));
    return grid;
}

inline std::vector<double> default_t_grid() {
    std::vector<double> grid;
    for (int e = -5; e <= 2; ++e) grid.push_back(std::pow(10.0, e));
    return grid;
}

/// v = A^{-1} rho, the canonical landscape function. The warning flag is
/// raised when the inverse fails the positivity check.
inline LandscapeFunction torsion(const MatrixOperator& A, const WeightVector& rho) {
    LandscapeFunction f;
    f.kind = LandscapeKind::Torsion;
    f.rho_id = rho.id;
    f.values = solve_real(A, rho.values);
    f.positivity_warning = !inverse_positivity_check(A);
    f.finalize();
    return f;
}

/// |lambda + mu| (mu + A)^{-1} rho.
inline LandscapeFunction resolvent_landscape(const MatrixOperator& A, double mu, double lambda,
                                             const WeightVector& rho) {
    LandscapeFunction f;
    f.kind = LandscapeKind::Resolvent;
    f.mu = mu;
    f.lambda = lambda;
    f.rho_id = rho.id;
    f.values = std::abs(lambda + mu) * solve_real(A.shifted(mu), rho.values);
    f.finalize();
    return f;
}

/// Pointwise minimum of resolvent landscapes over a shift grid; every shift
/// must lie strictly above s(-A).
inline LandscapeFunction resolvent_envelope(const MatrixOperator& A, double lambda,
                                            const WeightVector& rho,
                                            const std::vector<double>& mu_grid) {
    if (mu_grid.empty()) throw std::invalid_argument("resolvent_envelope: empty shift grid");
    const double s = spectral_bound_neg(A);
    for (double mu : mu_grid)
        if (!(mu > s))
            throw std::invalid_argument("resolvent_envelope: shift " + std::to_string(mu) +
                                        " is not above the spectral bound");
    std::vector<Vector> curves(mu_grid.size());
    parallel_for_each(mu_grid.size(), [&](std::size_t i) {
        curves[i] = std::abs(lambda + mu_grid[i]) * solve_real(A.shifted(mu_grid[i]), rho.values);
    });
    LandscapeFunction f;
    f.kind = LandscapeKind::Envelope;
    f.lambda = lambda;
    f.rho_id = rho.id;
    f.values = curves.front();
    for (std::size_t i = 1; i < curves.size(); ++i) f.values = f.values.cwiseMin(curves[i]);
    f.finalize();
    return f;
}

namespace detail {

/// e^{t lambda} e^{-tA} rho evaluated spectrally with the shift folded into
/// the exponent; exponents are capped at 700 so very large t yields huge but
/// finite values instead of overflow.
inline Vector parabolic_values(const MatrixOperator& A, double t, double lambda,
                               const Vector& rho) {
    auto eig = eig_hermitian(A);
    ComplexVector coeff = eig->eigenvectors.adjoint() * rho.cast<std::complex<double>>();
    for (Index k = 0; k < coeff.size(); ++k) {
        const double expo = std::min(t * (lambda - eig->eigenvalues[k]), 700.0);
        coeff[k] *= std::exp(expo);
    }
    ComplexVector out = eig->eigenvectors * coeff;
    const double im = out.imag().cwiseAbs().maxCoeff();
    const double sc = std::max(1.0, out.real().cwiseAbs().maxCoeff());
    if (im > 1e-9 * sc)
        throw std::invalid_argument("parabolic landscape: complex-valued semigroup orbit");
    return out.real();
}

} // namespace detail

inline LandscapeFunction parabolic_landscape(const MatrixOperator& A, double t, double lambda,
                                             const WeightVector& rho) {
    if (t < 0.0) throw std::invalid_argument("parabolic_landscape: time must be nonnegative");
    if (!A.hermitian()) throw std::invalid_argument("parabolic_landscape: Hermitian input required");
    LandscapeFunction f;
    f.kind = LandscapeKind::Parabolic;
    f.t = t;
    f.lambda = lambda;
    f.rho_id = rho.id;
    f.values = detail::parabolic_values(A, t, lambda, rho.values);
    f.finalize();
    return f;
}

inline LandscapeFunction parabolic_envelope(const MatrixOperator& A, double lambda,
                                            const WeightVector& rho,
                                            const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("parabolic_envelope: empty time grid");
    if (!A.hermitian()) throw std::invalid_argument("parabolic_envelope: Hermitian input required");
    std::vector<Vector> curves(t_grid.size());
    parallel_for_each(t_grid.size(), [&](std::size_t i) {
        curves[i] = detail::parabolic_values(A, t_grid[i], lambda, rho.values);
    });
    LandscapeFunction f;
    f.kind = LandscapeKind::Envelope;
    f.lambda = lambda;
    f.rho_id = rho.id;
    f.values = curves.front();
    for (std::size_t i = 1; i < curves.size(); ++i) f.values = f.values.cwiseMin(curves[i]);
    f.finalize();
    return f;
}

/// (mu - Delta)^{-1} |lambda + mu - V| for nonpositive V: a landscape for
/// eigenpairs of -Delta + V built from the free resolvent.
inline LandscapeFunction birman_schwinger_landscape(const Grid1D& grid, const PotentialVector& V,
                                                    double lambda, double mu) {
    if (V.size() != grid.n_interior)
        throw std::invalid_argument("birman_schwinger_landscape: potential length mismatch");
    if (V.plus.maxCoeff() > 0.0)
        throw std::invalid_argument("birman_schwinger_landscape: potential must be nonpositive");
    MatrixOperator L = build_laplacian_1d(grid);
    const double lap_min = 4.0 / (grid.h * grid.h) * std::pow(std::sin(M_PI * grid.h / 2.0), 2);
    if (!(mu > -lap_min))
        throw std::invalid_argument("birman_schwinger_landscape: shift below the free spectral bound");
    Vector driving = (Vector::Constant(grid.n_interior, lambda + mu) - V.values()).cwiseAbs();
    LandscapeFunction f;
    f.kind = LandscapeKind::BirmanSchwinger;
    f.mu = mu;
    f.lambda = lambda;
    f.rho_id = "ones";
    f.values = solve_real(L.shifted(mu), driving);
    f.finalize();
    return f;
}

/// Grid search over the anti-maximum window just below the spectral bound:
/// keeps the largest eps whose negated resolvent of rho is strictly
/// positive, and returns the landscape scaled for the caller's lambda.
inline std::pair<double, LandscapeFunction> antimaximum_probe(const MatrixOperator& A,
                                                              const WeightVector& rho,
                                                              std::vector<double> eps_grid,
                                                              double lambda) {
    if (eps_grid.empty()) throw std::invalid_argument("antimaximum_probe: empty grid");
    if (!A.hermitian()) throw std::invalid_argument("antimaximum_probe: Hermitian input required");
    const double s = spectral_bound_neg(A); // s(-A) = -lambda_min
    std::sort(eps_grid.begin(), eps_grid.end());
    double eps_max = std::numeric_limits<double>::quiet_NaN();
    Vector best;
    for (double eps : eps_grid) {
        if (!(eps > 0.0)) continue;
        Vector cand = -solve_real(A.shifted(s - eps), rho.values);
        if (cand.minCoeff() > 0.0) {
            eps_max = eps;
            best = cand;
        }
    }
    if (!std::isfinite(eps_max))
        throw std::invalid_argument("antimaximum_probe: no grid value is admissible");
    LandscapeFunction f;
    f.kind = LandscapeKind::AntiMaximum;
    f.eps = eps_max;
    f.lambda = lambda;
    f.rho_id = rho.id;
    f.values = std::abs(s - eps_max + lambda) * best;
    f.finalize();
    return {eps_max, std::move(f)};
}

/// v_k = A^{-k} rho for k = 1..k_max. On sub-Markovian operators the
/// sequence decreases entrywise and the normalized tail approaches the
/// ground state.
struct IteratedLandscapes {
    std::vector<LandscapeFunction> sequence;
    bool monotone_nonincreasing = false;
};

inline IteratedLandscapes iterated_landscape(const MatrixOperator& A, const WeightVector& rho,
                                             Index k_max) {
    if (k_max < 1) throw std::invalid_argument("iterated_landscape: need k_max >= 1");
    IteratedLandscapes out;
    Vector v = rho.values;
    bool monotone = true;
    Vector prev;
    for (Index k = 1; k <= k_max; ++k) {
        v = solve_real(A, v);
        if (k > 1 && (prev - v).minCoeff() < -1e-12 * std::max(1.0, prev.maxCoeff()))
            monotone = false;
        prev = v;
        LandscapeFunction f;
        f.kind = LandscapeKind::Iterated;
        f.iterate = k;
        f.rho_id = rho.id;
        f.values = v;
        f.finalize();
        out.sequence.push_back(std::move(f));
    }
    out.monotone_nonincreasing = monotone && submarkov_check(A, rho);
    return out;
}

/// P* rho = phi* <phi*, rho> / ||phi*||^2, the balanced-growth limit of
/// e^{t lambda*} e^{-tA} rho.
inline LandscapeFunction perron_projection_landscape(const MatrixOperator& A,
                                                     const WeightVector& rho) {
    auto eig = eig_hermitian(A);
    if (eig->size() < 2 || eig->eigenvalues[1] - eig->eigenvalues[0] < 1e-10) {
        if (eig->size() >= 2)
            throw std::invalid_argument("perron_projection_landscape: degenerate ground eigenvalue");
    }
    ComplexVector phi = eig->eigenvectors.col(0);
    const std::complex<double> weight = phi.dot(rho.values.cast<std::complex<double>>());
    ComplexVector proj = phi * weight; // ||phi||_2 = 1
    LandscapeFunction f;
    f.kind = LandscapeKind::Perron;
    f.rho_id = rho.id;
    f.values = proj.real();
    f.finalize();
    return f;
}

/// Ratio e^{-tA} rho / A^{-1} rho, emitted for inspection only; no bound is
/// attached to it.
inline Vector parabolic_torsion_ratio(const MatrixOperator& A, double t, const WeightVector& rho) {
    Vector numer = expm_apply(A, t, rho.values);
    Vector denom = solve_real(A, rho.values);
    return numer.cwiseQuotient(denom);
}

} // namespace landscape
