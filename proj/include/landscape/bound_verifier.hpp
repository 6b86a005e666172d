#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "landscape/dense_numerics.hpp"
#include "landscape/landscape_engine.hpp"
#include "landscape/lattice_ops.hpp"
#include "landscape/operator_factory.hpp"
#include "landscape/types.hpp"

namespace landscape {

/// Default slack tolerance: absolute 1e-10 plus relative 1e-8 on the
/// eigenvector scale, absorbing solver residuals.
inline double default_bound_tol(double phi_scale) { return 1e-10 + 1e-8 * phi_scale; }

/// Per-index slack of a pointwise bound c*landscape - |phi|; certified iff
/// the minimum slack clears -tol.
struct BoundReport {
    Vector phi_abs;
    Vector bound;
    Vector slack;
    bool certified = false;
    Index worst_index = -1;
    double min_slack = 0.0;
    double tol = 0.0;
    double c_factor = 0.0;

    static BoundReport from(const Vector& phi_abs, const Vector& bound, double c, double tol) {
        if (phi_abs.size() != bound.size())
            throw std::invalid_argument("BoundReport: dimension mismatch");
        BoundReport r;
        r.phi_abs = phi_abs;
        r.bound = bound;
        r.slack = bound - phi_abs;
        r.min_slack = r.slack.minCoeff(&r.worst_index);
        r.certified = r.min_slack >= -tol;
        r.tol = tol;
        r.c_factor = c;
        return r;
    }
};

/// |phi| <= ||phi||_rho * landscape, checked entrywise. The landscape must
/// have been built with the pair's lambda and the same rho.
inline BoundReport verify_eigenvector_bound(const Eigenpair& pair,
                                            const LandscapeFunction& landscape,
                                            const WeightVector& rho,
                                            std::optional<double> tol = std::nullopt) {
    if (pair.phi.size() != landscape.values.size() || pair.phi.size() != rho.size())
        throw std::invalid_argument("verify_eigenvector_bound: dimension mismatch");
    const Vector phi_abs = pair.abs_phi();
    const double c = gauge_norm(phi_abs, rho);
    const double use_tol = tol.value_or(default_bound_tol(phi_abs.maxCoeff()));
    return BoundReport::from(phi_abs, Vector(c * landscape.values), c, use_tol);
}

/// Indices where an eigenvector for lambda may peak: {1/v <= |lambda|} for
/// elliptic landscapes, {-log(v)/t <= lambda} for parabolic ones.
inline std::vector<Index> localization_set(const LandscapeFunction& landscape, double lambda) {
    if (landscape.values.minCoeff() <= 0.0)
        throw std::invalid_argument("localization_set: landscape must be strictly positive");
    std::vector<Index> out;
    if (landscape.kind == LandscapeKind::Parabolic) {
        if (!(landscape.t > 0.0))
            throw std::invalid_argument("localization_set: parabolic landscape lacks a time");
        for (Index i = 0; i < landscape.values.size(); ++i)
            if (-std::log(landscape.values[i]) / landscape.t <= lambda) out.push_back(i);
    } else {
        for (Index i = 0; i < landscape.values.size(); ++i)
            if (1.0 / landscape.values[i] <= std::abs(lambda)) out.push_back(i);
    }
    return out;
}

/// Torsion floor A^{-1} rho >= rho / ||A rho||_rho for inverse-positive A.
inline BoundReport verify_torsion_floor(const MatrixOperator& A, const WeightVector& rho) {
    ComplexVector Arho_c = A.entries() * rho.values.cast<std::complex<double>>();
    Vector Arho = Arho_c.real();
    if (Arho_c.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("verify_torsion_floor: A rho vanishes");
    const double denom = gauge_norm(Arho_c, rho);
    Vector floor = rho.values / denom;
    Vector tors = solve_real(A, rho.values);
    const double tol = default_bound_tol(floor.maxCoeff());
    return BoundReport::from(floor, tors, 1.0 / denom, tol);
}

/// Strict Perron bound and the balanced-growth projection bound.
struct PerronReport {
    BoundReport torsion_bound;     // phi* < lambda* ||phi*||_rho A^{-1} rho, strictness via margin
    double strict_margin = 0.0;    // min slack of the strict bound
    BoundReport projection_bound;  // phi* <= ||phi*||_rho P* rho
    bool ground_state_sign_definite = true;
};

inline PerronReport verify_perron_bounds(const MatrixOperator& A, const WeightVector& rho) {
    Eigenpair ground = eigenpair(A, 0);
    const Vector phi = ground.phi.real();
    const Vector phi_abs = ground.abs_phi();
    PerronReport rep;
    rep.ground_state_sign_definite = phi.minCoeff() >= 0.0 || phi.maxCoeff() <= 0.0;

    const double c = gauge_norm(phi_abs, rho);
    Vector tors = solve_real(A, rho.values);
    Vector strict_bound = std::abs(ground.lambda) * c * tors;
    const double tol = default_bound_tol(phi_abs.maxCoeff());
    rep.torsion_bound = BoundReport::from(phi_abs, strict_bound, std::abs(ground.lambda) * c, tol);
    rep.strict_margin = rep.torsion_bound.min_slack;

    LandscapeFunction proj = perron_projection_landscape(A, rho);
    rep.projection_bound = BoundReport::from(phi_abs, Vector(c * proj.values), c, tol);
    return rep;
}

struct SemigroupDominationReport {
    bool dominated = true;
    double worst_violation = -1e300; // raw entrywise max of |S| - T
    double worst_relative = -1e300;  // same, divided by ||T||_inf at that t
    double worst_t = 0.0;
    Index worst_row = -1;
    Index worst_col = -1;
};

/// |e^{-tA}| <= e^{-tB} entrywise over the whole time grid. The tolerance
/// is the given absolute slack plus 1e-9 relative to the dominating
/// exponential, since entries grow like e^{t ||B||}.
inline SemigroupDominationReport verify_semigroup_domination(const MatrixOperator& A,
                                                             const MatrixOperator& B,
                                                             const std::vector<double>& t_grid,
                                                             double tol) {
    if (A.size() != B.size())
        throw std::invalid_argument("verify_semigroup_domination: shape mismatch");
    SemigroupDominationReport rep;
    for (double t : t_grid) {
        ComplexMatrix Ea = expm_dense(A, t);
        Matrix Eb = expm_dense(B, t).real();
        const double scale = Eb.cwiseAbs().rowwise().sum().maxCoeff();
        const double t_tol = tol + 1e-9 * scale;
        DominationReport d = is_entrywise_dominated(Ea, Eb, t_tol);
        if (d.worst_violation > rep.worst_violation) {
            rep.worst_violation = d.worst_violation;
            rep.worst_t = t;
            rep.worst_row = d.worst_row;
            rep.worst_col = d.worst_col;
        }
        rep.worst_relative =
            std::max(rep.worst_relative, d.worst_violation / std::max(scale, 1e-300));
        rep.dominated = rep.dominated && d.dominated;
    }
    return rep;
}

/// Both magnetic eigenvector bounds for the k-th eigenpair (1-based) of the
/// Dirichlet magnetic Laplacian plus potential. Bound 1 compares against
/// the nonmagnetic Laplacian minus the negative potential part; bound 2 is
/// the dual bound through the signless Laplacian at the top of the
/// spectrum. Shift grids are filtered to keep the comparison operator
/// invertible with positive inverse.
struct MagneticBoundReport {
    BoundReport bound1;
    BoundReport bound2;
    double lambda = 0.0;
    double lambda_max = 0.0;
};

inline MagneticBoundReport magnetic_eigen_bounds(const Graph& graph, const MagneticSignature& sig,
                                                 const PotentialVector& V, Index k,
                                                 std::vector<double> mu_grid = {}) {
    if (graph.dirichlet.empty())
        throw std::invalid_argument("magnetic_eigen_bounds: dirichlet set must be nonempty");
    MatrixOperator La = build_magnetic_laplacian(graph, sig);
    const Index m = La.size();
    if (V.size() != m)
        throw std::invalid_argument("magnetic_eigen_bounds: potential must live on free vertices");
    if (!La.hermitian())
        throw std::invalid_argument("magnetic_eigen_bounds: magnetic build is not Hermitian");

    ComplexMatrix H = La.entries();
    H.diagonal() += V.values().cast<std::complex<double>>();
    MatrixOperator Hop(std::move(H), true, "magnetic_schroedinger");

    auto eig = eig_hermitian(Hop);
    if (k < 1 || k > eig->size())
        throw std::out_of_range("magnetic_eigen_bounds: eigenindex out of range");
    const double lambda = eig->eigenvalues[k - 1];
    const double lambda_max = eig->eigenvalues[eig->size() - 1];
    const Vector phi_abs = eig->eigenvectors.col(k - 1).cwiseAbs();
    const double c = phi_abs.maxCoeff(); // rho = 1

    if (mu_grid.empty()) {
        mu_grid = {0.0, 1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3, 1e4, 1e5};
    }

    MatrixOperator L = build_graph_laplacian(graph);
    MatrixOperator Q = build_signless_laplacian(graph);

    Matrix B1 = L.entries().real();
    B1.diagonal() -= V.minus;
    MatrixOperator B1op(std::move(B1), true, "laplacian_minus_Vminus");

    Matrix B2 = -Q.entries().real();
    B2.diagonal().array() += lambda_max;
    B2.diagonal() -= V.plus;
    MatrixOperator B2op(std::move(B2), true, "dual_comparison");

    auto envelope = [&](const MatrixOperator& B, double shift_center) -> Vector {
        const double s = spectral_bound_neg(B);
        Vector env = Vector::Constant(m, std::numeric_limits<double>::infinity());
        bool any = false;
        for (double mu : mu_grid) {
            if (!(mu >= 0.0) || !(mu > s + 1e-12)) continue;
            Vector w = solve_real(B.shifted(mu), Vector::Ones(m));
            env = env.cwiseMin(std::abs(shift_center + mu) * w);
            any = true;
        }
        if (!any)
            throw std::invalid_argument("magnetic_eigen_bounds: no admissible shift in grid");
        return env;
    };

    const double tol = default_bound_tol(c);
    MagneticBoundReport rep;
    rep.lambda = lambda;
    rep.lambda_max = lambda_max;
    rep.bound1 = BoundReport::from(phi_abs, Vector(c * envelope(B1op, lambda)), c, tol);
    rep.bound2 = BoundReport::from(phi_abs, Vector(c * envelope(B2op, lambda_max - lambda)), c, tol);
    return rep;
}

} // namespace landscape
