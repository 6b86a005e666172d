#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "landscape/dense_numerics.hpp"
#include "landscape/landscape_engine.hpp"
#include "landscape/lattice_ops.hpp"
#include "landscape/types.hpp"

namespace landscape {

/// A certified lower bound on the principal eigenvalue together with the
/// parameters that produced it.
struct LowerBoundResult {
    double value = -std::numeric_limits<double>::infinity();
    std::string method;
    double mu_star = std::numeric_limits<double>::quiet_NaN();
    double t_star = std::numeric_limits<double>::quiet_NaN();
    std::string rho_id;
    std::optional<double> certified_target;
    bool positivity_warning = false;
};

/// lambda* >= 1 / ||A^{-1} rho||_rho.
inline LowerBoundResult dv_lower_bound(const MatrixOperator& A, const WeightVector& rho) {
    LandscapeFunction tors = torsion(A, rho);
    LowerBoundResult r;
    r.method = "donsker_varadhan";
    r.rho_id = rho.id;
    r.value = 1.0 / gauge_norm(tors.values, rho);
    r.positivity_warning = tors.positivity_warning;
    return r;
}

/// max over (rho, mu >= 0, mu > s(-A)) of 1/||(mu+A)^{-1} rho||_rho - mu.
inline LowerBoundResult resolvent_optimized_lower_bound(const MatrixOperator& A,
                                                        const std::vector<WeightVector>& rho_set,
                                                        const std::vector<double>& mu_grid) {
    if (rho_set.empty()) throw std::invalid_argument("resolvent_optimized_lower_bound: no weights");
    const double s = spectral_bound_neg(A);
    LowerBoundResult best;
    best.method = "resolvent_optimized";
    bool any = false;
    for (const auto& rho : rho_set) {
        for (double mu : mu_grid) {
            if (!(mu >= 0.0) || !(mu > s)) continue;
            Vector w = solve_real(A.shifted(mu), rho.values);
            const double candidate = 1.0 / gauge_norm(w, rho) - mu;
            if (!any || candidate > best.value) {
                best.value = candidate;
                best.mu_star = mu;
                best.rho_id = rho.id;
            }
            any = true;
        }
    }
    if (!any)
        throw std::invalid_argument("resolvent_optimized_lower_bound: no admissible shift");
    return best;
}

/// max over the time grid of -log ||e^{-tA} rho||_rho / t. The warning is
/// raised when A is not (up to sign pattern) its own modulus generator,
/// i.e. when the semigroup is not known to be positive.
inline LowerBoundResult parabolic_lower_bound(const MatrixOperator& A, const WeightVector& rho,
                                              const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("parabolic_lower_bound: empty grid");
    if (!A.hermitian()) throw std::invalid_argument("parabolic_lower_bound: Hermitian input required");
    MatrixOperator M = modulus_generator(A);
    const double scale = std::max(A.max_abs(), 1.0);
    const bool positive_semigroup =
        (A.entries() - M.entries()).cwiseAbs().maxCoeff() <= 1e-12 * scale;

    LowerBoundResult best;
    best.method = "parabolic";
    best.rho_id = rho.id;
    best.positivity_warning = !positive_semigroup;
    bool any = false;
    for (double t : t_grid) {
        if (!(t > 0.0)) continue;
        Vector v = expm_apply(A, t, rho.values);
        const double g = gauge_norm(v, rho);
        if (!(g > 0.0)) continue; // semigroup orbit underflowed at this t
        const double candidate = -std::log(g) / t;
        if (!any || candidate > best.value) {
            best.value = candidate;
            best.t_star = t;
        }
        any = true;
    }
    if (!any) throw std::invalid_argument("parabolic_lower_bound: no positive time in grid");
    return best;
}

enum class KernelMode { Resolvent, Parabolic };
enum class HoelderSelector { InfOne, Two, OneInf };

/// Materialized kernel of (mu+A)^{-1} on a 1D grid: entries q(x_i, x_j)
/// with the quadrature weight h divided out.
inline Matrix resolvent_kernel(const MatrixOperator& A, double mu) {
    if (!A.grid()) throw std::invalid_argument("resolvent_kernel: operator carries no grid");
    auto inv = inverse(A.shifted(mu));
    return inv->real() / A.grid()->h;
}

/// Heat kernel p_t(x_i, x_j) of the same operator, h divided out.
inline Matrix heat_kernel_dense(const MatrixOperator& A, double t) {
    if (!A.grid()) throw std::invalid_argument("heat_kernel_dense: operator carries no grid");
    return expm_dense(A, t).real() / A.grid()->h;
}

/// Hoelder-pair eigenvalue bounds from an integral kernel: the r = inf/1
/// and 1/inf rows use weighted absolute row or column masses, r = 2 the
/// L2 double integral. Resolvent mode returns 1/S - mu, parabolic mode
/// -log(S)/t.
inline LowerBoundResult kernel_hoelder_bounds(const Matrix& K, const Vector& weights,
                                              KernelMode mode, double mu_or_t,
                                              HoelderSelector r) {
    if (K.rows() != K.cols() || weights.size() != K.rows())
        throw std::invalid_argument("kernel_hoelder_bounds: inconsistent weights");
    if (weights.minCoeff() <= 0.0)
        throw std::invalid_argument("kernel_hoelder_bounds: weights must be positive");
    double S = 0.0;
    switch (r) {
        case HoelderSelector::InfOne:
            S = (K.cwiseAbs() * weights).maxCoeff();
            break;
        case HoelderSelector::OneInf:
            S = (K.cwiseAbs().transpose() * weights).maxCoeff();
            break;
        case HoelderSelector::Two: {
            Matrix W = weights * weights.transpose();
            S = std::sqrt((K.array().square() * W.array()).sum());
            break;
        }
    }
    LowerBoundResult out;
    out.rho_id = "ones";
    if (mode == KernelMode::Resolvent) {
        out.method = "kernel_resolvent";
        out.mu_star = mu_or_t;
        out.value = 1.0 / S - mu_or_t;
    } else {
        if (!(mu_or_t > 0.0))
            throw std::invalid_argument("kernel_hoelder_bounds: parabolic mode needs t > 0");
        out.method = "kernel_parabolic";
        out.t_star = mu_or_t;
        out.value = -std::log(S) / mu_or_t;
    }
    return out;
}

/// lambda_min >= ||torsion||_rho^{1-p} for (p-1)-homogeneous operators
/// with order preserving inverse.
inline LowerBoundResult nonlinear_lower_bound(double p, const Vector& torsion_values,
                                              const WeightVector& rho) {
    if (!(p > 1.0)) throw std::invalid_argument("nonlinear_lower_bound: need p > 1");
    LowerBoundResult r;
    r.method = "nonlinear_torsion";
    r.rho_id = rho.id;
    r.value = std::pow(gauge_norm(torsion_values, rho), 1.0 - p);
    return r;
}

/// Closed forms for the Dirichlet p-Laplacian on the unit interval.
struct ContinuumPOracles {
    double pi_p = 0.0;              // 2 pi / (p sin(pi/p))
    double lambda_min = 0.0;        // (p-1) pi_p^p
    double closed_form_bound = 0.0; // 2^p (p/(p-1))^{p-1}
    double torsion_max = 0.0;       // (p-1)/p * (1/2)^{p/(p-1)}
};

inline ContinuumPOracles continuum_p_oracles(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("continuum_p_oracles: need p > 1");
    ContinuumPOracles o;
    o.pi_p = 2.0 * M_PI / (p * std::sin(M_PI / p));
    o.lambda_min = (p - 1.0) * std::pow(o.pi_p, p);
    o.closed_form_bound = std::pow(2.0, p) * std::pow(p / (p - 1.0), p - 1.0);
    o.torsion_max = (p - 1.0) / p * std::pow(0.5, p / (p - 1.0));
    return o;
}

/// Limit of the nonlinear lower bound as p -> 1+, estimating the Cheeger
/// constant. The bound behaves like L + a e ln(1/e) + b e in e = p-1, so
/// the last three samples determine an extrapolated limit.
struct CheegerEstimate {
    double extrapolated = 0.0;
    double last_value = 0.0;
};

inline CheegerEstimate cheeger_limit_estimate(const std::vector<double>& p_sequence,
                                              const std::vector<double>& bounds) {
    if (p_sequence.size() != bounds.size() || p_sequence.size() < 3)
        throw std::invalid_argument("cheeger_limit_estimate: need at least three samples");
    for (std::size_t i = 0; i + 1 < p_sequence.size(); ++i)
        if (!(p_sequence[i] > p_sequence[i + 1]) || !(p_sequence[i + 1] > 1.0))
            throw std::invalid_argument("cheeger_limit_estimate: sequence must decrease toward 1");
    const std::size_t n = p_sequence.size();
    Eigen::Matrix3d M;
    Eigen::Vector3d y;
    for (int row = 0; row < 3; ++row) {
        const double e = p_sequence[n - 3 + static_cast<std::size_t>(row)] - 1.0;
        M(row, 0) = 1.0;
        M(row, 1) = e * std::log(1.0 / e);
        M(row, 2) = e;
        y[row] = bounds[n - 3 + static_cast<std::size_t>(row)];
    }
    Eigen::Vector3d coef = M.fullPivLu().solve(y);
    CheegerEstimate est;
    est.extrapolated = coef[0];
    est.last_value = bounds.back();
    return est;
}

} // namespace landscape
