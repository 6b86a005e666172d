#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "landscape/dense_numerics.hpp"
#include "landscape/landscape_engine.hpp"
#include "landscape/types.hpp"

namespace landscape {

/// Truncated heat kernel sample k_t(x_i, x_j) on the grid.
struct HeatKernelMatrix {
    double t = 0.0;
    Matrix values;
    int terms_used = 0;
};

/// Rescale eigenvectors so the quadrature rule h * sum phi^2 = 1 holds,
/// making kernel values comparable to continuum plots.
inline EigenDecomposition continuum_normalize(const EigenDecomposition& eigs, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("continuum_normalize: need h > 0");
    EigenDecomposition out = eigs;
    out.eigenvectors /= std::sqrt(h);
    return out;
}

/// k_t = sum_{k<=terms} e^{-t lambda_k} phi_k phi_k^T for continuum
/// normalized eigenvectors.
inline HeatKernelMatrix mercer_kernel(const EigenDecomposition& eigs, double t, int terms = 150) {
    if (!(t > 0.0)) throw std::invalid_argument("mercer_kernel: need t > 0");
    const Index n = eigs.size();
    if (terms < 1 || terms > n) throw std::invalid_argument("mercer_kernel: bad truncation count");
    Matrix phis = eigs.eigenvectors.leftCols(terms).real();
    Vector decay(terms);
    for (int k = 0; k < terms; ++k) decay[k] = std::exp(-t * eigs.eigenvalues[k]);
    HeatKernelMatrix out;
    out.t = t;
    out.terms_used = terms;
    out.values = phis * decay.asDiagonal() * phis.transpose();
    return out;
}

/// Landscape upper bound on the heat kernel: each eigenvector modulus is
/// replaced by ||phi_k||_inf times the best of the resolvent envelope and
/// the scaled torsion landscape. Terms are assembled at the same
/// truncation, so the bound dominates the Mercer sum term by term. Throws
/// when the term tail fails to settle (the series proviso).
inline HeatKernelMatrix heat_kernel_bound(const EigenDecomposition& eigs,
                                          const LandscapeFunction& torsion_landscape, double t,
                                          int terms, double h) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_bound: need t > 0");
    const Index n = eigs.size();
    if (terms < 1 || terms > n)
        throw std::invalid_argument("heat_kernel_bound: bad truncation count");
    if (torsion_landscape.values.size() != n)
        throw std::invalid_argument("heat_kernel_bound: torsion landscape has wrong length");

    const double lambda1 = eigs.eigenvalues[0];
    const double s_neg = -lambda1; // s(-A)

    // Resolvent vectors (mu + A)^{-1} 1 synthesized from the spectrum; the
    // shifts do not depend on k, so they are computed once. Shifts at or
    // below s(-A) would break resolvent positivity and are dropped.
    std::vector<double> mu_grid;
    mu_grid.push_back(s_neg + 1e-5);
    for (int e = -1; e <= 5; ++e) {
        const double mu = std::pow(10.0, e);
        if (mu > s_neg) mu_grid.push_back(mu);
    }
    Vector ones_coeff = (eigs.eigenvectors.adjoint() * ComplexVector::Ones(n)).real() * h;
    std::vector<Vector> resolvents;
    for (double mu : mu_grid) {
        Vector coeff(n);
        for (Index k = 0; k < n; ++k) coeff[k] = ones_coeff[k] / (mu + eigs.eigenvalues[k]);
        resolvents.push_back((eigs.eigenvectors.real() * coeff).eval());
    }

    HeatKernelMatrix out;
    out.t = t;
    out.terms_used = terms;
    out.values = Matrix::Zero(n, n);
    std::vector<double> term_mags(static_cast<std::size_t>(terms), 0.0);
    for (int k = 0; k < terms; ++k) {
        const double lam = eigs.eigenvalues[k];
        const double sup_phi = eigs.eigenvectors.col(k).cwiseAbs().maxCoeff();
        Vector env = std::abs(lam) * torsion_landscape.values;
        for (std::size_t i = 0; i < mu_grid.size(); ++i)
            env = env.cwiseMin(std::abs(lam + mu_grid[i]) * resolvents[i]);
        const double weight = std::exp(-t * lam) * sup_phi * sup_phi;
        out.values.noalias() += weight * (env * env.transpose());
        term_mags[static_cast<std::size_t>(k)] = weight * env.maxCoeff() * env.maxCoeff();
    }
    // Series proviso: the truncation must not cut the terms while they are
    // still growing. The last term being the largest of the back half with
    // non-negligible weight signals divergence.
    if (terms >= 4) {
        const double last = term_mags.back();
        double back_half_max = 0.0;
        double overall_max = 0.0;
        for (std::size_t k = 0; k < term_mags.size(); ++k) {
            overall_max = std::max(overall_max, term_mags[k]);
            if (k >= term_mags.size() / 2 && k + 1 < term_mags.size())
                back_half_max = std::max(back_half_max, term_mags[k]);
        }
        if (last > back_half_max && last > 1e-8 * overall_max)
            throw std::runtime_error(
                "heat_kernel_bound: series tail diverges at this truncation");
    }
    return out;
}

/// Entrywise comparison of a kernel and its upper bound. loose marks times
/// where the truncated series has not settled (the bound cannot track the
/// kernel's short-time concentration) or where the peak overshoot is
/// large.
struct HeatBoundReport {
    double min_slack = 0.0;
    double max_ratio = 0.0;  // over entries with kernel > tol
    double peak_ratio = 0.0; // at the kernel's diagonal maximum
    double tail_weight = 0.0;
    bool loose = false;
};

inline HeatBoundReport heat_bound_report(const HeatKernelMatrix& kernel,
                                         const HeatKernelMatrix& bound, double tol,
                                         const EigenDecomposition* eigs = nullptr) {
    if (kernel.values.rows() != bound.values.rows() || kernel.values.cols() != bound.values.cols())
        throw std::invalid_argument("heat_bound_report: shape mismatch");
    if (kernel.t != bound.t)
        throw std::invalid_argument("heat_bound_report: kernels sampled at different times");
    HeatBoundReport rep;
    rep.min_slack = (bound.values - kernel.values).minCoeff();
    double ratio = 0.0;
    for (Index i = 0; i < kernel.values.rows(); ++i)
        for (Index j = 0; j < kernel.values.cols(); ++j)
            if (kernel.values(i, j) > tol)
                ratio = std::max(ratio, bound.values(i, j) / kernel.values(i, j));
    rep.max_ratio = ratio;
    Index peak = 0;
    kernel.values.diagonal().maxCoeff(&peak);
    rep.peak_ratio = bound.values(peak, peak) / kernel.values(peak, peak);
    if (eigs != nullptr && kernel.terms_used >= 1 && kernel.terms_used <= eigs->size()) {
        const double lam1 = eigs->eigenvalues[0];
        const double lamK = eigs->eigenvalues[kernel.terms_used - 1];
        rep.tail_weight = std::exp(-kernel.t * (lamK - lam1));
    }
    rep.loose = rep.tail_weight > 1e-8 || rep.peak_ratio > 10.0;
    return rep;
}

} // namespace landscape
