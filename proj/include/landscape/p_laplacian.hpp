#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

#include "landscape/bound_verifier.hpp"
#include "landscape/dense_numerics.hpp"
#include "landscape/landscape_engine.hpp"
#include "landscape/operator_factory.hpp"
#include "landscape/types.hpp"

namespace landscape {

/// Discrete p-Laplacian problem on a 1D grid (interior unknowns, Dirichlet
/// endpoints) or a graph with a nonempty Dirichlet set. Vectors on graphs
/// span all vertices with zeros clamped on the Dirichlet set.
struct PLaplaceProblem {
    std::variant<Grid1D, Graph> carrier;
    double p = 2.0;

    static PLaplaceProblem on_grid(const Grid1D& grid, double p) {
        check_p(p);
        return PLaplaceProblem{grid, p};
    }

    static PLaplaceProblem on_graph(const Graph& graph, double p) {
        check_p(p);
        graph.validate();
        if (graph.dirichlet.empty())
            throw std::invalid_argument("PLaplaceProblem: graph needs a nonempty Dirichlet set");
        return PLaplaceProblem{graph, p};
    }

    bool is_grid() const { return std::holds_alternative<Grid1D>(carrier); }
    const Grid1D& grid() const { return std::get<Grid1D>(carrier); }
    const Graph& graph() const { return std::get<Graph>(carrier); }

    Index vector_length() const {
        return is_grid() ? grid().n_interior : graph().size();
    }

  private:
    static void check_p(double p) {
        if (!(p > 1.0)) throw std::invalid_argument("PLaplaceProblem: need p > 1");
    }
};

namespace plap_detail {

inline double psi(double s, double p) {
    return s == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

inline double psi_inv(double y, double p) {
    return y == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(y), 1.0 / (p - 1.0)), y);
}

inline double psi_reg(double s, double p, double eps) {
    if (s == 0.0) return 0.0; // also covers eps = 0, where 0 * inf would leak
    return s * std::pow(s * s + eps * eps, (p - 2.0) / 2.0);
}

inline double psi_reg_deriv(double s, double p, double eps) {
    const double m = s * s + eps * eps;
    return std::pow(m, (p - 4.0) / 2.0) * ((p - 1.0) * s * s + eps * eps);
}

inline void require_zero_on_dirichlet(const PLaplaceProblem& prob, const Vector& f) {
    if (prob.is_grid()) return;
    for (Index v : prob.graph().dirichlet)
        if (f[v] != 0.0)
            throw std::invalid_argument("p-Laplacian: vector must vanish on the Dirichlet set");
}

} // namespace plap_detail

/// (L_p f)(v) = (1/nu_v) sum_w mu_vw psi(f(v) - f(w)); grids use the
/// divided-difference form with the 1/h^p scale. Graph output carries
/// zeros on the Dirichlet set.
inline Vector plap_apply(const PLaplaceProblem& prob, const Vector& f) {
    if (f.size() != prob.vector_length())
        throw std::invalid_argument("plap_apply: vector has wrong length");
    plap_detail::require_zero_on_dirichlet(prob, f);
    const double p = prob.p;
    if (prob.is_grid()) {
        const Grid1D& g = prob.grid();
        const Index n = g.n_interior;
        const double scale = std::pow(g.h, -p);
        Vector out(n);
        for (Index i = 0; i < n; ++i) {
            const double left = (i == 0) ? 0.0 : f[i - 1];
            const double right = (i == n - 1) ? 0.0 : f[i + 1];
            out[i] = scale * (plap_detail::psi(f[i] - right, p) + plap_detail::psi(f[i] - left, p));
        }
        return out;
    }
    const Graph& g = prob.graph();
    Vector out = Vector::Zero(g.size());
    const std::vector<Index> free = g.free_vertices();
    for (Index v : free) {
        double acc = 0.0;
        for (Index w = 0; w < g.size(); ++w) {
            const double mu = g.edge_weight(v, w);
            if (mu > 0.0) acc += mu * plap_detail::psi(f[v] - f[w], p);
        }
        out[v] = acc / g.vertex_weight[v];
    }
    return out;
}

/// Energy/mass Rayleigh quotient: each undirected edge counted once.
inline double plap_rayleigh(const PLaplaceProblem& prob, const Vector& f) {
    const double p = prob.p;
    if (prob.is_grid()) {
        const Grid1D& g = prob.grid();
        const Index n = g.n_interior;
        double energy = std::pow(std::abs(f[0]), p) + std::pow(std::abs(f[n - 1]), p);
        for (Index i = 0; i + 1 < n; ++i) energy += std::pow(std::abs(f[i] - f[i + 1]), p);
        energy /= std::pow(g.h, p);
        double mass = 0.0;
        for (Index i = 0; i < n; ++i) mass += std::pow(std::abs(f[i]), p);
        return energy / mass;
    }
    const Graph& g = prob.graph();
    double energy = 0.0;
    for (Index v = 0; v < g.size(); ++v)
        for (Index w = v + 1; w < g.size(); ++w)
            if (g.edge_weight(v, w) > 0.0)
                energy += g.edge_weight(v, w) * std::pow(std::abs(f[v] - f[w]), p);
    double mass = 0.0;
    for (Index v = 0; v < g.size(); ++v)
        mass += g.vertex_weight[v] * std::pow(std::abs(f[v]), p);
    return energy / mass;
}

namespace plap_detail {

/// 1D solves reduce to a scalar root-find: fluxes along the interval
/// telescope, so psi of each difference is a running sum plus one unknown
/// constant fixed by the boundary values. Exact up to round-off for every
/// p > 1, including the degenerate and singular regimes.
inline Vector solve_grid(const PLaplaceProblem& prob, const Vector& rhs, double* residual_out) {
    const Grid1D& g = prob.grid();
    const double p = prob.p;
    const Index n = g.n_interior;
    const double hp = std::pow(g.h, p);
    Vector cum(n + 1);
    cum[0] = 0.0;
    for (Index i = 1; i <= n; ++i) cum[i] = cum[i - 1] + hp * rhs[i - 1];

    auto total = [&](double c) {
        double s = 0.0;
        for (Index i = 0; i <= n; ++i) s += psi_inv(c + cum[i], p);
        return s;
    };
    double lo = -cum.maxCoeff();
    double hi = -cum.minCoeff();
    if (total(lo) > 0.0 || total(hi) < 0.0) {
        const double spread = std::max(1.0, cum.cwiseAbs().maxCoeff());
        lo -= spread;
        hi += spread;
    }
    // Bisect down to the last representable bit of c: the closure defect
    // enters the boundary rows amplified by 1/h^p, so a loose root is not
    // an option here.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (total(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double c = std::abs(total(lo)) <= std::abs(total(hi)) ? lo : hi;

    Vector v = Vector::Zero(n);
    double acc = 0.0;
    for (Index j = n; j >= 1; --j) {
        acc += psi_inv(c + cum[j], p); // edge between nodes j and j+1
        v[j - 1] = acc;
    }
    if (residual_out != nullptr) {
        // Flux-space certificate: the telescoped equations hold by
        // construction, so what remains is the boundary closure gap and the
        // accumulation round-off.
        double worst = std::abs(total(c)) / std::max(1.0, v.cwiseAbs().maxCoeff());
        for (Index i = 0; i < n; ++i) {
            const double lhs = cum[i + 1] - cum[i];
            worst = std::max(worst, std::abs(lhs / hp - rhs[i]));
        }
        *residual_out = worst;
    }
    return v;
}

/// Damped Newton on the eps-regularized operator with continuation down to
/// eps = 1e-10, warm-started from the linear solve.
inline Vector solve_graph(const PLaplaceProblem& prob, const Vector& rhs, double* residual_out) {
    const Graph& g = prob.graph();
    const double p = prob.p;
    const std::vector<Index> free = g.free_vertices();
    const Index m = static_cast<Index>(free.size());
    const double rhs_scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());

    // Linear (p = 2) warm start on the free vertices.
    MatrixOperator L = build_graph_laplacian(g);
    Vector rhs_free(m);
    for (Index a = 0; a < m; ++a) rhs_free[a] = rhs[free[static_cast<std::size_t>(a)]];
    Vector u = solve_real(L, rhs_free);

    auto assemble_full = [&](const Vector& ufree) {
        Vector full = Vector::Zero(g.size());
        for (Index a = 0; a < m; ++a) full[free[static_cast<std::size_t>(a)]] = ufree[a];
        return full;
    };

    auto residual_reg = [&](const Vector& ufree, double eps) {
        Vector full = assemble_full(ufree);
        Vector F(m);
        for (Index a = 0; a < m; ++a) {
            const Index v = free[static_cast<std::size_t>(a)];
            double acc = 0.0;
            for (Index w = 0; w < g.size(); ++w) {
                const double mu = g.edge_weight(v, w);
                if (mu > 0.0) acc += mu * psi_reg(full[v] - full[w], p, eps);
            }
            F[a] = acc / g.vertex_weight[v] - rhs[v];
        }
        return F;
    };

    std::vector<double> eps_path;
    for (double eps = 1e-2; eps >= 1e-10 / 2; eps /= 10.0) eps_path.push_back(eps);
    eps_path.push_back(0.0);

    double last_residual = 0.0;
    for (double eps : eps_path) {
        for (int it = 0; it < 80; ++it) {
            Vector F = residual_reg(u, eps);
            last_residual = F.cwiseAbs().maxCoeff();
            if (last_residual <= 1e-13 * rhs_scale) break;
            Vector full = assemble_full(u);
            Matrix J = Matrix::Zero(m, m);
            for (Index a = 0; a < m; ++a) {
                const Index v = free[static_cast<std::size_t>(a)];
                double diag = 0.0;
                for (Index w = 0; w < g.size(); ++w) {
                    const double mu = g.edge_weight(v, w);
                    if (mu == 0.0) continue;
                    const double d = psi_reg_deriv(full[v] - full[w], p, eps);
                    diag += mu * d;
                }
                J(a, a) = diag / g.vertex_weight[v];
                for (Index b = 0; b < m; ++b) {
                    if (a == b) continue;
                    const Index w = free[static_cast<std::size_t>(b)];
                    const double mu = g.edge_weight(v, w);
                    if (mu == 0.0) continue;
                    J(a, b) = -mu * psi_reg_deriv(full[v] - full[w], p, eps) / g.vertex_weight[v];
                }
            }
            Eigen::PartialPivLU<Matrix> lu(J);
            Vector step = lu.solve(-F);
            if (!step.allFinite()) break;
            double damp = 1.0;
            const double f0 = F.cwiseAbs().maxCoeff();
            for (int bt = 0; bt < 40; ++bt) {
                Vector trial = u + damp * step;
                if (residual_reg(trial, eps).cwiseAbs().maxCoeff() < f0 * (1.0 - 0.25 * damp)) {
                    u = trial;
                    break;
                }
                damp *= 0.5;
                if (bt == 39) u += damp * step;
            }
        }
    }

    Vector F0 = residual_reg(u, 0.0);
    last_residual = F0.cwiseAbs().maxCoeff();
    if (last_residual > 1e-8 * rhs_scale) {
        std::ostringstream os;
        os << "p-Laplacian Newton solve stagnated; last residual " << last_residual;
        throw std::runtime_error(os.str());
    }
    if (residual_out != nullptr) *residual_out = last_residual;
    return assemble_full(u);
}

} // namespace plap_detail

/// Solve L_p v = rhs with zero Dirichlet values.
inline Vector plap_solve(const PLaplaceProblem& prob, const Vector& rhs,
                         double* residual_out = nullptr) {
    if (prob.is_grid()) {
        if (rhs.size() != prob.grid().n_interior)
            throw std::invalid_argument("plap_solve: right-hand side has wrong length");
        return plap_detail::solve_grid(prob, rhs, residual_out);
    }
    if (rhs.size() != prob.graph().size())
        throw std::invalid_argument("plap_solve: right-hand side has wrong length");
    return plap_detail::solve_graph(prob, rhs, residual_out);
}

/// v = L_p^{-1} 1, the nonlinear torsion function; strictly positive on the
/// free nodes.
inline LandscapeFunction plap_torsion(const PLaplaceProblem& prob) {
    Vector rhs;
    if (prob.is_grid()) {
        rhs = Vector::Ones(prob.grid().n_interior);
    } else {
        rhs = Vector::Zero(prob.graph().size());
        for (Index v : prob.graph().free_vertices()) rhs[v] = 1.0;
    }
    double residual = 0.0;
    LandscapeFunction f;
    f.kind = LandscapeKind::Torsion;
    f.rho_id = "ones";
    f.values = plap_solve(prob, rhs, &residual);
    f.solver_residual = residual;
    f.finalize();
    return f;
}

/// Ground state of L_p phi = lambda |phi|^{p-2} phi by projected gradient
/// descent on the Rayleigh quotient (Barzilai-Borwein steps, sup-norm
/// normalization each sweep), warm-started at the linear ground state and
/// finished with inverse-power polish steps when the gradient flattens out
/// before the residual target.
inline Eigenpair plap_ground_state(const PLaplaceProblem& prob, int max_iterations = 50000) {
    const double p = prob.p;
    const Index length = prob.vector_length();

    // Linear ground state as the initial iterate. Non-uniform vertex
    // weights make the plain matrix non-Hermitian, so the eigenproblem is
    // solved in the nu-symmetrized similarity frame.
    Vector f;
    std::vector<Index> free_nodes;
    if (prob.is_grid()) {
        MatrixOperator L = build_laplacian_1d(prob.grid());
        f = eigenpair(L, 0).phi.real();
        for (Index i = 0; i < length; ++i) free_nodes.push_back(i);
    } else {
        MatrixOperator L = build_graph_laplacian(prob.graph());
        free_nodes = prob.graph().free_vertices();
        const Index m = static_cast<Index>(free_nodes.size());
        Vector ground(m);
        if (L.hermitian()) {
            ground = eigenpair(L, 0).phi.real();
        } else {
            Vector root_nu(m);
            for (Index a = 0; a < m; ++a)
                root_nu[a] =
                    std::sqrt(prob.graph().vertex_weight[free_nodes[static_cast<std::size_t>(a)]]);
            Matrix sym = root_nu.asDiagonal() * L.entries().real() *
                         root_nu.cwiseInverse().asDiagonal();
            MatrixOperator symmetrized(std::move(sym), true, "nu_symmetrized_laplacian");
            ground = eigenpair(symmetrized, 0).phi.real().cwiseQuotient(root_nu);
        }
        f = Vector::Zero(length);
        for (Index a = 0; a < m; ++a)
            f[free_nodes[static_cast<std::size_t>(a)]] = ground[a];
    }

    auto normalize = [&](Vector& v) {
        Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        v /= v[imax]; // also fixes the sign
    };
    normalize(f);

    auto gradient = [&](const Vector& v, double rayleigh) {
        Vector Lv = plap_apply(prob, v);
        Vector g = Vector::Zero(length);
        for (Index i : free_nodes)
            g[i] = Lv[i] - rayleigh * plap_detail::psi(v[i], p);
        return g;
    };
    auto residual_of = [&](const Vector& v, double rayleigh) {
        return gradient(v, rayleigh).cwiseAbs().maxCoeff();
    };

    const double tol = 1e-8;
    double R = plap_rayleigh(prob, f);
    Vector g = gradient(f, R);
    double step = 1.0 / std::max(1.0, g.cwiseAbs().maxCoeff());
    Vector f_prev = f, g_prev = g;
    bool have_prev = false;
    int it = 0;
    for (; it < max_iterations; ++it) {
        if (g.cwiseAbs().maxCoeff() <= tol) break;
        if (have_prev) {
            Vector s = f - f_prev;
            Vector y = g - g_prev;
            const double sy = s.dot(y);
            if (sy > 0.0) step = std::clamp(s.dot(s) / sy, 1e-12, 1e8);
        }
        f_prev = f;
        g_prev = g;
        double damp = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
            Vector trial = f - damp * step * g;
            normalize(trial);
            const double Rt = plap_rayleigh(prob, trial);
            if (Rt <= R + 1e-14 * std::abs(R) || bt == 59) {
                f = trial;
                R = Rt;
                break;
            }
            damp *= 0.5;
        }
        g = gradient(f, R);
        have_prev = true;

        // Inverse-power polish once the quotient has settled: cheap solves
        // push the stationarity residual to the round-off floor.
        if (it > 0 && it % 400 == 0 && g.cwiseAbs().maxCoeff() < 1e-3) {
            for (int polish = 0; polish < 6; ++polish) {
                Vector rhs = Vector::Zero(length);
                for (Index i : free_nodes) rhs[i] = R * plap_detail::psi(f[i], p);
                Vector next = plap_solve(prob, rhs);
                normalize(next);
                const double Rn = plap_rayleigh(prob, next);
                if (!(Rn <= R * (1.0 + 1e-12))) break;
                f = next;
                R = Rn;
                if (residual_of(f, R) <= tol) break;
            }
            g = gradient(f, R);
            have_prev = false;
            if (g.cwiseAbs().maxCoeff() <= tol) break;
        }
    }
    const double resid = residual_of(f, R);
    if (resid > tol) {
        std::ostringstream os;
        os << "plap_ground_state: no convergence after " << it
           << " iterations; residual " << resid;
        throw std::runtime_error(os.str());
    }

    Eigenpair pair;
    pair.lambda = R;
    pair.phi = f.cast<std::complex<double>>();
    pair.residual = resid;
    pair.p = p;
    return pair;
}

/// |phi| <= |lambda|^{1/(p-1)} ||phi||_inf torsion entrywise.
inline BoundReport verify_nonlinear_bound(const Eigenpair& pair,
                                          const LandscapeFunction& torsion_values, double p) {
    if (pair.phi.size() != torsion_values.values.size())
        throw std::invalid_argument("verify_nonlinear_bound: mismatched carriers");
    if (!(p > 1.0)) throw std::invalid_argument("verify_nonlinear_bound: need p > 1");
    const Vector phi_abs = pair.abs_phi();
    const double c = std::pow(std::abs(pair.lambda), 1.0 / (p - 1.0)) * phi_abs.maxCoeff();
    const double tol = default_bound_tol(phi_abs.maxCoeff());
    return BoundReport::from(phi_abs, Vector(c * torsion_values.values), c, tol);
}

} // namespace landscape
