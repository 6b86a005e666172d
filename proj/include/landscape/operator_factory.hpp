#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "landscape/types.hpp"

namespace landscape {

/// Second difference with homogeneous Dirichlet values: 2/h^2 on the
/// diagonal, -1/h^2 off it. Discrete eigenvalues approximate k^2 pi^2.
inline MatrixOperator build_laplacian_1d(const Grid1D& grid) {
    const Index n = grid.n_interior;
    const double ih2 = 1.0 / (grid.h * grid.h);
    Matrix A = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        A(i, i) = 2.0 * ih2;
        if (i + 1 < n) {
            A(i, i + 1) = -ih2;
            A(i + 1, i) = -ih2;
        }
    }
    return MatrixOperator(std::move(A), true, "laplacian_1d", grid);
}

inline MatrixOperator build_schroedinger_1d(const Grid1D& grid, const PotentialVector& V) {
    if (V.size() != grid.n_interior)
        throw std::invalid_argument("build_schroedinger_1d: potential length mismatch");
    MatrixOperator L = build_laplacian_1d(grid);
    Matrix A = L.entries().real();
    A.diagonal() += V.values();
    return MatrixOperator(std::move(A), true, "schroedinger_1d", grid);
}

enum class BiLaplacianBC { Hinged, Clamped };

/// Fourth derivative on the interval. Hinged is exactly the square of the
/// Dirichlet Laplacian matrix; clamped keeps the same pentadiagonal stencil
/// and folds the ghost reflection u_{-1} = u_1 into the first and last rows.
inline MatrixOperator build_bilaplacian_1d(const Grid1D& grid, BiLaplacianBC bc) {
    const Index n = grid.n_interior;
    if (n < 3) throw std::invalid_argument("build_bilaplacian_1d: need at least 3 interior points");
    MatrixOperator L = build_laplacian_1d(grid);
    Matrix A = (L.entries().real() * L.entries().real()).eval();
    std::string label = "bilaplacian_1d_hinged";
    if (bc == BiLaplacianBC::Clamped) {
        const double ih4 = 1.0 / std::pow(grid.h, 4);
        A(0, 0) += ih4;
        A(n - 1, n - 1) += ih4;
        label = "bilaplacian_1d_clamped";
    }
    return MatrixOperator(std::move(A), true, label, grid);
}

/// Magnetic graph Laplacian with Dirichlet rows/columns removed:
/// diag (sum_w mu_vw)/nu_v, off-diagonal -mu_vw e^{i alpha_vw}/nu_v.
/// alpha = 0 gives the standard Laplacian, alpha = pi the signless one.
inline MatrixOperator build_magnetic_laplacian(const Graph& graph, const MagneticSignature& sig) {
    graph.validate();
    sig.validate(graph);
    const std::vector<Index> keep = graph.free_vertices();
    const Index m = static_cast<Index>(keep.size());
    ComplexMatrix A = ComplexMatrix::Zero(m, m);
    const Vector deg = graph.degrees();
    for (Index a = 0; a < m; ++a) {
        const Index v = keep[static_cast<std::size_t>(a)];
        A(a, a) = deg[v] / graph.vertex_weight[v];
        for (Index b = 0; b < m; ++b) {
            if (a == b) continue;
            const Index w = keep[static_cast<std::size_t>(b)];
            const double mu = graph.edge_weight(v, w);
            if (mu == 0.0) continue;
            A(a, b) = -mu * std::exp(std::complex<double>(0.0, sig.alpha(v, w))) /
                      graph.vertex_weight[v];
        }
    }
    const double scale = A.cwiseAbs().maxCoeff();
    const bool herm =
        scale == 0.0 || (A - A.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    return MatrixOperator(std::move(A), herm, "magnetic_laplacian");
}

inline MatrixOperator build_graph_laplacian(const Graph& graph) {
    return build_magnetic_laplacian(graph, MagneticSignature::zero(graph.size()));
}

inline MatrixOperator build_signless_laplacian(const Graph& graph) {
    return build_magnetic_laplacian(graph, MagneticSignature::constant(graph, M_PI));
}

inline Graph path_graph(Index n, std::vector<Index> dirichlet = {}) {
    Graph g;
    g.vertices.reserve(static_cast<std::size_t>(n));
    for (Index v = 0; v < n; ++v) g.vertices.push_back("v" + std::to_string(v + 1));
    g.edge_weight = Matrix::Zero(n, n);
    for (Index v = 0; v + 1 < n; ++v) {
        g.edge_weight(v, v + 1) = 1.0;
        g.edge_weight(v + 1, v) = 1.0;
    }
    g.vertex_weight = Vector::Ones(n);
    g.dirichlet = std::move(dirichlet);
    g.validate();
    return g;
}

inline Graph with_degree_weights(Graph g) {
    g.vertex_weight = g.degrees();
    g.validate();
    return g;
}

/// Edge-list JSON:
/// {"vertices":[...], "edges":[{"u":..,"v":..,"w":..,"alpha":..}],
///  "nu":{...}, "dirichlet":[...]}
inline std::pair<Graph, MagneticSignature> graph_from_json(const nlohmann::json& j) {
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw std::invalid_argument("graph json: /vertices must be an array");
    Graph g;
    for (const auto& v : j["vertices"]) g.vertices.push_back(v.get<std::string>());
    const Index n = g.size();
    g.edge_weight = Matrix::Zero(n, n);
    g.vertex_weight = Vector::Ones(n);
    MagneticSignature sig = MagneticSignature::zero(n);

    auto index_of = [&](const std::string& name) -> Index {
        for (Index v = 0; v < n; ++v)
            if (g.vertices[static_cast<std::size_t>(v)] == name) return v;
        throw std::invalid_argument("graph json: unknown vertex '" + name + "'");
    };

    if (!j.contains("edges") || !j["edges"].is_array())
        throw std::invalid_argument("graph json: /edges must be an array");
    for (const auto& e : j["edges"]) {
        const Index u = index_of(e.at("u").get<std::string>());
        const Index v = index_of(e.at("v").get<std::string>());
        const double w = e.value("w", 1.0);
        const double a = e.value("alpha", 0.0);
        if (u == v) throw std::invalid_argument("graph json: self loop");
        g.edge_weight(u, v) = w;
        g.edge_weight(v, u) = w;
        sig.alpha(u, v) = a;
        sig.alpha(v, u) = -a;
    }
    if (j.contains("nu"))
        for (const auto& [name, value] : j["nu"].items())
            g.vertex_weight[index_of(name)] = value.get<double>();
    if (j.contains("dirichlet"))
        for (const auto& d : j["dirichlet"]) g.dirichlet.push_back(index_of(d.get<std::string>()));
    g.validate();
    sig.validate(g);
    return {std::move(g), std::move(sig)};
}

} // namespace landscape
