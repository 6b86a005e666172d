#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace landscape {

using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Uniform grid of interior points on the unit interval; the two endpoints
/// carry homogeneous Dirichlet values and are not stored.
struct Grid1D {
    Index n_interior = 0;
    double h = 0.0;

    explicit Grid1D(Index n) : n_interior(n), h(1.0 / static_cast<double>(n + 1)) {
        if (n < 1) throw std::invalid_argument("Grid1D: need at least one interior point");
    }

    /// Interior node coordinates x_j = j*h, j = 1..n.
    Vector points() const {
        Vector x(n_interior);
        for (Index j = 0; j < n_interior; ++j) x[j] = static_cast<double>(j + 1) * h;
        return x;
    }
};

/// Finite weighted undirected graph. edge_weight is symmetric with zero
/// diagonal; a zero entry means "no edge". vertex_weight is strictly
/// positive. dirichlet lists vertices clamped to zero (a proper subset).
struct Graph {
    std::vector<std::string> vertices;
    Matrix edge_weight;
    Vector vertex_weight;
    std::vector<Index> dirichlet;

    Index size() const { return static_cast<Index>(vertices.size()); }

    void validate() const {
        const Index n = size();
        if (edge_weight.rows() != n || edge_weight.cols() != n)
            throw std::invalid_argument("Graph: edge weight matrix has wrong shape");
        if (vertex_weight.size() != n)
            throw std::invalid_argument("Graph: vertex weight vector has wrong length");
        for (Index v = 0; v < n; ++v) {
            if (!(vertex_weight[v] > 0.0))
                throw std::invalid_argument("Graph: vertex weights must be strictly positive");
            if (edge_weight(v, v) != 0.0)
                throw std::invalid_argument("Graph: self loops are not supported");
            for (Index w = 0; w < n; ++w) {
                if (edge_weight(v, w) < 0.0)
                    throw std::invalid_argument("Graph: edge weights must be nonnegative");
                if (edge_weight(v, w) != edge_weight(w, v))
                    throw std::invalid_argument("Graph: edge weights must be symmetric");
            }
        }
        if (static_cast<Index>(dirichlet.size()) >= n)
            throw std::invalid_argument("Graph: dirichlet set must be a proper subset");
        for (Index v : dirichlet)
            if (v < 0 || v >= n) throw std::invalid_argument("Graph: dirichlet vertex out of range");
    }

    std::vector<Index> free_vertices() const {
        std::vector<bool> clamped(size(), false);
        for (Index v : dirichlet) clamped[static_cast<std::size_t>(v)] = true;
        std::vector<Index> id;
        for (Index v = 0; v < size(); ++v)
            if (!clamped[static_cast<std::size_t>(v)]) id.push_back(v);
        return id;
    }

    Vector degrees() const {
        return edge_weight.rowwise().sum();
    }
};

/// Antisymmetric edge phases alpha_vw in (-pi, pi]; alpha_vw = 0 off edges.
struct MagneticSignature {
    Matrix alpha;

    static MagneticSignature zero(Index n) {
        MagneticSignature s;
        s.alpha = Matrix::Zero(n, n);
        return s;
    }

    static MagneticSignature constant(const Graph& g, double value) {
        MagneticSignature s = zero(g.size());
        for (Index v = 0; v < g.size(); ++v)
            for (Index w = v + 1; w < g.size(); ++w)
                if (g.edge_weight(v, w) > 0.0) {
                    s.alpha(v, w) = value;
                    s.alpha(w, v) = -value;
                }
        return s;
    }

    void validate(const Graph& g) const {
        const Index n = g.size();
        if (alpha.rows() != n || alpha.cols() != n)
            throw std::invalid_argument("MagneticSignature: shape mismatch with graph");
        for (Index v = 0; v < n; ++v)
            for (Index w = 0; w < n; ++w) {
                if (std::abs(alpha(v, w) + alpha(w, v)) > 1e-14)
                    throw std::invalid_argument("MagneticSignature: phases must be antisymmetric");
                if (g.edge_weight(v, w) == 0.0 && alpha(v, w) != 0.0)
                    throw std::invalid_argument("MagneticSignature: phase on a non-edge");
            }
    }
};

/// Real potential split into positive and negative parts with disjoint
/// supports: V = plus - minus, plus.*minus = 0.
struct PotentialVector {
    Vector plus;
    Vector minus;

    PotentialVector() = default;

    explicit PotentialVector(const Vector& v)
        : plus(v.cwiseMax(0.0)), minus((-v).cwiseMax(0.0)) {}

    Vector values() const { return plus - minus; }
    Index size() const { return plus.size(); }

    static PotentialVector zero(Index n) { return PotentialVector(Vector::Zero(n)); }
};

/// Strictly positive weight defining the gauge norm ||f||_rho.
struct WeightVector {
    Vector values;
    std::string id = "custom";

    WeightVector() = default;

    WeightVector(Vector v, std::string name) : values(std::move(v)), id(std::move(name)) {
        if (values.size() == 0 || values.minCoeff() <= 0.0)
            throw std::invalid_argument("WeightVector: entries must be strictly positive");
    }

    static WeightVector ones(Index n) { return WeightVector(Vector::Ones(n), "ones"); }

    Index size() const { return values.size(); }
};

/// Full Hermitian eigendecomposition, eigenvalues ascending, eigenvector
/// columns orthonormal. residual is the certified max of ||A v_k - l_k v_k||_inf.
struct EigenDecomposition {
    Vector eigenvalues;
    ComplexMatrix eigenvectors;
    double residual = 0.0;

    Index size() const { return eigenvalues.size(); }
};

namespace detail {

struct OperatorCache {
    std::mutex mutex;
    std::shared_ptr<const EigenDecomposition> eig;
    std::shared_ptr<const ComplexMatrix> inverse;
};

} // namespace detail

/// Dense square operator with provenance. Immutable after construction;
/// copies share the lazily filled spectral cache.
class MatrixOperator {
  public:
    MatrixOperator() = default;

    MatrixOperator(ComplexMatrix entries, bool hermitian, std::string label,
                   std::optional<Grid1D> grid = std::nullopt)
        : entries_(std::move(entries)),
          hermitian_(hermitian),
          label_(std::move(label)),
          grid_(std::move(grid)),
          cache_(std::make_shared<detail::OperatorCache>()) {
        if (entries_.rows() != entries_.cols())
            throw std::invalid_argument("MatrixOperator: matrix must be square");
        if (!entries_.allFinite())
            throw std::invalid_argument("MatrixOperator: entries must be finite");
        if (hermitian_ && !hermitian_check_passes())
            throw std::invalid_argument("MatrixOperator: hermitian flag set but check fails");
        is_real_ = entries_.imag().cwiseAbs().maxCoeff() == 0.0;
    }

    MatrixOperator(Matrix entries, bool hermitian, std::string label,
                   std::optional<Grid1D> grid = std::nullopt)
        : MatrixOperator(ComplexMatrix(entries.cast<std::complex<double>>()), hermitian,
                         std::move(label), std::move(grid)) {}

    Index size() const { return entries_.rows(); }
    const ComplexMatrix& entries() const { return entries_; }
    bool hermitian() const { return hermitian_; }
    bool is_real() const { return is_real_; }
    const std::string& label() const { return label_; }
    const std::optional<Grid1D>& grid() const { return grid_; }

    double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }
    double inf_norm() const { return entries_.cwiseAbs().rowwise().sum().maxCoeff(); }

    bool hermitian_check_passes() const {
        const double scale = max_abs();
        if (scale == 0.0) return true;
        const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
        return dev <= 1e-12 * scale;
    }

    /// A + mu*I with a fresh cache; keeps grid provenance.
    MatrixOperator shifted(double mu) const {
        ComplexMatrix s = entries_;
        s.diagonal().array() += mu;
        return MatrixOperator(std::move(s), hermitian_, label_ + "+shift", grid_);
    }

    MatrixOperator negated() const {
        return MatrixOperator(ComplexMatrix(-entries_), hermitian_, "-" + label_, grid_);
    }

    detail::OperatorCache& cache() const { return *cache_; }

  private:
    ComplexMatrix entries_;
    bool hermitian_ = false;
    bool is_real_ = true;
    std::string label_;
    std::optional<Grid1D> grid_;
    std::shared_ptr<detail::OperatorCache> cache_;
};

/// (lambda, phi) with the residual certified at construction. p = 2 marks a
/// linear eigenpair; p != 2 a p-homogeneous nonlinear one.
struct Eigenpair {
    double lambda = 0.0;
    ComplexVector phi;
    double residual = 0.0;
    double p = 2.0;

    Vector abs_phi() const { return phi.cwiseAbs(); }
};

} // namespace landscape
