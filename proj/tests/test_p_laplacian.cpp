#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "landscape/dense_numerics.hpp"
#include "landscape/operator_factory.hpp"
#include "landscape/p_laplacian.hpp"
#include "landscape/spectral_estimators.hpp"

#include "support/oracles.hpp"

using namespace landscape;

namespace {

PLaplaceProblem p5_problem(double p, bool degree_weights = false) {
    Graph g = path_graph(5, {0, 4});
    if (degree_weights) g = with_degree_weights(g);
    return PLaplaceProblem::on_graph(g, p);
}

} // namespace

TEST_CASE("plap_apply") {
    SECTION("p = 2 coincides with the linear Laplacian matvec") {
        Grid1D g(23);
        PLaplaceProblem prob = PLaplaceProblem::on_grid(g, 2.0);
        MatrixOperator L = build_laplacian_1d(g);
        std::mt19937 rng(3);
        std::normal_distribution<double> dist;
        Vector f(23);
        for (Index i = 0; i < 23; ++i) f[i] = dist(rng);
        Vector lhs = plap_apply(prob, f);
        Vector rhs = (L.entries().real() * f).eval();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
    SECTION("homogeneity: L_p(cf) = sign(c)|c|^{p-1} L_p f") {
        PLaplaceProblem prob = p5_problem(4.0);
        Vector f(5);
        f << 0.0, 0.7, 1.3, 0.4, 0.0;
        for (double c : {2.0, -1.5, 0.25}) {
            Vector lhs = plap_apply(prob, Vector(c * f));
            Vector rhs = std::copysign(std::pow(std::abs(c), 3.0), c) * plap_apply(prob, f);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SECTION("P5 hand-expanded values at p = 4") {
        PLaplaceProblem prob = p5_problem(4.0);
        const double a = 0.6;
        Vector f(5);
        f << 0.0, a, 1.0, a, 0.0;
        Vector out = plap_apply(prob, f);
        const double expected_side = a * a * a - std::pow(1.0 - a, 3);
        const double expected_mid = 2.0 * std::pow(1.0 - a, 3);
        CHECK(out[1] == Catch::Approx(expected_side).epsilon(1e-13));
        CHECK(out[2] == Catch::Approx(expected_mid).epsilon(1e-13));
        CHECK(out[3] == Catch::Approx(expected_side).epsilon(1e-13));
        CHECK(out[0] == 0.0);
        CHECK(out[4] == 0.0);
    }
    SECTION("nonzero boundary values are rejected") {
        PLaplaceProblem prob = p5_problem(4.0);
        Vector f = Vector::Ones(5);
        CHECK_THROWS_AS(plap_apply(prob, f), std::invalid_argument);
    }
}

TEST_CASE("plap_torsion on grids") {
    SECTION("p = 2 reproduces the quadratic torsion exactly") {
        PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(99), 2.0);
        LandscapeFunction tors = plap_torsion(prob);
        Vector x = Grid1D(99).points();
        for (Index i = 0; i < 99; i += 7)
            CHECK(tors.values[i] == Catch::Approx(x[i] * (1.0 - x[i]) / 2.0).margin(1e-12));
    }
    SECTION("p = 4, n = 999: close to the continuum profile") {
        PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(999), 4.0);
        LandscapeFunction tors = plap_torsion(prob);
        ContinuumPOracles o = continuum_p_oracles(4.0);
        CHECK(std::abs(tors.values.maxCoeff() - o.torsion_max) < 5e-3);
        CHECK(tors.values.minCoeff() > 0.0);
        // unregularized residual, representable at p >= 2
        Vector resid = plap_apply(prob, tors.values) - Vector::Ones(999);
        CHECK(resid.cwiseAbs().maxCoeff() < 1e-8);
    }
    SECTION("singular regime p = 1.5 on a short grid keeps the residual contract") {
        PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(31), 1.5);
        LandscapeFunction tors = plap_torsion(prob);
        Vector resid = plap_apply(prob, tors.values) - Vector::Ones(31);
        CHECK(resid.cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(tors.values.maxCoeff() - continuum_p_oracles(1.5).torsion_max) < 5e-4);
    }
}

TEST_CASE("plap_torsion on the path graph with five vertices") {
    SECTION("unit vertex weights: closed-form solve") {
        LandscapeFunction tors = plap_torsion(p5_problem(4.0));
        const double v2 = std::cbrt(1.5);
        const double v3 = v2 + std::pow(2.0, -1.0 / 3.0);
        CHECK(tors.values[0] == 0.0);
        CHECK(tors.values[1] == Catch::Approx(v2).margin(1e-9));
        CHECK(tors.values[2] == Catch::Approx(v3).margin(1e-9));
        CHECK(tors.values[3] == Catch::Approx(v2).margin(1e-9));
        CHECK(tors.values[4] == 0.0);
    }
    SECTION("degree vertex weights give cbrt(3), matching the reference digits") {
        LandscapeFunction tors = plap_torsion(p5_problem(4.0, true));
        CHECK(tors.values[1] == Catch::Approx(std::cbrt(3.0)).margin(1e-10));
        CHECK(tors.values[2] == Catch::Approx(1.0 + std::cbrt(3.0)).margin(1e-10));
        // the quoted digits 1.442249595 sit 2.5e-8 off the exact root
        CHECK(tors.values[1] == Catch::Approx(1.442249595).margin(5e-8));
        CHECK(tors.values[2] == Catch::Approx(2.442249595).margin(5e-8));
        CHECK(tors.values[3] == Catch::Approx(1.442249595).margin(5e-8));
    }
}

TEST_CASE("plap_torsion on a triangle with one clamped vertex") {
    // Symmetry forces equal values on the two adjacent free vertices, so the
    // solver must cope with an exactly vanishing edge difference.
    Graph tri;
    tri.vertices = {"a", "b", "c"};
    tri.edge_weight = Matrix::Zero(3, 3);
    for (Index v = 0; v < 3; ++v)
        for (Index w = 0; w < 3; ++w)
            if (v != w) tri.edge_weight(v, w) = 1.0;
    tri.vertex_weight = Vector::Ones(3);
    tri.dirichlet = {0};
    for (double p : {1.5, 2.0, 4.0}) {
        PLaplaceProblem prob = PLaplaceProblem::on_graph(tri, p);
        LandscapeFunction tors = plap_torsion(prob);
        // psi(t) = 1 on both free vertices: t = 1 for every p
        CHECK(tors.values[1] == Catch::Approx(1.0).margin(1e-10));
        CHECK(tors.values[2] == Catch::Approx(1.0).margin(1e-10));
        CHECK(std::isfinite(tors.solver_residual));
    }
}

TEST_CASE("plap_solve properties") {
    SECTION("solver homogeneity: rhs c*1 scales the torsion by c^{1/(p-1)}") {
        for (double p : {1.5, 3.0}) {
            PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(41), p);
            Vector base = plap_solve(prob, Vector::Ones(41));
            for (double c : {3.0, 0.2}) {
                Vector scaled = plap_solve(prob, Vector::Constant(41, c));
                Vector expected = std::pow(c, 1.0 / (p - 1.0)) * base;
                CHECK((scaled - expected).cwiseAbs().maxCoeff() <
                      1e-10 * std::max(1.0, expected.maxCoeff()));
            }
        }
        PLaplaceProblem graph_prob = p5_problem(4.0);
        Vector rhs = Vector::Zero(5);
        rhs[1] = rhs[2] = rhs[3] = 1.0;
        Vector base = plap_solve(graph_prob, rhs);
        Vector scaled = plap_solve(graph_prob, Vector(2.0 * rhs));
        CHECK((scaled - std::cbrt(2.0) * base).cwiseAbs().maxCoeff() < 1e-9);
    }
    SECTION("order preservation: f <= g implies solutions ordered") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::uniform_real_distribution<double> gap(0.0, 1.0);
        for (double p : {1.5, 2.5, 4.0}) {
            PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(25), p);
            for (int trial = 0; trial < 5; ++trial) {
                Vector f(25), g(25);
                for (Index i = 0; i < 25; ++i) {
                    f[i] = dist(rng);
                    g[i] = f[i] + gap(rng);
                }
                Vector u = plap_solve(prob, f);
                Vector v = plap_solve(prob, g);
                CHECK((v - u).minCoeff() >= -1e-9);
            }
        }
    }
}

TEST_CASE("plap_ground_state") {
    SECTION("p = 2 on P5 recovers 2 - sqrt(2)") {
        Eigenpair pair = plap_ground_state(p5_problem(2.0));
        CHECK(pair.lambda == Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-10));
        CHECK(pair.abs_phi().maxCoeff() == Catch::Approx(1.0));
    }
    SECTION("p = 4 on P5 matches the golden-section oracle") {
        auto oracle = oracles::p5_ground_state_p4();
        Eigenpair pair = plap_ground_state(p5_problem(4.0));
        CHECK(pair.lambda == Catch::Approx(oracle.lambda).margin(1e-9));
        Vector phi = pair.phi.real();
        CHECK(phi[2] == Catch::Approx(1.0).margin(1e-9));
        CHECK(phi[1] == Catch::Approx(oracle.a).margin(1e-6));
        CHECK(phi[3] == Catch::Approx(oracle.a).margin(1e-6));
        CHECK(pair.residual <= 1e-8);
    }
    SECTION("p = 4 on the unit interval is within 1% of the continuum eigenvalue") {
        PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(999), 4.0);
        Eigenpair pair = plap_ground_state(prob);
        const double expected = continuum_p_oracles(4.0).lambda_min;
        CHECK(std::abs(pair.lambda - expected) < 0.01 * expected);
        CHECK(pair.residual <= 1e-8);
    }
    SECTION("degree weights: ground state converges and satisfies its bound") {
        PLaplaceProblem prob = p5_problem(4.0, true);
        Eigenpair pair = plap_ground_state(prob);
        CHECK(pair.residual <= 1e-8);
        BoundReport rep = verify_nonlinear_bound(pair, plap_torsion(prob), 4.0);
        CHECK(rep.certified);
    }
    SECTION("Rayleigh stationarity: small perturbations do not drop the quotient") {
        PLaplaceProblem prob = p5_problem(4.0);
        Eigenpair pair = plap_ground_state(prob);
        Vector phi = pair.phi.real();
        const double R0 = plap_rayleigh(prob, phi);
        std::mt19937 rng(23);
        std::normal_distribution<double> dist;
        for (int trial = 0; trial < 20; ++trial) {
            Vector d = Vector::Zero(5);
            for (Index i = 1; i <= 3; ++i) d[i] = dist(rng);
            d *= 1e-4 / d.cwiseAbs().maxCoeff();
            CHECK(plap_rayleigh(prob, Vector(phi + d)) >= R0 - 1e-7);
        }
    }
}

TEST_CASE("verify_nonlinear_bound") {
    SECTION("p = 2 reduces to the linear verifier") {
        Grid1D g(99);
        PLaplaceProblem prob = PLaplaceProblem::on_grid(g, 2.0);
        Eigenpair pair = plap_ground_state(prob);
        LandscapeFunction tors = plap_torsion(prob);
        BoundReport rep = verify_nonlinear_bound(pair, tors, 2.0);
        CHECK(rep.certified);
        // cross-check against the linear bound machinery
        MatrixOperator L = build_laplacian_1d(g);
        Eigenpair linear = eigenpair(L, 0);
        LandscapeFunction lt = torsion(L, WeightVector::ones(99));
        BoundReport linear_rep = verify_eigenvector_bound(
            linear, LandscapeFunction{Vector(std::abs(linear.lambda) * lt.values),
                                      LandscapeKind::Resolvent},
            WeightVector::ones(99));
        CHECK(linear_rep.certified);
    }
    SECTION("P5 at p = 4: certified with the derived pair and torsion") {
        Eigenpair pair = plap_ground_state(p5_problem(4.0));
        LandscapeFunction tors = plap_torsion(p5_problem(4.0));
        BoundReport rep = verify_nonlinear_bound(pair, tors, 4.0);
        CHECK(rep.certified);
        CHECK(rep.min_slack >= -1e-8);
        // the inner-vertex inequality lambda^{1/3} * 1.14471 > a
        const double lhs = std::pow(pair.lambda, 1.0 / 3.0) * tors.values[1];
        CHECK(lhs > pair.phi.real()[1]);
    }
    SECTION("interval family p in {1.12, ..., 1.5}: bound dominates sin_p pointwise") {
        Vector x = Grid1D(199).points();
        for (double p : {1.12, 1.15, 1.2, 1.25, 1.5}) {
            PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(199), p);
            LandscapeFunction tors = plap_torsion(prob);
            ContinuumPOracles o = continuum_p_oracles(p);
            Vector bound = std::pow(o.lambda_min, 1.0 / (p - 1.0)) * tors.values;
            for (Index i = 4; i < 199; i += 13) {
                const double xi = x[i] <= 0.5 ? x[i] : 1.0 - x[i];
                const double ground = oracles::sinp_ground_state(xi, p);
                CHECK(bound[i] >= ground - 5e-4);
            }
            CHECK(bound.maxCoeff() >= 1.0 - 1e-9);
        }
    }
    SECTION("mismatched carriers throw") {
        Eigenpair pair;
        pair.phi = ComplexVector::Ones(4);
        LandscapeFunction tors;
        tors.values = Vector::Ones(5);
        CHECK_THROWS_AS(verify_nonlinear_bound(pair, tors, 4.0), std::invalid_argument);
    }
}

TEST_CASE("nonlinear lower bound never exceeds the computed ground eigenvalue") {
    for (double p : {2.0, 3.0, 4.0}) {
        PLaplaceProblem prob = PLaplaceProblem::on_grid(Grid1D(199), p);
        LandscapeFunction tors = plap_torsion(prob);
        Eigenpair pair = plap_ground_state(prob);
        LowerBoundResult lb =
            nonlinear_lower_bound(p, tors.values, WeightVector::ones(199));
        CHECK(lb.value <= pair.lambda + 1e-8 * std::abs(pair.lambda));
    }
    LandscapeFunction tors = plap_torsion(p5_problem(4.0));
    Eigenpair pair = plap_ground_state(p5_problem(4.0));
    LowerBoundResult lb = nonlinear_lower_bound(4.0, tors.values, WeightVector::ones(5));
    CHECK(lb.value <= pair.lambda + 1e-8);
}
