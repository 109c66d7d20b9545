#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tacert/maxcut.hpp"

using tacert::CutInstance;
using tacert::SymMatrix;

namespace {

/// Plain enumeration of all 2^n sign vectors, recomputing x^T A x each time.
double naive_max(const CutInstance& inst) {
    const int n = static_cast<int>(inst.size());
    double best = -std::numeric_limits<double>::infinity();
    tacert::SignVector x(n);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        for (int i = 0; i < n; ++i) x[i] = (code >> i) & 1 ? -1 : 1;
        best = std::max(best, inst.value(x));
    }
    return best;
}

tacert::Graph triangle() {
    tacert::Graph g;
    g.vertex_count = 3;
    tacert::add_edge(g, 1, 2, 1.0);
    tacert::add_edge(g, 1, 3, 1.0);
    tacert::add_edge(g, 2, 3, 1.0);
    return g;
}

CutInstance random_integer_instance(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(-9, 9);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = d(rng);
    return CutInstance(SymMatrix(a));
}

SymMatrix constant_offdiag(int n, double c) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, c);
    m.diagonal().setOnes();
    return SymMatrix(m);
}

}  // namespace

TEST(BruteForce, Examples) {
    const auto id = tacert::brute_force_opt(CutInstance(SymMatrix::identity(3)));
    EXPECT_EQ(id.optimum, 3.0);
    EXPECT_EQ(id.evaluations, 4u);

    Eigen::MatrixXd a(2, 2);
    a << 0, 1, 1, 0;
    const auto r = tacert::brute_force_opt(CutInstance(SymMatrix(a)));
    EXPECT_EQ(r.optimum, 2.0);
    EXPECT_EQ(r.argmax, (tacert::SignVector{1, 1}));

    const auto tri = tacert::brute_force_opt(tacert::graph_to_objective(triangle(), tacert::ObjectiveForm::cut_value));
    EXPECT_EQ(tri.optimum, 2.0);
    EXPECT_EQ(tri.argmax[0], 1);
}

TEST(BruteForce, SingleEdge) {
    tacert::Graph g;
    g.vertex_count = 2;
    tacert::add_edge(g, 1, 2, 1.0);
    const auto r = tacert::brute_force_opt(tacert::graph_to_objective(g, tacert::ObjectiveForm::cut_value));
    EXPECT_EQ(r.optimum, 1.0);
    EXPECT_EQ(r.argmax, (tacert::SignVector{1, -1}));
}

TEST(BruteForce, GrayCodeMatchesNaiveExactly) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 12;
        const CutInstance inst = random_integer_instance(n, rng);
        const auto r = tacert::brute_force_opt(inst);
        EXPECT_EQ(r.optimum, naive_max(inst)) << "trial " << trial;
        EXPECT_EQ(r.optimum, inst.value(r.argmax));
        EXPECT_EQ(r.argmax[0], 1);
        EXPECT_EQ(r.evaluations, std::uint64_t{1} << (n - 1));
    }
}

TEST(BruteForce, RealWeightsMatchNaive) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 10;
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = normal(rng);
        const CutInstance inst{SymMatrix(a)};
        EXPECT_NEAR(tacert::brute_force_opt(inst).optimum, naive_max(inst), 1e-12 * (1 + std::abs(naive_max(inst))));
    }
}

TEST(BruteForce, TiesGoToLexicographicallySmallest) {
    // x^T x is constant, so every vector ties; the smallest with x_1 = +1 is (+1, -1, -1, -1).
    const auto r = tacert::brute_force_opt(CutInstance(SymMatrix::identity(4)));
    EXPECT_EQ(r.argmax, (tacert::SignVector{1, -1, -1, -1}));
}

TEST(BruteForce, SignConjugationInvariance) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 9;
        const CutInstance inst = random_integer_instance(n, rng);
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d(i) = (rng() & 1) ? 1.0 : -1.0;
        const CutInstance conj{SymMatrix(d.asDiagonal() * inst.a.dense() * d.asDiagonal())};
        const auto r = tacert::brute_force_opt(inst);
        const auto rc = tacert::brute_force_opt(conj);
        EXPECT_EQ(r.optimum, rc.optimum);
        tacert::SignVector mapped(n);
        for (int i = 0; i < n; ++i) mapped[i] = r.argmax[i] * static_cast<int>(d(i));
        EXPECT_EQ(conj.value(mapped), rc.optimum);
    }
}

TEST(BruteForce, EqualsBestVertexInnerProduct) {
    std::mt19937_64 rng(8);
    for (int n = 1; n <= 8; ++n) {
        const CutInstance inst = random_integer_instance(n, rng);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : tacert::cut_matrix_vertices(n)) best = std::max(best, inst.a.dot(v));
        EXPECT_EQ(tacert::brute_force_opt(inst).optimum, best);
    }
}

TEST(BruteForce, SizeCap) {
    EXPECT_THROW(tacert::brute_force_opt(CutInstance(SymMatrix::identity(25))), tacert::ResourceError);
}

TEST(GraphToObjective, CutValueIdentity) {
    const tacert::Graph g = triangle();
    const CutInstance cut = tacert::graph_to_objective(g, tacert::ObjectiveForm::cut_value);
    EXPECT_EQ(cut.constant, 1.5);
    EXPECT_EQ(cut.value(std::vector{1, 1, -1}), 2.0);
    EXPECT_EQ(cut.value(std::vector{1, 1, 1}), 0.0);
    EXPECT_EQ(tacert::cut_value(g, std::vector{1, 1, -1}), 2.0);
}

TEST(GraphToObjective, AllFormsAgreeOnEverySignVector) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> w(0.1, 3.0);
    tacert::Graph g;
    g.vertex_count = 6;
    for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j)
            if (rng() % 3 != 0) tacert::add_edge(g, i, j, w(rng));
    tacert::add_edge(g, 1, 2, 0.5);  // parallel edge
    const CutInstance cut = tacert::graph_to_objective(g, tacert::ObjectiveForm::cut_value);
    const CutInstance lap = tacert::graph_to_objective(g, tacert::ObjectiveForm::laplacian);
    const CutInstance quad = tacert::graph_to_objective(g, tacert::ObjectiveForm::quadratic);
    EXPECT_TRUE(tacert::psd_check(lap.a).is_psd);
    tacert::SignVector x(6);
    for (int code = 0; code < 64; ++code) {
        for (int i = 0; i < 6; ++i) x[i] = (code >> i) & 1 ? -1 : 1;
        const double expected = tacert::cut_value(g, x);
        double edge_sum = 0.0;
        for (const auto& e : g.edges) edge_sum += e.weight * x[e.u] * x[e.v];
        EXPECT_NEAR(cut.value(x), expected, 1e-12);
        EXPECT_NEAR(lap.value(x), expected, 1e-12);
        EXPECT_NEAR(g.total_weight() / 2.0 - edge_sum / 2.0, expected, 1e-12);
        EXPECT_NEAR(quad.value(x), 2.0 * edge_sum, 1e-12);
    }
}

TEST(GraphToObjective, EdgeValidation) {
    tacert::Graph g;
    g.vertex_count = 3;
    EXPECT_THROW(tacert::add_edge(g, 1, 1, 1.0), tacert::InputError);
    EXPECT_THROW(tacert::add_edge(g, 0, 2, 1.0), tacert::InputError);
    EXPECT_THROW(tacert::add_edge(g, 1, 4, 1.0), tacert::InputError);
    EXPECT_THROW(tacert::add_edge(g, 1, 2, std::nan("")), tacert::InputError);
}

TEST(Rudy, ParsesWithCommentsAndDecimals) {
    std::istringstream in("# triangle\n3 3\n1 2 1\n# mid comment\n1 3 2.5\n2 3 -1\n");
    const tacert::Graph g = tacert::read_rudy(in);
    EXPECT_EQ(g.vertex_count, 3);
    ASSERT_EQ(g.edges.size(), 3u);
    EXPECT_EQ(g.edges[1].u, 0);
    EXPECT_EQ(g.edges[1].v, 2);
    EXPECT_EQ(g.edges[1].weight, 2.5);
    EXPECT_EQ(g.edges[2].weight, -1.0);
}

TEST(Rudy, Diagnostics) {
    auto error_line = [](const std::string& text) {
        std::istringstream in(text);
        try {
            tacert::read_rudy(in);
        } catch (const tacert::ParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(error_line("3 2\n1 2 1\n"), 3);
    EXPECT_EQ(error_line("3 1\n1 1 1\n"), 2);
    EXPECT_EQ(error_line("3 1\n1 5 1\n"), 2);
    EXPECT_EQ(error_line("3 1\n1 2 w\n"), 2);
    EXPECT_EQ(error_line("3 1\n1 2 1\n2 3 1\n"), 3);
    EXPECT_EQ(error_line("x 1\n"), 1);
}

TEST(McMembership, CutMatrixIsItsOwnVertex) {
    const tacert::SignVector x{1, -1, -1, 1};
    const auto h = tacert::mc_membership(tacert::TaCandidate(tacert::rank1_cut_matrix(x).matrix()));
    ASSERT_TRUE(h.in_hull);
    const auto vertices = tacert::cut_matrix_vertices(4);
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        const bool own = vertices[k] == tacert::rank1_cut_matrix(x).matrix();
        EXPECT_NEAR(h.weights[k], own ? 1.0 : 0.0, 1e-12);
    }
}

TEST(McMembership, IdentityIsAnAverageOfCuts) {
    const auto h = tacert::mc_membership(tacert::TaCandidate(SymMatrix::identity(3)));
    ASSERT_TRUE(h.in_hull);
    const auto vertices = tacert::cut_matrix_vertices(3);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 3);
    double total = 0.0;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        EXPECT_GE(h.weights[k], -1e-10);
        sum += h.weights[k] * vertices[k].dense();
        total += h.weights[k];
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_LE((sum - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(McMembership, TriangleInequalityViolationIsOutside) {
    const SymMatrix m = constant_offdiag(3, -0.5);
    EXPECT_LT(m(0, 1) + m(0, 2) + m(1, 2), -1.0);
    const auto h = tacert::mc_membership(tacert::TaCandidate(m));
    EXPECT_FALSE(h.in_hull);
    EXPECT_TRUE(h.weights.empty());
    // On the boundary the triangle inequality is tight and the point is inside.
    EXPECT_TRUE(tacert::mc_membership(tacert::TaCandidate(constant_offdiag(3, -1.0 / 3.0))).in_hull);
}

TEST(McMembership, TaPointsLieInsideTheHull) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int n = 2 + seed % 4;
        const tacert::TaCandidate c(tacert::f_entrywise(tacert::sample_elliptope(n, 1 + seed % n, seed).matrix()));
        ASSERT_TRUE(tacert::ta_membership(c).in_ta);
        const auto h = tacert::mc_membership(c);
        EXPECT_TRUE(h.in_hull) << "seed " << seed;
        EXPECT_LE(h.residual, 1e-8);
    }
}

TEST(McMembership, SizeCap) {
    EXPECT_THROW(tacert::mc_membership(tacert::TaCandidate(SymMatrix::identity(6))), tacert::ResourceError);
    EXPECT_TRUE(tacert::mc_membership(tacert::TaCandidate(SymMatrix::identity(6)), 6).in_hull);
}
