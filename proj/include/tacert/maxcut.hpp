#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tacert/error.hpp"
#include "tacert/sym_matrix.hpp"
#include "tacert/trig_map.hpp"

namespace tacert {

/// Weighted undirected edge, 0-based endpoints.
struct Edge {
    int u = 0;
    int v = 0;
    double weight = 1.0;
};

struct Graph {
    int vertex_count = 0;
    std::vector<Edge> edges;

    double total_weight() const {
        double s = 0.0;
        for (const auto& e : edges) s += e.weight;
        return s;
    }

    /// Symmetric weight matrix W; parallel edges accumulate.
    Eigen::MatrixXd weight_matrix() const {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(vertex_count, vertex_count);
        for (const auto& e : edges) {
            w(e.u, e.v) += e.weight;
            w(e.v, e.u) += e.weight;
        }
        return w;
    }
};

/// Validates and appends an edge given with 1-based endpoints.
inline void add_edge(Graph& g, int i, int j, double w) {
    if (i < 1 || j < 1 || i > g.vertex_count || j > g.vertex_count) {
        throw InputError("edge endpoint out of range 1.." + std::to_string(g.vertex_count));
    }
    if (i == j) throw InputError("self-loop at vertex " + std::to_string(i));
    if (!std::isfinite(w)) throw InputError("edge weight must be finite");
    g.edges.push_back({i - 1, j - 1, w});
}

/// Rudy graph format: "n m", then m lines "i j w" (1-based). '#' starts a comment line.
inline Graph read_rudy(std::istream& in) {
    detail::LineCursor cur;
    if (!detail::next_content_line(in, cur)) throw ParseError("missing header line 'n m'", cur.line + 1, 1);
    const auto n = cur.read<long long>("vertex count");
    const auto m = cur.read<long long>("edge count");
    if (!cur.at_end()) throw ParseError("trailing characters after header", cur.line, cur.column());
    if (n < 1 || n > kMaxDimension) throw ParseError("vertex count outside [1, 256]", cur.line, 1);
    if (m < 0) throw ParseError("negative edge count", cur.line, 1);

    Graph g;
    g.vertex_count = static_cast<int>(n);
    for (long long k = 0; k < m; ++k) {
        if (!detail::next_content_line(in, cur)) {
            throw ParseError("expected edge " + std::to_string(k + 1) + " of " + std::to_string(m), cur.line + 1, 1);
        }
        const auto i = cur.read<long long>("edge endpoint");
        const auto j = cur.read<long long>("edge endpoint");
        const int col = cur.column();
        const double w = cur.read<double>("edge weight");
        if (!cur.at_end()) throw ParseError("trailing characters after edge", cur.line, cur.column());
        try {
            add_edge(g, static_cast<int>(i), static_cast<int>(j), w);
        } catch (const InputError& e) {
            throw ParseError(e.what(), cur.line, col);
        }
    }
    if (detail::next_content_line(in, cur)) throw ParseError("more edges than declared", cur.line, 1);
    return g;
}

enum class ObjectiveForm {
    /// x^T W x with W the weight matrix.
    quadratic,
    /// cut(x) = sum(w)/2 + x^T A x with A = -W/4 (constant kept separate).
    cut_value,
    /// cut(x) = x^T (L/4) x with L = diag(W 1) - W; PSD for nonnegative weights.
    laplacian,
};

/**
 * Objective of max over x in {-1, 1}^n of constant + x^T A x.
 *
 * `constant` is zero except for the cut-value form of a graph.
 */
struct CutInstance {
    SymMatrix a;
    double constant = 0.0;
    std::optional<Graph> provenance;

    explicit CutInstance(SymMatrix a_, double constant_ = 0.0, std::optional<Graph> graph = std::nullopt)
        : a(std::move(a_)), constant(constant_), provenance(std::move(graph)) {}

    Index size() const noexcept { return a.size(); }

    double value(std::span<const int> x) const {
        const auto n = static_cast<Index>(x.size());
        if (n != size()) throw InputError("sign vector length does not match the instance");
        double s = 0.0;
        for (Index i = 0; i < n; ++i) {
            double row = 0.0;
            for (Index j = 0; j < n; ++j) row += a(i, j) * x[j];
            s += x[i] * row;
        }
        return constant + s;
    }

    /// constant + <A, X>.
    double value(const SymMatrix& x) const { return constant + a.dot(x); }
};

/// cut(x) = sum over edges of w (1 - x_i x_j) / 2.
inline double cut_value(const Graph& g, std::span<const int> x) {
    if (static_cast<int>(x.size()) != g.vertex_count) throw InputError("sign vector length does not match graph");
    double s = 0.0;
    for (const auto& e : g.edges) s += e.weight * (1 - x[e.u] * x[e.v]) / 2.0;
    return s;
}

/**
 * Converts a graph to an objective.
 *
 * For both cut forms the identity cut(x) = sum(w)/2 - (1/2) sum_{ij in E}
 * w_ij x_i x_j holds: x^T W x counts each edge twice, so the edge sum is
 * x^T W x / 2 and the quadratic part is x^T (-W/4) x.
 */
inline CutInstance graph_to_objective(const Graph& g, ObjectiveForm form) {
    const Eigen::MatrixXd w = g.weight_matrix();
    switch (form) {
        case ObjectiveForm::quadratic:
            return CutInstance(SymMatrix(w), 0.0, g);
        case ObjectiveForm::cut_value:
            return CutInstance(SymMatrix(-0.25 * w), g.total_weight() / 2.0, g);
        case ObjectiveForm::laplacian: {
            Eigen::MatrixXd l = -w;
            l.diagonal() = w.rowwise().sum();
            return CutInstance(SymMatrix(0.25 * l), 0.0, g);
        }
    }
    throw InputError("unknown objective form");
}

inline constexpr int kMaxBruteForceDimension = 24;

struct BruteForceResult {
    double optimum = 0.0;
    SignVector argmax;
    std::uint64_t evaluations = 0;
};

namespace detail {

/// Lexicographic order on sign vectors with -1 < +1.
inline bool lex_less(std::span<const int> a, std::span<const int> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace detail

/**
 * Exact maximum of constant + x^T A x over sign vectors with x_1 = +1.
 *
 * Walks the 2^{n-1} vectors in reflected Gray-code order. Flipping x_k
 * changes the form by -4 x_k (h_k - A_kk x_k) with h = A x, and h is updated
 * in O(n) per flip. The reported optimum is re-evaluated directly at the
 * argmax; exact ties go to the lexicographically smallest vector.
 */
inline BruteForceResult brute_force_opt(const CutInstance& inst) {
    const Index n = inst.size();
    if (n > kMaxBruteForceDimension) {
        throw ResourceError("brute force limited to n <= " + std::to_string(kMaxBruteForceDimension));
    }
    const Eigen::MatrixXd& a = inst.a.dense();
    SignVector x(static_cast<std::size_t>(n), 1);
    Eigen::VectorXd h = a.rowwise().sum();
    double current = h.sum();

    BruteForceResult best{current, x, 1};
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    for (std::uint64_t step = 1; step < total; ++step) {
        // Bit that changes between Gray codes step-1 and step.
        const int bit = std::countr_zero(step);
        const Index k = bit + 1;
        const double xk = x[k];
        current -= 4.0 * xk * (h(k) - a(k, k) * xk);
        h -= 2.0 * xk * a.col(k);
        x[k] = -x[k];
        ++best.evaluations;
        if (current > best.optimum || (current == best.optimum && detail::lex_less(x, best.argmax))) {
            best.optimum = current;
            best.argmax = x;
        }
    }
    best.optimum = inst.value(best.argmax);
    return best;
}

/// All 2^{n-1} distinct cut matrices x x^T, x_1 = +1, in binary-counter order.
inline std::vector<SymMatrix> cut_matrix_vertices(Index n) {
    if (n < 1 || n > 20) throw ResourceError("cut vertex enumeration limited to n <= 20");
    std::vector<SymMatrix> out;
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    out.reserve(total);
    SignVector x(static_cast<std::size_t>(n));
    for (std::uint64_t code = 0; code < total; ++code) {
        x[0] = 1;
        for (Index i = 1; i < n; ++i) x[i] = (code >> (i - 1)) & 1 ? -1 : 1;
        out.push_back(rank1_cut_matrix(x).matrix());
    }
    return out;
}

struct HullMembership {
    bool in_hull = false;
    std::vector<double> weights;  // empty unless in_hull
    double residual = std::numeric_limits<double>::infinity();
    double phase_one_objective = 0.0;
};

namespace detail {

/**
 * Phase-1 simplex for { theta >= 0 : M theta = b } on a dense tableau with
 * one artificial per row and Bland's rule. Returns the sum of artificials at
 * the optimum and fills `theta` with a basic solution.
 */
inline double phase_one_simplex(const Eigen::MatrixXd& m_in, const Eigen::VectorXd& b_in, Eigen::VectorXd& theta,
                                double eps = 1e-12) {
    const Index rows = m_in.rows();
    const Index cols = m_in.cols();
    // Tableau [M | I | b], rows flipped so that b >= 0.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, cols + rows + 1);
    for (Index r = 0; r < rows; ++r) {
        const double s = b_in(r) < 0 ? -1.0 : 1.0;
        t.row(r).head(cols) = s * m_in.row(r);
        t(r, cols + r) = 1.0;
        t(r, cols + rows) = s * b_in(r);
    }
    std::vector<Index> basis(static_cast<std::size_t>(rows));
    for (Index r = 0; r < rows; ++r) basis[r] = cols + r;
    // Objective row: reduced costs of minimizing the artificial sum.
    for (Index r = 0; r < rows; ++r) t.row(rows) -= t.row(r);
    for (Index r = 0; r < rows; ++r) t(rows, cols + r) = 0.0;

    const Index rhs = cols + rows;
    for (int iter = 0; iter < 10000; ++iter) {
        Index enter = -1;
        for (Index c = 0; c < cols + rows; ++c) {
            if (t(rows, c) < -eps) {
                enter = c;
                break;
            }
        }
        if (enter < 0) break;
        Index leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (Index r = 0; r < rows; ++r) {
            if (t(r, enter) > eps) {
                const double ratio = t(r, rhs) / t(r, enter);
                if (leave < 0 || ratio < best_ratio - eps ||
                    (std::abs(ratio - best_ratio) <= eps && basis[r] < basis[leave])) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave < 0) break;  // unbounded cannot happen in phase 1
        t.row(leave) /= t(leave, enter);
        for (Index r = 0; r <= rows; ++r) {
            if (r != leave && t(r, enter) != 0.0) t.row(r) -= t(r, enter) * t.row(leave);
        }
        basis[leave] = enter;
    }
    theta = Eigen::VectorXd::Zero(cols);
    for (Index r = 0; r < rows; ++r) {
        if (basis[r] < cols) theta(basis[r]) = t(r, rhs);
    }
    return -t(rows, rhs);
}

}  // namespace detail

inline constexpr int kDefaultHullCap = 5;

/**
 * Decides whether X lies in the Max-Cut polytope, the convex hull of the
 * cut matrices, by an LP over the explicit vertex list: find theta >= 0
 * with sum theta = 1 and sum theta_k V_k = X on the strict upper triangle.
 */
inline HullMembership mc_membership(const TaCandidate& x, int n_cap = kDefaultHullCap) {
    const Index n = x.size();
    if (n_cap > 8) throw ResourceError("hull membership cap may not exceed n = 8");
    if (n > n_cap) throw ResourceError("hull membership limited to n <= " + std::to_string(n_cap));

    const std::vector<SymMatrix> vertices = cut_matrix_vertices(n);
    const Index k = static_cast<Index>(vertices.size());
    const Index pairs = n * (n - 1) / 2;
    Eigen::MatrixXd m(pairs + 1, k);
    Eigen::VectorXd b(pairs + 1);
    Index row = 0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j, ++row) {
            for (Index c = 0; c < k; ++c) m(row, c) = vertices[c](i, j);
            b(row) = x.matrix()(i, j);
        }
    }
    m.row(pairs).setOnes();
    b(pairs) = 1.0;

    HullMembership out;
    Eigen::VectorXd theta;
    out.phase_one_objective = detail::phase_one_simplex(m, b, theta);
    out.residual = (m * theta - b).cwiseAbs().maxCoeff();
    const double feas_tol = 1e-9;
    out.in_hull = out.phase_one_objective <= feas_tol && theta.minCoeff() >= -1e-10 && out.residual <= 1e-8;
    if (out.in_hull) out.weights.assign(theta.data(), theta.data() + theta.size());
    return out;
}

}  // namespace tacert
