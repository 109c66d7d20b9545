#pragma once

// Certification suites shared by `tacert verify` and the acceptance tests.
// Every suite is deterministic in its seed; sample i draws from
// derive_seed(seed, i), never from a shared stream.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tacert/maxcut.hpp"
#include "tacert/random.hpp"
#include "tacert/report.hpp"
#include "tacert/sdp.hpp"
#include "tacert/series.hpp"
#include "tacert/sym_matrix.hpp"
#include "tacert/trig_map.hpp"

namespace tacert {

/// Overrides for a suite; negative values select the suite's default.
struct SuiteConfig {
    std::uint64_t seed = 42;
    int samples = -1;
    int grid = -1;
    double tol = -1.0;
    int max_order = -1;
    long long rounding_samples = -1;
};

namespace detail {

inline int or_default(int v, int d) { return v >= 0 ? v : d; }
inline double or_default(double v, double d) { return v >= 0.0 ? v : d; }

/// Dimension cycling through [lo, hi] and a rank drawn from the task seed.
struct SampleShape {
    Index n;
    Index rank;
    std::uint64_t seed;
};

inline SampleShape sample_shape(std::uint64_t seed, int i, Index lo, Index hi) {
    const Index n = lo + static_cast<Index>(i) % (hi - lo + 1);
    const std::uint64_t task = derive_seed(seed, static_cast<std::uint64_t>(i));
    const Index rank = 1 + static_cast<Index>(mix64(task ^ 0x5bd1e995ULL) % static_cast<std::uint64_t>(n));
    return {n, rank, task};
}

inline std::string shape_label(const SampleShape& s) {
    return "n" + std::to_string(s.n) + "r" + std::to_string(s.rank);
}

}  // namespace detail

/// Positivity preservation of f_lambda over sampled elliptope points, n in [2, 12].
inline CertificateReport lemma_suite(const SuiteConfig& cfg = {}) {
    const int samples = detail::or_default(cfg.samples, 500);
    const int grid_size = detail::or_default(cfg.grid, 11);
    const double tol = detail::or_default(cfg.tol, 1e-9);
    const std::vector<double> grid = uniform_unit_grid(grid_size);

    CertificateReport rep;
    rep.kind = "lemma";
    rep.seed = cfg.seed;
    rep.grid = grid;
    // Histogram of min eigenvalues over every (sample, lambda) pair.
    const std::array<double, 5> edges{-tol, 0.0, 1e-12, 1e-6, 1e-3};
    std::array<long long, 6> hist{};
    for (int i = 0; i < samples; ++i) {
        const auto shape = detail::sample_shape(cfg.seed, i, 2, 12);
        const ElliptopePoint x = sample_elliptope(shape.n, shape.rank, shape.seed);
        const CertificateReport scan = lemma_pospres_scan(x, grid, tol);
        for (const auto& p : scan.points) {
            std::size_t b = 0;
            while (b < edges.size() && p.value >= edges[b]) ++b;
            ++hist[b];
        }
        rep.add(detail::shape_label(shape), i, scan.min_value(), scan.all_pass());
    }
    rep.note("tolerance", tol);
    rep.note("samples", std::to_string(samples));
    rep.note("min_eigenvalue", rep.min_value());
    rep.note("hist_below_-tol", std::to_string(hist[0]));
    rep.note("hist_[-tol,0)", std::to_string(hist[1]));
    rep.note("hist_[0,1e-12)", std::to_string(hist[2]));
    rep.note("hist_[1e-12,1e-6)", std::to_string(hist[3]));
    rep.note("hist_[1e-6,1e-3)", std::to_string(hist[4]));
    rep.note("hist_[1e-3,inf)", std::to_string(hist[5]));
    return rep;
}

/// Ray scans from sampled TA points f(X), n in [2, 10], towards the identity.
inline CertificateReport starlike_suite(const SuiteConfig& cfg = {}) {
    const int samples = detail::or_default(cfg.samples, 200);
    const int grid_size = detail::or_default(cfg.grid, 101);
    const double tol = detail::or_default(cfg.tol, 1e-9);

    CertificateReport rep;
    rep.kind = "starlike";
    rep.seed = cfg.seed;
    rep.grid = uniform_unit_grid(grid_size);
    for (int i = 0; i < samples; ++i) {
        const auto shape = detail::sample_shape(cfg.seed, i, 2, 10);
        const TaCandidate c(f_entrywise(sample_elliptope(shape.n, shape.rank, shape.seed).matrix()));
        const RayScanReport scan = starlike_ray_scan(c, grid_size, tol);
        rep.add(detail::shape_label(shape), i, scan.min_eigenvalue(), scan.all_pass);
    }
    rep.note("tolerance", tol);
    rep.note("samples", std::to_string(samples));
    rep.note("min_eigenvalue", rep.min_value());
    return rep;
}

/// f^{-1}(lambda f(X) + (1 - lambda) I) against f_lambda(X) + (1 - sin(pi lambda/2)) I.
inline CertificateReport decomposition_suite(const SuiteConfig& cfg = {}) {
    const int samples = detail::or_default(cfg.samples, 100);
    const double tol = detail::or_default(cfg.tol, 1e-12);

    CertificateReport rep;
    rep.kind = "decomposition";
    rep.seed = cfg.seed;
    for (int i = 0; i < samples; ++i) {
        const auto shape = detail::sample_shape(cfg.seed, i, 2, 12);
        Rng rng = make_rng(mix64(shape.seed));
        const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double gap = ray_decomposition_gap(sample_elliptope(shape.n, shape.rank, shape.seed), lambda);
        rep.add(detail::shape_label(shape), lambda, gap, gap <= tol);
    }
    rep.note("tolerance", tol);
    rep.note("max_gap", rep.max_value());
    return rep;
}

/// Coefficient recurrence: nonnegativity, series accuracy, ODE residual, odd-integer truncation.
inline CertificateReport coeffs_suite(const SuiteConfig& cfg = {}) {
    const int grid_size = detail::or_default(cfg.grid, 101);
    const int max_order = detail::or_default(cfg.max_order, 500);
    constexpr int kSeriesOrder = 400;
    constexpr double kSeriesTol = 1e-9;
    constexpr double kOdeTol = 1e-10;
    constexpr double kPolyTol = 1e-12;

    CertificateReport rep;
    rep.kind = "coeffs";
    rep.seed = cfg.seed;
    rep.grid = uniform_unit_grid(grid_size);

    const CertificateReport nonneg = nonnegativity_certificate(rep.grid, max_order);
    for (const auto& p : nonneg.points) rep.add("min_coeff", p.parameter, p.value, p.pass);

    const std::vector<double> lambdas = uniform_unit_grid(11);
    for (double lambda : lambdas) {
        const CoefficientTable t = taylor_coeffs(lambda, kSeriesOrder);
        double worst = 0.0;
        for (int k = 0; k <= 190; ++k) {
            const double x = (k - 95) / 100.0;
            worst = std::max(worst, std::abs(series_eval(t, x) - f_lambda_closed(x, lambda)));
        }
        rep.add("series_error", lambda, worst, worst <= kSeriesTol);
    }
    for (double lambda : lambdas) {
        double worst = 0.0;
        for (int k = 0; k <= 180; ++k) {
            const double x = (k - 90) / 100.0;
            worst = std::max(worst, std::abs(ode_residual(x, lambda)));
        }
        rep.add("ode_residual", lambda, worst, worst <= kOdeTol);
    }
    for (int m : {1, 3, 5, 7}) {
        const CertificateReport trunc = root_structure_check(m, max_order);
        for (const auto& p : trunc.points) rep.add(p.label, p.parameter, p.value, p.pass);
    }
    const std::array<std::pair<int, std::function<double(double)>>, 2> polys{{
        {3, [](double x) { return 3 * x - 4 * x * x * x; }},
        {5, [](double x) { return 5 * x - 20 * x * x * x + 16 * x * x * x * x * x; }},
    }};
    for (const auto& [m, poly] : polys) {
        const CoefficientTable t = taylor_coeffs(m, max_order);
        double worst = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double x = (k - 100) / 100.0;
            worst = std::max(worst, std::abs(series_eval(t, x, 0.0) - poly(x)));
        }
        rep.add("polynomial_error", m, worst, worst <= kPolyTol);
    }
    rep.note("max_order", std::to_string(max_order));
    rep.note("min_coefficient", nonneg.min_value());
    return rep;
}

/// Random PSD objective B B^T / n with Gaussian B, n in [2, 12].
inline CutInstance random_psd_instance(Index n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd b(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) b(i, j) = normal(rng);
    }
    return CutInstance(SymMatrix(b * b.transpose() / static_cast<double>(n)));
}

/// Unit-weight triangle as a PSD (Laplacian) cut objective.
inline CutInstance triangle_cut_instance() {
    Graph g;
    g.vertex_count = 3;
    add_edge(g, 1, 2, 1.0);
    add_edge(g, 1, 3, 1.0);
    add_edge(g, 2, 3, 1.0);
    return graph_to_objective(g, ObjectiveForm::laplacian);
}

/// (2/pi) SDP <= exact optimum <= SDP on random PSD objectives plus the triangle.
inline CertificateReport sandwich_suite(const SuiteConfig& cfg = {}) {
    const int samples = detail::or_default(cfg.samples, 100);
    const int min_converged = samples - samples / 20;  // 95 of 100

    CertificateReport rep;
    rep.kind = "sandwich";
    rep.seed = cfg.seed;
    int converged = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const auto shape = detail::sample_shape(cfg.seed, i, 2, 12);
        const CutInstance inst = random_psd_instance(shape.n, shape.seed);
        SdpOptions opt;
        opt.seed = mix64(shape.seed);
        const SandwichReport s = sandwich_report(inst, opt);
        const bool upper = s.brute_value <= s.sdp_value + s.tolerance;
        const bool lower = s.lower_bound <= s.brute_value;
        if (s.sdp_converged) {
            ++converged;
            min_ratio = std::min(min_ratio, s.ratio);
        }
        rep.add("n" + std::to_string(shape.n), i, s.ratio, s.sdp_converged ? (upper && lower) : lower);
    }
    rep.add("converged_runs", samples, converged, converged >= min_converged);

    const CutInstance tri = triangle_cut_instance();
    const SandwichReport t = sandwich_report(tri, SdpOptions{.seed = cfg.seed});
    const bool tri_ok = std::abs(t.sdp_value - 2.25) <= 1e-4 && t.brute_value == 2.0 &&
                        std::abs(t.ratio - 8.0 / 9.0) <= 1e-4 && t.ratio >= 2.0 / std::numbers::pi && t.holds;
    rep.add("triangle_sdp", 2.25, t.sdp_value, tri_ok);
    rep.note("converged", std::to_string(converged) + "/" + std::to_string(samples));
    rep.note("min_ratio", min_ratio);
    rep.note("two_over_pi", 2.0 / std::numbers::pi);
    rep.note("triangle_brute", t.brute_value);
    rep.note("triangle_ratio", t.ratio);
    return rep;
}

/// The 3x3 matrix with unit diagonal and off-diagonal -1/2.
inline SymMatrix negative_triangle_matrix() {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(3, 3, -0.5);
    m.diagonal().setOnes();
    return SymMatrix(m);
}

/// Sampled TA points at n in {3, 4, 5} lie in the Max-Cut polytope.
inline CertificateReport hull_suite(const SuiteConfig& cfg = {}) {
    const int samples = detail::or_default(cfg.samples, 200);
    const double tol = detail::or_default(cfg.tol, 1e-9);

    CertificateReport rep;
    rep.kind = "hull";
    rep.seed = cfg.seed;
    for (int i = 0; i < samples; ++i) {
        const auto shape = detail::sample_shape(cfg.seed, i, 3, 5);
        const TaCandidate c(f_entrywise(sample_elliptope(shape.n, shape.rank, shape.seed).matrix()));
        const bool in_ta = ta_membership(c, tol).in_ta;
        const HullMembership h = mc_membership(c);
        rep.add(detail::shape_label(shape), i, h.residual, in_ta && h.in_hull);
    }
    const TaCandidate neg(negative_triangle_matrix());
    const MembershipVerdict neg_ta = ta_membership(neg, tol);
    const HullMembership neg_mc = mc_membership(neg);
    rep.add("negative_control", 0.0, neg_ta.preimage_min_eigenvalue, !neg_ta.in_ta && !neg_mc.in_hull);
    rep.note("negative_control_phase_one", neg_mc.phase_one_objective);
    return rep;
}

/// Hyperplane-rounding sign correlations against f(X), n in [2, 6].
inline CertificateReport rounding_suite(const SuiteConfig& cfg = {}) {
    const int samples = detail::or_default(cfg.samples, 20);
    const long long draws = cfg.rounding_samples > 0 ? cfg.rounding_samples : 1'000'000;
    const double tol = detail::or_default(cfg.tol, 3e-3);
    constexpr int kFailureBudget = 1;

    CertificateReport rep;
    rep.kind = "rounding";
    rep.seed = cfg.seed;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto shape = detail::sample_shape(cfg.seed, i, 2, 6);
        const Eigen::MatrixXd v = elliptope_factor(shape.n, shape.rank, shape.seed);
        const SymMatrix expected = f_entrywise(gram_point(v).matrix());
        const CutInstance none(SymMatrix::zero(shape.n));
        const RoundingResult r =
            hyperplane_rounding(none, v, static_cast<std::uint64_t>(draws), mix64(shape.seed));
        int misses = 0;
        double dev = 0.0;
        for (Index a = 0; a < shape.n; ++a) {
            for (Index b = a + 1; b < shape.n; ++b) {
                const double d = std::abs(r.empirical_mean_matrix(a, b) - expected(a, b));
                dev = std::max(dev, d);
                if (d > tol) ++misses;
            }
        }
        worst = std::max(worst, dev);
        rep.add(detail::shape_label(shape), i, dev, misses <= kFailureBudget);
    }
    rep.note("draws_per_point", std::to_string(draws));
    rep.note("tolerance", tol);
    rep.note("max_deviation", worst);
    return rep;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"lemma", "starlike", "coeffs", "sandwich", "hull", "rounding"};
    return names;
}

/// Runs a suite by name. `starlike` also runs the decomposition identity. Throws InputError on unknown names.
inline std::vector<CertificateReport> run_suite(std::string_view name, const SuiteConfig& cfg) {
    if (name == "lemma") return {lemma_suite(cfg)};
    if (name == "starlike") return {starlike_suite(cfg), decomposition_suite(SuiteConfig{.seed = cfg.seed})};
    if (name == "coeffs") return {coeffs_suite(cfg)};
    if (name == "sandwich") return {sandwich_suite(cfg)};
    if (name == "hull") return {hull_suite(cfg)};
    if (name == "rounding") return {rounding_suite(cfg)};
    std::string valid;
    for (const auto& n : suite_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw InputError("unknown suite '" + std::string(name) + "'; valid suites: " + valid);
}

}  // namespace tacert
