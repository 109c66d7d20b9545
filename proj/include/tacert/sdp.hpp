#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tacert/error.hpp"
#include "tacert/maxcut.hpp"
#include "tacert/random.hpp"
#include "tacert/sym_matrix.hpp"

namespace tacert {

struct SdpOptions {
    Index rank = 0;  // 0 selects n
    std::uint64_t seed = 42;
    double tol = 1e-8;
    int restarts = 5;
    int max_iterations = 100000;
};

struct SdpConvergence {
    int iterations = 0;  // of the returned run
    double gradient_norm = 0.0;
    int restarts_used = 0;
    bool converged = false;
};

/**
 * Result of maximizing constant + <A, X> over the elliptope. `x_matrix` is
 * V V^T for the unit-row factor `gram_factor`. When `convergence.converged`
 * is false, `value` is only a lower bound on the true maximum.
 */
struct SdpSolution {
    double value = 0.0;
    Eigen::MatrixXd gram_factor;
    ElliptopePoint x_matrix;
    SdpConvergence convergence;
    CutInstance instance;
};

namespace detail {

inline void normalize_rows(Eigen::MatrixXd& v) {
    for (Index i = 0; i < v.rows(); ++i) v.row(i) /= v.row(i).norm();
}

/// Row-wise projection of G onto the tangent space of the product of spheres at V.
inline Eigen::MatrixXd tangent_projection(const Eigen::MatrixXd& g, const Eigen::MatrixXd& v) {
    const Eigen::VectorXd radial = (g.cwiseProduct(v)).rowwise().sum();
    return g - radial.asDiagonal() * v;
}

struct AscentRun {
    Eigen::MatrixXd v;
    double value = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
};

inline AscentRun projected_ascent(const Eigen::MatrixXd& a, Eigen::MatrixXd v, double tol, int max_iterations) {
    constexpr double kArmijo = 1e-4;
    AscentRun run;
    Eigen::MatrixXd av = a * v;
    double value = (v.cwiseProduct(av)).sum();
    for (int it = 0; it < max_iterations; ++it) {
        const Eigen::MatrixXd grad = tangent_projection(2.0 * av, v);
        const double gnorm2 = grad.squaredNorm();
        run.gradient_norm = std::sqrt(gnorm2);
        run.iterations = it;
        if (run.gradient_norm <= tol * (1.0 + std::abs(value))) {
            run.converged = true;
            break;
        }
        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
            Eigen::MatrixXd trial = v + step * grad;
            normalize_rows(trial);
            Eigen::MatrixXd trial_av = a * trial;
            const double trial_value = (trial.cwiseProduct(trial_av)).sum();
            if (trial_value >= value + kArmijo * step * gnorm2) {
                v = std::move(trial);
                av = std::move(trial_av);
                value = trial_value;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // line search exhausted at machine precision
        run.iterations = it + 1;
    }
    run.v = std::move(v);
    run.value = value;
    return run;
}

}  // namespace detail

/**
 * Maximizes constant + <A, X> over the elliptope through the factorization
 * X = V V^T, V with unit rows. Each restart runs projected gradient ascent
 * from an independent Gaussian start (rows renormalized after every step,
 * backtracking from step 1 by halving with Armijo constant 1e-4) until the
 * projected gradient norm is at most tol (1 + |value|). The best run wins,
 * preferring converged runs.
 */
inline SdpSolution elliptope_maximize(const CutInstance& inst, const SdpOptions& opt = {}) {
    const Index n = inst.size();
    const Index rank = opt.rank == 0 ? n : opt.rank;
    if (rank < 1 || rank > n) throw InputError("elliptope_maximize: rank must lie in [1, n]");
    if (!(opt.tol > 0.0)) throw InputError("elliptope_maximize: tol must be positive");
    if (opt.restarts < 1) throw InputError("elliptope_maximize: restarts must be at least 1");
    if (!inst.a.all_finite()) throw InputError("objective has non-finite entries");

    const Eigen::MatrixXd& a = inst.a.dense();
    detail::AscentRun best;
    bool have_best = false;
    for (int r = 0; r < opt.restarts; ++r) {
        Rng rng = make_rng(derive_seed(opt.seed, static_cast<std::uint64_t>(r)));
        detail::AscentRun run =
            detail::projected_ascent(a, random_unit_rows(n, rank, rng), opt.tol, opt.max_iterations);
        const bool better = !have_best || (run.converged && !best.converged) ||
                            (run.converged == best.converged && run.value > best.value);
        if (better) {
            best = std::move(run);
            have_best = true;
        }
    }

    ElliptopePoint point = gram_point(best.v);
    SdpConvergence conv{best.iterations, best.gradient_norm, opt.restarts, best.converged};
    const double value = inst.value(point.matrix());
    return SdpSolution{value, std::move(best.v), std::move(point), conv, inst};
}

struct RoundingResult {
    SignVector best_cut;
    double best_value = 0.0;
    SymMatrix empirical_mean_matrix;
    std::uint64_t samples = 0;
};

/**
 * Random-hyperplane rounding: for Gaussian g, x = sign(V g) with sign(0) = +1.
 * Tracks the best objective value and the running mean of x x^T, whose
 * expectation is f(V V^T) entrywise.
 */
inline RoundingResult hyperplane_rounding(const CutInstance& inst, const Eigen::MatrixXd& v, std::uint64_t samples,
                                          std::uint64_t seed) {
    if (samples < 1) throw InputError("hyperplane_rounding: samples must be at least 1");
    if (v.rows() != inst.size()) throw InputError("hyperplane_rounding: factor and instance sizes differ");
    const Index n = v.rows();
    const Index r = v.cols();
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    // Sign agreements counted exactly in integers.
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> agree =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    Eigen::VectorXd g(r);
    SignVector x(static_cast<std::size_t>(n));
    RoundingResult out{SignVector{}, -std::numeric_limits<double>::infinity(), SymMatrix::zero(n), samples};
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (Index k = 0; k < r; ++k) g(k) = normal(rng);
        const Eigen::VectorXd proj = v * g;
        for (Index i = 0; i < n; ++i) x[i] = proj(i) >= 0.0 ? 1 : -1;
        for (Index j = 0; j < n; ++j) {
            for (Index i = j + 1; i < n; ++i) agree(i, j) += x[i] * x[j];
        }
        const double val = inst.value(x);
        if (val > out.best_value) {
            out.best_value = val;
            out.best_cut = x;
        }
    }
    Eigen::MatrixXd mean = Eigen::MatrixXd::Identity(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = j + 1; i < n; ++i) {
            mean(i, j) = static_cast<double>(agree(i, j)) / static_cast<double>(samples);
            mean(j, i) = mean(i, j);
        }
    }
    out.empirical_mean_matrix = SymMatrix(mean);
    return out;
}

inline RoundingResult hyperplane_rounding(const SdpSolution& sol, std::uint64_t samples, std::uint64_t seed) {
    return hyperplane_rounding(sol.instance, sol.gram_factor, samples, seed);
}

struct SandwichReport {
    double sdp_value = 0.0;
    double brute_value = 0.0;
    double lower_bound = 0.0;  // (2/pi) sdp_value
    double ratio = 0.0;        // brute_value / sdp_value
    double tolerance = 0.0;
    bool sdp_converged = false;
    /// False when the SDP did not converge; only the 2/pi leg is then checked.
    bool conclusive = false;
    bool holds = false;
};

/**
 * (2/pi) max_S <A, X> <= max over cuts <= max_S <A, X> for A PSD. The
 * tolerance defaults to 1e-6 (1 + |sdp_value|).
 */
inline SandwichReport sandwich_report(const CutInstance& inst, const SdpOptions& opt = {}, double tol = -1.0) {
    const PsdVerdict psd = psd_check(inst.a);
    if (!psd.is_psd) {
        throw InputError("sandwich bound requires a positive semidefinite objective (min eigenvalue " +
                         format_double(psd.min_eigenvalue) + ")");
    }
    const SdpSolution sol = elliptope_maximize(inst, opt);
    const BruteForceResult brute = brute_force_opt(inst);

    SandwichReport r;
    r.sdp_value = sol.value;
    r.brute_value = brute.optimum;
    r.lower_bound = 2.0 / std::numbers::pi * sol.value;
    r.ratio = sol.value != 0.0 ? brute.optimum / sol.value : 1.0;
    r.tolerance = tol >= 0.0 ? tol : 1e-6 * (1.0 + std::abs(sol.value));
    r.sdp_converged = sol.convergence.converged;
    r.conclusive = r.sdp_converged;
    const bool upper = r.brute_value <= r.sdp_value + r.tolerance;
    const bool lower = r.lower_bound <= r.brute_value + r.tolerance;
    // A non-converged value under-estimates the maximum: the 2/pi leg stays
    // sound, the upper leg does not.
    r.holds = r.conclusive ? (upper && lower) : lower;
    return r;
}

}  // namespace tacert
