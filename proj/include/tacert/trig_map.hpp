#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "tacert/error.hpp"
#include "tacert/report.hpp"
#include "tacert/sym_matrix.hpp"

namespace tacert {

/// Entries within this distance outside [-1, 1] are clamped; beyond it they are rejected.
inline constexpr double kClampSlack = 1e-12;

namespace detail {

inline double clamp_unit(double x) {
    if (!(std::abs(x) <= 1.0 + kClampSlack)) {
        throw InputError("entry " + format_double(x) + " lies outside [-1, 1]");
    }
    return std::clamp(x, -1.0, 1.0);
}

}  // namespace detail

/// f(x) = (2/pi) asin x. Exact at 0 and +-1.
inline double trig_f(double x) {
    x = detail::clamp_unit(x);
    if (x == 1.0 || x == -1.0) return x;
    return std::asin(x) / std::numbers::pi * 2.0;
}

/// f^{-1}(y) = sin(pi y / 2). Exact at 0 and +-1.
inline double trig_f_inverse(double y) {
    y = detail::clamp_unit(y);
    if (y == 1.0 || y == -1.0) return y;
    return std::sin(std::numbers::pi / 2.0 * y);
}

/// f_lambda(x) = f^{-1}(lambda f(x)) = sin(lambda asin x).
inline double trig_f_lambda(double x, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
    x = detail::clamp_unit(x);
    return std::sin(lambda * std::asin(x));
}

/// Entrywise f; the unit diagonal of an elliptope point maps to exactly 1.
inline SymMatrix f_entrywise(const SymMatrix& m) { return m.map_entries(trig_f); }

inline SymMatrix f_inverse_entrywise(const SymMatrix& m) { return m.map_entries(trig_f_inverse); }

/// Entrywise f_lambda on every entry, diagonal included: a unit diagonal
/// becomes sin(pi lambda / 2). Callers restore the diagonal themselves.
inline SymMatrix f_lambda_entrywise(const SymMatrix& m, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
    return m.map_entries([lambda](double x) { return trig_f_lambda(x, lambda); });
}

/**
 * Candidate member of the trigonometric approximation TA = f(S): unit
 * diagonal, entries in [-1, 1]. Diagonal entries within 1e-12 of 1 are set
 * to 1, and entries up to kClampSlack outside [-1, 1] are clamped; the number
 * of clamped entries is recorded.
 */
class TaCandidate {
public:
    explicit TaCandidate(const SymMatrix& m) : matrix_(normalize(m, clamped_)) {}

    const SymMatrix& matrix() const noexcept { return matrix_; }
    Index size() const noexcept { return matrix_.size(); }
    int clamped_entries() const noexcept { return clamped_; }

private:
    static SymMatrix normalize(const SymMatrix& m, int& clamped) {
        clamped = 0;
        Eigen::MatrixXd out = m.dense();
        for (Index i = 0; i < m.size(); ++i) {
            if (!(std::abs(out(i, i) - 1.0) <= 1e-12)) {
                throw InputError("diagonal entry " + std::to_string(i + 1) + " is " + format_double(out(i, i)) +
                                 ", expected 1");
            }
            out(i, i) = 1.0;
        }
        for (Index j = 0; j < m.size(); ++j) {
            for (Index i = 0; i < m.size(); ++i) {
                if (i == j) continue;
                const double c = detail::clamp_unit(out(i, j));
                if (c != out(i, j)) ++clamped;
                out(i, j) = c;
            }
        }
        clamped /= 2;
        return SymMatrix(out);
    }

    int clamped_ = 0;
    SymMatrix matrix_;
};

struct MembershipVerdict {
    bool in_ta = false;
    double preimage_min_eigenvalue = 0.0;
    double tolerance_used = 0.0;
    SymMatrix preimage;
};

/// X is in TA iff f^{-1}(X) is in the elliptope; the PSD test is the only O(n^3) step.
inline MembershipVerdict ta_membership(const TaCandidate& c, double tol) {
    SymMatrix pre = f_inverse_entrywise(c.matrix());
    const PsdVerdict v = psd_check(pre, tol);
    return {v.is_psd, v.min_eigenvalue, v.tolerance_used, std::move(pre)};
}

inline MembershipVerdict ta_membership(const TaCandidate& c) { return ta_membership(c, 1e-9); }

/// Thrown by the ray scan when its starting point is not in TA.
class NotInTaError : public PreconditionError {
public:
    explicit NotInTaError(double min_eig)
        : PreconditionError("candidate is not in TA: preimage min eigenvalue " + format_double(min_eig)),
          min_eigenvalue_(min_eig) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

struct RayScanReport {
    std::vector<double> lambda_grid;
    std::vector<MembershipVerdict> verdicts;
    bool all_pass = false;
    SymMatrix central_point = SymMatrix::identity(1);

    /// Smallest preimage eigenvalue along the ray.
    double min_eigenvalue() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& v : verdicts) m = std::min(m, v.preimage_min_eigenvalue);
        return m;
    }
};

/// `count` uniform points on [0, 1]; the endpoints are exactly 0 and 1.
inline std::vector<double> uniform_unit_grid(int count) {
    if (count < 2) throw InputError("grid needs at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) g[static_cast<std::size_t>(k)] = static_cast<double>(k) / (count - 1);
    g.back() = 1.0;
    return g;
}

/// lambda X + (1 - lambda) I with the diagonal kept at exactly 1.
inline TaCandidate ray_point(const TaCandidate& c, double lambda) {
    const Index n = c.size();
    return TaCandidate((lambda * c.matrix() + (1.0 - lambda) * SymMatrix::identity(n)).with_diagonal(1.0));
}

/**
 * Checks the segment from c to the identity against the TA membership
 * oracle at `grid_size` uniform values of lambda. Throws NotInTaError if c
 * itself is not in TA.
 */
inline RayScanReport starlike_ray_scan(const TaCandidate& c, int grid_size, double tol) {
    const MembershipVerdict start = ta_membership(c, tol);
    if (!start.in_ta) throw NotInTaError(start.preimage_min_eigenvalue);

    RayScanReport r;
    r.lambda_grid = uniform_unit_grid(grid_size);
    r.central_point = SymMatrix::identity(c.size());
    r.verdicts.reserve(r.lambda_grid.size());
    r.all_pass = true;
    for (double lambda : r.lambda_grid) {
        r.verdicts.push_back(ta_membership(ray_point(c, lambda), tol));
        r.all_pass = r.all_pass && r.verdicts.back().in_ta;
    }
    return r;
}

inline CertificateReport to_certificate(const RayScanReport& scan, std::string kind = "starlike-ray") {
    CertificateReport rep;
    rep.kind = std::move(kind);
    rep.grid = scan.lambda_grid;
    for (std::size_t k = 0; k < scan.verdicts.size(); ++k) {
        rep.add("lambda", scan.lambda_grid[k], scan.verdicts[k].preimage_min_eigenvalue, scan.verdicts[k].in_ta);
    }
    return rep;
}

/**
 * Positivity-preservation scan: for each lambda, the smallest eigenvalue of
 * f_lambda(X) must be >= -tol. Failing (lambda, eigenvalue) pairs are the
 * report's witnesses.
 */
inline CertificateReport lemma_pospres_scan(const ElliptopePoint& x, std::span<const double> lambda_grid, double tol) {
    CertificateReport rep;
    rep.kind = "pospres";
    rep.grid.assign(lambda_grid.begin(), lambda_grid.end());
    for (double lambda : lambda_grid) {
        const PsdVerdict v = psd_check(f_lambda_entrywise(x.matrix(), lambda), tol);
        rep.add("lambda", lambda, v.min_eigenvalue, v.is_psd);
    }
    return rep;
}

/**
 * Largest entrywise gap between f^{-1}(lambda f(X) + (1 - lambda) I) and
 * f_lambda(X) + (1 - sin(pi lambda / 2)) I. The two agree exactly in real
 * arithmetic, which reduces the ray condition to a statement about f_lambda.
 */
inline double ray_decomposition_gap(const ElliptopePoint& x, double lambda) {
    const Index n = x.size();
    const SymMatrix identity = SymMatrix::identity(n);
    const SymMatrix lhs = f_inverse_entrywise(
        (lambda * f_entrywise(x.matrix()) + (1.0 - lambda) * identity).with_diagonal(1.0));
    const SymMatrix rhs =
        f_lambda_entrywise(x.matrix(), lambda) + (1.0 - std::sin(std::numbers::pi * lambda / 2.0)) * identity;
    return max_abs_diff(lhs, rhs);
}

}  // namespace tacert
