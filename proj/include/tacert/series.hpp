#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tacert/error.hpp"
#include "tacert/report.hpp"

namespace tacert {

inline constexpr int kMaxSeriesOrder = 1'000'000;
inline constexpr int kDefaultSeriesOrder = 400;
inline constexpr double kDefaultSeriesMargin = 0.05;

/**
 * Taylor coefficients a_0..a_N of f_lambda(x) = sin(lambda asin x) at x = 0.
 *
 * Generated by a_{n+2} = (n^2 - lambda^2) a_n / ((n+2)(n+1)) from a_0 = 0,
 * a_1 = lambda. Even-index coefficients are exactly zero; for lambda in
 * [0, 1] every coefficient is nonnegative.
 */
class CoefficientTable {
public:
    CoefficientTable(double lambda, int max_order) : lambda_(lambda), coeffs_(checked_size(max_order), 0.0) {
        if (!std::isfinite(lambda)) throw InputError("lambda must be finite");
        coeffs_[1] = lambda;
        for (int n = 1; n + 2 <= max_order; n += 2) {
            const double nn = static_cast<double>(n);
            // Numerator first: at integer lambda this keeps a_n integral and exact.
            coeffs_[n + 2] = (nn * nn - lambda * lambda) * coeffs_[n] / ((nn + 2.0) * (nn + 1.0));
        }
    }

    double lambda() const noexcept { return lambda_; }
    int max_order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double operator[](int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }

private:
    static std::size_t checked_size(int max_order) {
        if (max_order < 1) throw InputError("max_order must be at least 1");
        if (max_order > kMaxSeriesOrder) {
            throw ResourceError("max_order " + std::to_string(max_order) + " exceeds " +
                                std::to_string(kMaxSeriesOrder));
        }
        return static_cast<std::size_t>(max_order) + 1;
    }

    double lambda_;
    std::vector<double> coeffs_;
};

inline CoefficientTable taylor_coeffs(double lambda, int max_order = kDefaultSeriesOrder) {
    return CoefficientTable(lambda, max_order);
}

/// Horner evaluation of the truncated series. |x| must not exceed 1 - margin.
inline double series_eval(const CoefficientTable& t, double x, double margin = kDefaultSeriesMargin) {
    if (!(std::abs(x) <= 1.0 - margin)) {
        throw InputError("series_eval: |x| = " + format_double(std::abs(x)) + " exceeds 1 - margin");
    }
    const auto c = t.coeffs();
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

// Closed forms of f_lambda and its first two derivatives on (-1, 1).

inline double f_lambda_closed(double x, double lambda) { return std::sin(lambda * std::asin(x)); }

inline double f_lambda_first_derivative(double x, double lambda) {
    return lambda / std::sqrt(1.0 - x * x) * std::cos(lambda * std::asin(x));
}

inline double f_lambda_second_derivative(double x, double lambda) {
    const double s = 1.0 - x * x;
    const double theta = lambda * std::asin(x);
    return x / s * (lambda * std::cos(theta) / std::sqrt(s)) - lambda * lambda / s * std::sin(theta);
}

/// (1 - x^2) f'' - x f' + lambda^2 f evaluated from the closed forms.
inline double ode_residual(double x, double lambda) {
    return (1.0 - x * x) * f_lambda_second_derivative(x, lambda) - x * f_lambda_first_derivative(x, lambda) +
           lambda * lambda * f_lambda_closed(x, lambda);
}

/// Every a_n(lambda), lambda on the grid, must be >= 0 exactly.
inline CertificateReport nonnegativity_certificate(std::span<const double> lambda_grid, int max_order) {
    CertificateReport rep;
    rep.kind = "coeff-nonnegativity";
    rep.grid.assign(lambda_grid.begin(), lambda_grid.end());
    double overall = std::numeric_limits<double>::infinity();
    for (double lambda : lambda_grid) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda grid must lie in [0, 1]");
        const CoefficientTable t(lambda, max_order);
        double lo = std::numeric_limits<double>::infinity();
        for (double a : t.coeffs()) lo = std::min(lo, a);
        overall = std::min(overall, lo);
        rep.add("lambda", lambda, lo, lo >= 0.0);
    }
    rep.note("max_order", std::to_string(max_order));
    rep.note("min_coefficient", overall);
    return rep;
}

/**
 * At an odd integer lambda = m the factor (n^2 - m^2) vanishes at n = m, so
 * f_m is the degree-m polynomial with sin(m t) = f_m(sin t). Checks
 * a_n(m) == 0 for n > m and a_n(0) == 0 for all n, both exactly.
 */
inline CertificateReport root_structure_check(int odd_m, int max_order) {
    if (odd_m <= 0 || odd_m % 2 == 0) throw InputError("root_structure_check: m must be an odd positive integer");
    CertificateReport rep;
    rep.kind = "coeff-truncation";
    const CoefficientTable at_m(static_cast<double>(odd_m), max_order);
    const CoefficientTable at_zero(0.0, max_order);
    double tail = 0.0;
    for (int n = odd_m + 1; n <= at_m.max_order(); ++n) tail = std::max(tail, std::abs(at_m[n]));
    rep.add("tail_at_m", odd_m, tail, tail == 0.0);
    double zero_max = 0.0;
    for (double a : at_zero.coeffs()) zero_max = std::max(zero_max, std::abs(a));
    rep.add("all_at_zero", 0.0, zero_max, zero_max == 0.0);
    for (int n = 1; n <= std::min(odd_m, at_m.max_order()); n += 2) {
        rep.note("a" + std::to_string(n), at_m[n]);
    }
    return rep;
}

}  // namespace tacert
