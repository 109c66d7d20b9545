#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tacert/error.hpp"
#include "tacert/random.hpp"

namespace tacert {

using Index = Eigen::Index;

/// Largest dimension accepted anywhere in the library.
inline constexpr Index kMaxDimension = 256;

/// Shortest round-trip-safe text for a double, same as printf("%.17g").
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/**
 * Dense real symmetric matrix.
 *
 * Construction symmetrizes its argument as (M + M^T) / 2, so entry (i, j) and
 * entry (j, i) are bitwise equal afterwards. Dimension must lie in
 * [1, kMaxDimension].
 */
class SymMatrix {
public:
    explicit SymMatrix(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols()) {
            throw InputError("matrix is not square (" + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ")");
        }
        check_dimension(m.rows());
        data_ = 0.5 * (m + m.transpose());
    }

    static SymMatrix identity(Index n) {
        check_dimension(n);
        return SymMatrix(Eigen::MatrixXd::Identity(n, n));
    }

    static SymMatrix zero(Index n) {
        check_dimension(n);
        return SymMatrix(Eigen::MatrixXd::Zero(n, n));
    }

    Index size() const noexcept { return data_.rows(); }
    double operator()(Index i, Index j) const { return data_(i, j); }
    const Eigen::MatrixXd& dense() const noexcept { return data_; }

    double max_abs() const { return data_.cwiseAbs().maxCoeff(); }
    bool all_finite() const { return data_.allFinite(); }

    /// Applies `fn` to every entry (including the diagonal).
    template <typename Fn>
    SymMatrix map_entries(Fn&& fn) const {
        Eigen::MatrixXd out(size(), size());
        for (Index j = 0; j < size(); ++j) {
            for (Index i = j; i < size(); ++i) {
                out(i, j) = fn(data_(i, j));
                out(j, i) = out(i, j);
            }
        }
        return SymMatrix(out);
    }

    /// Copy with every diagonal entry set to `value`.
    SymMatrix with_diagonal(double value) const {
        Eigen::MatrixXd out = data_;
        out.diagonal().setConstant(value);
        return SymMatrix(out);
    }

    /// Frobenius inner product <A, B>.
    double dot(const SymMatrix& other) const {
        check_same_size(other);
        return data_.cwiseProduct(other.data_).sum();
    }

    friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
        a.check_same_size(b);
        return SymMatrix(a.data_ + b.data_);
    }
    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
        a.check_same_size(b);
        return SymMatrix(a.data_ - b.data_);
    }
    friend SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.data_); }

    friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
        return a.size() == b.size() && a.data_ == b.data_;
    }

private:
    static void check_dimension(Index n) {
        if (n < 1) throw InputError("matrix dimension must be at least 1");
        if (n > kMaxDimension) {
            throw InputError("matrix dimension " + std::to_string(n) + " exceeds the supported maximum " +
                             std::to_string(kMaxDimension));
        }
    }

    void check_same_size(const SymMatrix& other) const {
        if (other.size() != size()) throw InputError("matrix dimensions differ");
    }

    Eigen::MatrixXd data_;
};

/// Maximum absolute entrywise difference.
inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
    if (a.size() != b.size()) throw InputError("matrix dimensions differ");
    return (a.dense() - b.dense()).cwiseAbs().maxCoeff();
}

struct PsdVerdict {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    double tolerance_used = 0.0;
};

/// 1e-9 * max(1, max |entry|): eigensolver backward error scales with the norm.
inline double default_psd_tol(const SymMatrix& m) { return 1e-9 * std::max(1.0, m.max_abs()); }

/// Smallest eigenvalue by a full symmetric eigensolve; PSD iff it is >= -tol.
inline PsdVerdict psd_check(const SymMatrix& m, double tol) {
    if (!(tol >= 0.0)) throw InputError("psd tolerance must be nonnegative");
    if (!m.all_finite()) throw InputError("matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw InputError("symmetric eigensolver did not converge");
    const double min_eig = solver.eigenvalues()(0);
    return {min_eig >= -tol, min_eig, tol};
}

inline PsdVerdict psd_check(const SymMatrix& m) { return psd_check(m, default_psd_tol(m)); }

/// A point of the elliptope: PSD with diagonal exactly 1.
class ElliptopePoint {
public:
    /// Validates `m`. Diagonal entries within 1e-12 of 1 are pinned to 1.
    explicit ElliptopePoint(const SymMatrix& m) : ElliptopePoint(m, default_psd_tol(m)) {}

    ElliptopePoint(const SymMatrix& m, double psd_tol) : matrix_(pin_unit_diagonal(m)) {
        const PsdVerdict v = psd_check(matrix_, psd_tol);
        if (!v.is_psd) {
            throw InputError("matrix is not positive semidefinite (min eigenvalue " +
                             format_double(v.min_eigenvalue) + ")");
        }
        // PSD 2x2 principal minors bound off-diagonal entries by 1 + tol.
        if (matrix_.max_abs() > 1.0 + psd_tol + 1e-12) {
            throw InputError("elliptope entry outside [-1, 1]");
        }
    }

    const SymMatrix& matrix() const noexcept { return matrix_; }
    Index size() const noexcept { return matrix_.size(); }

private:
    static SymMatrix pin_unit_diagonal(const SymMatrix& m) {
        for (Index i = 0; i < m.size(); ++i) {
            if (!(std::abs(m(i, i) - 1.0) <= 1e-12)) {
                throw InputError("diagonal entry " + std::to_string(i + 1) + " is " + format_double(m(i, i)) +
                                 ", expected 1");
            }
        }
        return m.with_diagonal(1.0);
    }

    SymMatrix matrix_;
};

/// Sign vector with entries in {-1, +1}.
using SignVector = std::vector<int>;

inline void check_sign_vector(std::span<const int> x) {
    if (x.empty()) throw InputError("sign vector is empty");
    for (int v : x) {
        if (v != 1 && v != -1) throw InputError("sign vector entries must be +1 or -1");
    }
}

/// The cut matrix x x^T.
inline ElliptopePoint rank1_cut_matrix(std::span<const int> x) {
    check_sign_vector(x);
    const auto n = static_cast<Index>(x.size());
    Eigen::MatrixXd m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) m(i, j) = static_cast<double>(x[i] * x[j]);
    }
    return ElliptopePoint(SymMatrix(m));
}

/// Row-normalized Gaussian factor V (n x rank); used by the sampler and the SDP solver.
inline Eigen::MatrixXd random_unit_rows(Index n, Index rank, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd v(n, rank);
    for (Index i = 0; i < n; ++i) {
        double norm = 0.0;
        do {
            for (Index k = 0; k < rank; ++k) v(i, k) = normal(rng);
            norm = v.row(i).norm();
        } while (norm == 0.0);
        v.row(i) /= norm;
    }
    return v;
}

/// The unit-row Gaussian factor V behind sample_elliptope(n, rank, seed).
inline Eigen::MatrixXd elliptope_factor(Index n, Index rank, std::uint64_t seed) {
    if (n < 1) throw InputError("sample_elliptope: n must be at least 1");
    if (n > kMaxDimension) throw InputError("sample_elliptope: n exceeds the supported maximum");
    if (rank < 1 || rank > n) throw InputError("sample_elliptope: rank must lie in [1, n]");
    Rng rng = make_rng(seed);
    return random_unit_rows(n, rank, rng);
}

/// V V^T for a unit-row factor, with the diagonal set to exactly 1.
inline ElliptopePoint gram_point(const Eigen::MatrixXd& v) {
    Eigen::MatrixXd x = v * v.transpose();
    x.diagonal().setOnes();
    // Clip ulp-level overshoot of |<v_i, v_j>| beyond 1.
    x = x.cwiseMax(-1.0).cwiseMin(1.0);
    return ElliptopePoint(SymMatrix(x));
}

/**
 * Samples the elliptope as V V^T with V an n x rank matrix of independent
 * standard normals whose rows are scaled to unit length. The diagonal is set
 * to exactly 1 after the product. Deterministic in (n, rank, seed).
 */
inline ElliptopePoint sample_elliptope(Index n, Index rank, std::uint64_t seed) {
    return gram_point(elliptope_factor(n, rank, seed));
}

namespace detail {

struct LineCursor {
    std::string text;
    int line = 0;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
    }
    bool at_end() {
        skip_space();
        return pos >= text.size();
    }
    int column() const { return static_cast<int>(pos) + 1; }

    template <typename T>
    T read(const char* what) {
        skip_space();
        if (pos >= text.size()) throw ParseError(std::string("expected ") + what, line, column());
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        // from_chars rejects a leading '+'.
        if (*first == '+' && first + 1 < last) ++first;
        T value{};
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || (ptr < last && *ptr != ' ' && *ptr != '\t' && *ptr != '\r')) {
            throw ParseError(std::string("malformed ") + what, line, column());
        }
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }
};

inline bool next_content_line(std::istream& in, LineCursor& cur) {
    while (std::getline(in, cur.text)) {
        ++cur.line;
        cur.pos = 0;
        if (!cur.at_end() && cur.text[cur.pos] != '#') return true;
    }
    return false;
}

}  // namespace detail

/**
 * Reads the dense matrix text format: a line holding n, then n lines of n
 * whitespace-separated decimals. Blank lines and lines starting with '#' are
 * skipped. The result is symmetrized.
 */
inline SymMatrix read_dense_matrix(std::istream& in) {
    detail::LineCursor cur;
    if (!detail::next_content_line(in, cur)) throw ParseError("missing dimension line", cur.line + 1, 1);
    const auto n = cur.read<long long>("dimension");
    if (!cur.at_end()) throw ParseError("trailing characters after dimension", cur.line, cur.column());
    if (n < 1 || n > kMaxDimension) {
        throw ParseError("dimension " + std::to_string(n) + " outside [1, " + std::to_string(kMaxDimension) + "]",
                         cur.line, 1);
    }
    Eigen::MatrixXd m(n, n);
    for (Index i = 0; i < n; ++i) {
        if (!detail::next_content_line(in, cur)) {
            throw ParseError("expected row " + std::to_string(i + 1) + " of " + std::to_string(n), cur.line + 1, 1);
        }
        for (Index j = 0; j < n; ++j) {
            const double v = cur.read<double>("matrix entry");
            if (!std::isfinite(v)) throw ParseError("non-finite matrix entry", cur.line, cur.column());
            m(i, j) = v;
        }
        if (!cur.at_end()) throw ParseError("too many entries in row", cur.line, cur.column());
    }
    if (detail::next_content_line(in, cur)) throw ParseError("unexpected content after matrix", cur.line, 1);
    return SymMatrix(m);
}

inline void write_dense_matrix(std::ostream& out, const SymMatrix& m) {
    out << m.size() << '\n';
    for (Index i = 0; i < m.size(); ++i) {
        for (Index j = 0; j < m.size(); ++j) {
            if (j > 0) out << ' ';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

}  // namespace tacert
