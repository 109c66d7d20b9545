#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tacert/error.hpp"
#include "tacert/sym_matrix.hpp"

namespace tacert {

/// One evaluated point of a scan: `parameter` is the scanned coordinate
/// (lambda, sample index, ...), `value` the measured quantity.
struct CertificatePoint {
    std::string label;
    double parameter = 0.0;
    double value = 0.0;
    bool pass = true;
};

/**
 * Structured pass/fail record of a property scan.
 *
 * `points` holds every evaluated point in deterministic order; `witnesses()`
 * are the failing ones. `summary` carries free-form key/value statistics.
 */
struct CertificateReport {
    std::string kind;
    std::uint64_t seed = 0;
    std::vector<double> grid;
    std::vector<CertificatePoint> points;
    std::vector<std::pair<std::string, std::string>> summary;

    bool all_pass() const {
        return std::all_of(points.begin(), points.end(), [](const CertificatePoint& p) { return p.pass; });
    }

    std::vector<CertificatePoint> witnesses() const {
        std::vector<CertificatePoint> out;
        std::copy_if(points.begin(), points.end(), std::back_inserter(out),
                     [](const CertificatePoint& p) { return !p.pass; });
        return out;
    }

    /// Smallest `value` over all points (+inf when empty).
    double min_value() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& p : points) m = std::min(m, p.value);
        return m;
    }

    double max_value() const {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& p : points) m = std::max(m, p.value);
        return m;
    }

    void add(std::string label, double parameter, double value, bool pass) {
        points.push_back({std::move(label), parameter, value, pass});
    }

    void note(std::string key, std::string value) { summary.emplace_back(std::move(key), std::move(value)); }
    void note(std::string key, double value) { note(std::move(key), format_double(value)); }
};

inline constexpr const char* kReportHeader = "tacert-report 1";

/*
 * Line format:
 *
 *   tacert-report 1
 *   kind <name>
 *   seed <u64>
 *   grid <count> <v1> ... <vk>
 *   point <label> <parameter> <value> pass|fail
 *   summary <key> <value...>
 *   result pass|fail
 *   end
 *
 * Labels and keys contain no whitespace; summary values run to end of line.
 */
inline void write_report(std::ostream& out, const CertificateReport& r) {
    out << kReportHeader << '\n';
    out << "kind " << r.kind << '\n';
    out << "seed " << r.seed << '\n';
    out << "grid " << r.grid.size();
    for (double g : r.grid) out << ' ' << format_double(g);
    out << '\n';
    for (const auto& p : r.points) {
        out << "point " << p.label << ' ' << format_double(p.parameter) << ' ' << format_double(p.value) << ' '
            << (p.pass ? "pass" : "fail") << '\n';
    }
    for (const auto& [k, v] : r.summary) out << "summary " << k << ' ' << v << '\n';
    out << "result " << (r.all_pass() ? "pass" : "fail") << '\n';
    out << "end\n";
}

inline std::string to_string(const CertificateReport& r) {
    std::ostringstream os;
    write_report(os, r);
    return os.str();
}

/// Inverse of write_report. Throws ParseError on malformed records.
inline CertificateReport read_report(std::istream& in) {
    CertificateReport r;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) -> ParseError { return ParseError(what, line_no, 1); };

    if (!std::getline(in, line) || (++line_no, line != kReportHeader)) throw fail("missing report header");
    bool saw_result = false;
    bool declared_pass = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "kind") {
            ls >> r.kind;
        } else if (tag == "seed") {
            if (!(ls >> r.seed)) throw fail("malformed seed");
        } else if (tag == "grid") {
            std::size_t count = 0;
            if (!(ls >> count)) throw fail("malformed grid count");
            r.grid.resize(count);
            for (auto& g : r.grid) {
                std::string tok;
                if (!(ls >> tok)) throw fail("grid shorter than declared");
                g = std::stod(tok);
            }
        } else if (tag == "point") {
            CertificatePoint p;
            std::string par, val, flag;
            if (!(ls >> p.label >> par >> val >> flag)) throw fail("malformed point");
            p.parameter = std::stod(par);
            p.value = std::stod(val);
            if (flag != "pass" && flag != "fail") throw fail("point flag must be pass or fail");
            p.pass = flag == "pass";
            r.points.push_back(std::move(p));
        } else if (tag == "summary") {
            std::string key;
            ls >> key;
            std::string rest;
            std::getline(ls >> std::ws, rest);
            r.summary.emplace_back(key, rest);
        } else if (tag == "result") {
            std::string flag;
            ls >> flag;
            saw_result = true;
            declared_pass = flag == "pass";
        } else if (tag == "end") {
            if (!saw_result) throw fail("missing result line");
            if (declared_pass != r.all_pass()) throw fail("result line disagrees with points");
            return r;
        } else {
            throw fail("unknown record tag '" + tag + "'");
        }
    }
    throw fail("missing end line");
}

}  // namespace tacert
