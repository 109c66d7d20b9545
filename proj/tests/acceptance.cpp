// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "tacert/tacert.hpp"

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string num(double v) { return tacert::format_double(v); }

std::string describe(const tacert::CertificateReport& r) {
    return r.kind + " points=" + std::to_string(r.points.size()) + " witnesses=" +
           std::to_string(r.witnesses().size()) + " min=" + num(r.min_value()) + " max=" + num(r.max_value());
}

double naive_optimum(const tacert::SymMatrix& a) {
    const int n = static_cast<int>(a.size());
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> x(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? -1 : 1;
        double v = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v += a(i, j) * x[i] * x[j];
        best = std::max(best, v);
    }
    return best;
}

template <typename Fn>
void guarded(int id, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        verdict(id, name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    const tacert::SuiteConfig cfg;

    guarded(1, "lemma", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = tacert::lemma_suite(cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        verdict(1, "lemma", r.all_pass() && r.points.size() == 500 && secs < 30.0,
                describe(r) + " seconds=" + num(secs));
    });

    guarded(2, "starlike", [&] {
        const auto r = tacert::starlike_suite(cfg);
        verdict(2, "starlike", r.all_pass() && r.points.size() == 200, describe(r));
    });

    guarded(3, "decomposition", [&] {
        const auto r = tacert::decomposition_suite(cfg);
        verdict(3, "decomposition", r.all_pass() && r.points.size() == 100, describe(r));
    });

    guarded(4, "coeffs", [&] {
        const auto r = tacert::coeffs_suite(cfg);
        verdict(4, "coeffs", r.all_pass(), describe(r));
    });

    guarded(5, "sandwich", [&] {
        const auto r = tacert::sandwich_suite(cfg);
        verdict(5, "sandwich", r.all_pass(), describe(r));
    });

    guarded(6, "hull", [&] {
        const auto r = tacert::hull_suite(cfg);
        verdict(6, "hull", r.all_pass(), describe(r));
    });

    guarded(7, "rounding", [&] {
        const auto r = tacert::rounding_suite(cfg);
        verdict(7, "rounding", r.all_pass() && r.points.size() >= 20, describe(r));
    });

    guarded(8, "exact-oracles", [&] {
        tacert::Graph tri;
        tri.vertex_count = 3;
        tacert::add_edge(tri, 1, 2, 1.0);
        tacert::add_edge(tri, 1, 3, 1.0);
        tacert::add_edge(tri, 2, 3, 1.0);
        const double tri_cut =
            tacert::brute_force_opt(tacert::graph_to_objective(tri, tacert::ObjectiveForm::cut_value)).optimum;

        tacert::Graph edge;
        edge.vertex_count = 2;
        tacert::add_edge(edge, 1, 2, 1.0);
        const double edge_cut =
            tacert::brute_force_opt(tacert::graph_to_objective(edge, tacert::ObjectiveForm::cut_value)).optimum;

        std::mt19937_64 rng(tacert::mix64(cfg.seed));
        std::uniform_int_distribution<int> entry(-5, 5);
        int agree = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 1 + trial % 12;
            Eigen::MatrixXd a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = entry(rng);
            const tacert::SymMatrix m(a);
            agree += tacert::brute_force_opt(tacert::CutInstance(m)).optimum == naive_optimum(m);
        }
        verdict(8, "exact-oracles", tri_cut == 2.0 && edge_cut == 1.0 && agree == 100,
                "triangle=" + num(tri_cut) + " edge=" + num(edge_cut) + " gray_vs_naive=" + std::to_string(agree) +
                    "/100");
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
