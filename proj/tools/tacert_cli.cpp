// tacert: command-line front end for the TA certification library.
//
// Exit codes: 0 property holds / solve succeeded, 1 property numerically
// violated, 2 usage or input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tacert/tacert.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    std::string input;
    std::vector<long long> random;  // {n, count}
    std::uint64_t seed = 42;
    double tol = -1.0;
    int grid = -1;
    long long samples = -1;
    int max_order = tacert::kDefaultSeriesOrder;
    int rank = 0;
    int restarts = 5;
    double lambda = 0.0;
    std::string method = "brute";
    std::string form = "cut";
    std::string suite;
    std::string output;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw tacert::InputError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tacert::InputError("cannot open '" + path + "'");
    return in;
}

tacert::SymMatrix load_matrix(const std::string& path) {
    auto in = open_input(path);
    try {
        return tacert::read_dense_matrix(in);
    } catch (const tacert::ParseError& e) {
        throw tacert::ParseError(path + ": " + e.what(), e.line(), e.column());
    }
}

std::string format_signs(const tacert::SignVector& x) {
    std::string s;
    for (int v : x) s += v > 0 ? '+' : '-';
    return s;
}

int cmd_membership(const RunConfig& cfg) {
    const tacert::TaCandidate c(load_matrix(cfg.input));
    const double tol = cfg.tol >= 0.0 ? cfg.tol : 1e-9;
    const tacert::MembershipVerdict v = tacert::ta_membership(c, tol);

    tacert::CertificateReport rep;
    rep.kind = "membership";
    rep.add("preimage_min_eigenvalue", 0.0, v.preimage_min_eigenvalue, v.in_ta);
    rep.note("in_ta", v.in_ta ? "true" : "false");
    rep.note("tolerance", v.tolerance_used);
    rep.note("dimension", std::to_string(c.size()));
    rep.note("clamped_entries", std::to_string(c.clamped_entries()));
    Output out(cfg.output);
    tacert::write_report(out.stream(), rep);
    return v.in_ta ? kExitOk : kExitViolated;
}

int cmd_starlike(const RunConfig& cfg) {
    const int grid = cfg.grid >= 0 ? cfg.grid : 101;
    const double tol = cfg.tol >= 0.0 ? cfg.tol : 1e-9;
    tacert::CertificateReport rep;

    if (!cfg.random.empty()) {
        const long long n = cfg.random[0];
        const long long count = cfg.random[1];
        if (n < 1 || n > tacert::kMaxDimension || count < 1) {
            throw tacert::InputError("--random expects n in [1, 256] and a positive sample count");
        }
        rep.kind = "starlike-random";
        rep.seed = cfg.seed;
        rep.grid = tacert::uniform_unit_grid(grid);
        for (long long k = 0; k < count; ++k) {
            const std::uint64_t task = tacert::derive_seed(cfg.seed, static_cast<std::uint64_t>(k));
            const tacert::TaCandidate c(tacert::f_entrywise(tacert::sample_elliptope(n, n, task).matrix()));
            const tacert::RayScanReport scan = tacert::starlike_ray_scan(c, grid, tol);
            rep.add("sample", static_cast<double>(k), scan.min_eigenvalue(), scan.all_pass);
            for (std::size_t j = 0; j < scan.verdicts.size(); ++j) {
                if (!scan.verdicts[j].in_ta) {
                    rep.add("witness_lambda", scan.lambda_grid[j], scan.verdicts[j].preimage_min_eigenvalue, false);
                }
            }
        }
        rep.note("dimension", std::to_string(n));
        rep.note("samples", std::to_string(count));
    } else {
        if (cfg.input.empty()) throw tacert::InputError("starlike needs a matrix file or --random n count");
        const tacert::TaCandidate c(load_matrix(cfg.input));
        rep = tacert::to_certificate(tacert::starlike_ray_scan(c, grid, tol), "starlike");
        rep.note("dimension", std::to_string(c.size()));
    }
    rep.note("tolerance", tol);
    rep.note("min_eigenvalue", rep.min_value());
    Output out(cfg.output);
    tacert::write_report(out.stream(), rep);
    return rep.all_pass() ? kExitOk : kExitViolated;
}

int cmd_coeffs(const RunConfig& cfg) {
    const tacert::CoefficientTable t = tacert::taylor_coeffs(cfg.lambda, cfg.max_order);
    Output out(cfg.output);
    for (int n = 0; n <= t.max_order(); ++n) out.stream() << n << ' ' << tacert::format_double(t[n]) << '\n';
    return kExitOk;
}

tacert::ObjectiveForm parse_form(const std::string& s) {
    if (s == "cut") return tacert::ObjectiveForm::cut_value;
    if (s == "quadratic") return tacert::ObjectiveForm::quadratic;
    if (s == "laplacian") return tacert::ObjectiveForm::laplacian;
    throw tacert::InputError("unknown --form '" + s + "' (cut, quadratic, laplacian)");
}

int cmd_solve(const RunConfig& cfg) {
    auto in = open_input(cfg.input);
    tacert::Graph g;
    try {
        g = tacert::read_rudy(in);
    } catch (const tacert::ParseError& e) {
        throw tacert::ParseError(cfg.input + ": " + e.what(), e.line(), e.column());
    }
    const tacert::CutInstance inst = tacert::graph_to_objective(g, parse_form(cfg.form));

    tacert::CertificateReport rep;
    rep.kind = "solve-" + cfg.method;
    rep.seed = cfg.seed;
    rep.note("form", cfg.form);
    rep.note("vertices", std::to_string(g.vertex_count));
    rep.note("edges", std::to_string(g.edges.size()));
    int code = kExitOk;

    if (cfg.method == "brute") {
        const tacert::BruteForceResult r = tacert::brute_force_opt(inst);
        rep.add("optimum", 0.0, r.optimum, true);
        rep.note("argmax", format_signs(r.argmax));
        rep.note("evaluations", std::to_string(r.evaluations));
    } else if (cfg.method == "sdp" || cfg.method == "round") {
        tacert::SdpOptions opt;
        opt.seed = cfg.seed;
        opt.rank = cfg.rank;
        opt.restarts = cfg.restarts;
        if (cfg.tol > 0.0) opt.tol = cfg.tol;
        const tacert::SdpSolution sol = tacert::elliptope_maximize(inst, opt);
        rep.add("sdp_value", 0.0, sol.value, sol.convergence.converged);
        rep.note("converged", sol.convergence.converged ? "true" : "false");
        rep.note("iterations", std::to_string(sol.convergence.iterations));
        rep.note("gradient_norm", sol.convergence.gradient_norm);
        rep.note("restarts", std::to_string(sol.convergence.restarts_used));
        if (!sol.convergence.converged) code = kExitViolated;
        if (cfg.method == "round") {
            const auto samples = static_cast<std::uint64_t>(cfg.samples > 0 ? cfg.samples : 1000);
            const tacert::RoundingResult r =
                tacert::hyperplane_rounding(sol, samples, tacert::derive_seed(cfg.seed, 0x726f756e64ULL));
            rep.add("rounded_value", 0.0, r.best_value, true);
            rep.note("best_cut", format_signs(r.best_cut));
            rep.note("samples", std::to_string(samples));
        }
    } else {
        throw tacert::InputError("unknown --method '" + cfg.method + "' (brute, sdp, round)");
    }
    Output out(cfg.output);
    tacert::write_report(out.stream(), rep);
    return code;
}

int cmd_verify(const RunConfig& cfg) {
    tacert::SuiteConfig sc;
    sc.seed = cfg.seed;
    sc.samples = cfg.samples > 0 ? static_cast<int>(cfg.samples) : -1;
    sc.grid = cfg.grid;
    sc.tol = cfg.tol;
    sc.max_order = cfg.max_order == tacert::kDefaultSeriesOrder ? -1 : cfg.max_order;
    const std::vector<tacert::CertificateReport> reports = tacert::run_suite(cfg.suite, sc);
    Output out(cfg.output);
    bool ok = true;
    for (const auto& r : reports) {
        tacert::write_report(out.stream(), r);
        ok = ok && r.all_pass();
    }
    return ok ? kExitOk : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certification tools for the trigonometric approximation of the Max-Cut polytope"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Base seed for all derived random streams");
        sub->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
    };

    auto* membership = app.add_subcommand("membership", "Test whether a matrix lies in TA");
    membership->add_option("matrix", cfg.input, "Dense matrix file")->required();
    membership->add_option("--tol", cfg.tol, "PSD tolerance for the preimage (default 1e-9)");
    add_common(membership);

    auto* starlike = app.add_subcommand("starlike", "Scan the segment from a TA point to the identity");
    auto* starlike_file = starlike->add_option("matrix", cfg.input, "Dense matrix file");
    starlike->add_option("--random", cfg.random, "Sample COUNT TA points of dimension N")
        ->expected(2)
        ->type_name("N COUNT")
        ->excludes(starlike_file);
    starlike->add_option("--grid", cfg.grid, "Number of lambda grid points (default 101)");
    starlike->add_option("--tol", cfg.tol, "PSD tolerance (default 1e-9)");
    add_common(starlike);

    auto* coeffs = app.add_subcommand("coeffs", "Print Taylor coefficients of sin(lambda asin x)");
    coeffs->add_option("lambda", cfg.lambda, "lambda")->required();
    coeffs->add_option("max_order", cfg.max_order, "Highest order (same as --max-order)");
    coeffs->add_option("--max-order", cfg.max_order, "Highest order (default 400)");
    add_common(coeffs);

    auto* solve = app.add_subcommand("solve", "Solve or relax max x^T A x for a Rudy graph");
    solve->add_option("graph", cfg.input, "Rudy graph file")->required();
    solve->add_option("--method", cfg.method, "brute, sdp or round (default brute)");
    solve->add_option("--form", cfg.form, "cut, quadratic or laplacian (default cut)");
    solve->add_option("--rank", cfg.rank, "Factor rank for the SDP (default n)");
    solve->add_option("--restarts", cfg.restarts, "SDP restarts (default 5)");
    solve->add_option("--samples", cfg.samples, "Rounding samples (default 1000)");
    solve->add_option("--tol", cfg.tol, "SDP stopping tolerance");
    add_common(solve);

    auto* verify = app.add_subcommand("verify", "Run a certification suite");
    verify->add_option("suite", cfg.suite, "lemma, starlike, coeffs, sandwich, hull or rounding")->required();
    verify->add_option("--samples", cfg.samples, "Number of sampled points");
    verify->add_option("--grid", cfg.grid, "Lambda grid size");
    verify->add_option("--tol", cfg.tol, "Tolerance override");
    verify->add_option("--max-order", cfg.max_order, "Series order for the coeffs suite");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*membership) return cmd_membership(cfg);
        if (*starlike) return cmd_starlike(cfg);
        if (*coeffs) return cmd_coeffs(cfg);
        if (*solve) return cmd_solve(cfg);
        if (*verify) return cmd_verify(cfg);
    } catch (const tacert::NotInTaError& e) {
        std::cerr << "tacert: precondition failed: " << e.what() << '\n';
        return kExitUsage;
    } catch (const tacert::InputError& e) {
        std::cerr << "tacert: " << e.what() << '\n';
        return kExitUsage;
    } catch (const tacert::ResourceError& e) {
        std::cerr << "tacert: " << e.what() << '\n';
        return kExitUsage;
    } catch (const tacert::PreconditionError& e) {
        std::cerr << "tacert: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
