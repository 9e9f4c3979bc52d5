// Command-line front end: support analysis, direct and first-order solving,
// structured-instance generation, the transform benchmark, and landscape
// probes. File formats: matrices as "m n" + rows of decimals, supports as
// "rows cols nnz" + 1-based "i j" lines, reports as JSON.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsmf/bench.hpp"
#include "fsmf/direct_solver.hpp"
#include "fsmf/errors.hpp"
#include "fsmf/generators.hpp"
#include "fsmf/io.hpp"
#include "fsmf/iterative_solver.hpp"
#include "fsmf/landscape.hpp"
#include "fsmf/parallel.hpp"
#include "fsmf/support_analysis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitCertificate = 2;
constexpr int kExitDiverged = 3;

std::string index_set_to_string(const std::vector<int>& set) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out << ',';
        out << set[i] + 1;
    }
    out << '}';
    return out.str();
}

json witness_json(const fsmf::SpuriousWitness& w) {
    return json{{"i1", w.i1 + 1}, {"j1", w.j1 + 1}, {"i2", w.i2 + 1}, {"j2", w.j2 + 1},
                {"k", w.k + 1}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw fsmf::ParseError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

int cmd_analyze(const std::string& left_path, const std::string& right_path,
                const std::string& json_path) {
    fsmf::SupportPair supports(fsmf::io::read_support(left_path),
                               fsmf::io::read_support(right_path));
    fsmf::TractabilityCertificate cert = fsmf::certify(supports);

    auto one_based = [](const std::vector<int>& v) {
        std::vector<int> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] + 1;
        return out;
    };
    json classes = json::array();
    for (std::size_t c = 0; c < cert.partition.classes.size(); ++c) {
        const auto& cls = cert.partition.classes[c];
        std::cout << "class " << c + 1 << ": members=" << index_set_to_string(cls.members)
                  << " R=" << index_set_to_string(cls.rep.row_set)
                  << " C=" << index_set_to_string(cls.rep.col_set)
                  << " CEC=" << (cls.is_cec ? "yes" : "no") << '\n';
        classes.push_back({{"members", one_based(cls.members)},
                           {"rows", one_based(cls.rep.row_set)},
                           {"cols", one_based(cls.rep.col_set)},
                           {"cec", cls.is_cec}});
    }
    std::string level = fsmf::to_string(cert.level);
    if (cert.level == fsmf::TractabilityLevel::DisjointClasses &&
        cert.partition.classes.size() == 1)
        level += " (single class)";
    std::cout << "certificate: " << level << '\n';
    if (cert.spurious_condition_met) {
        const auto& w = *cert.spurious_witness;
        std::cout << "spurious condition met at (" << w.i1 + 1 << ',' << w.j1 + 1 << ','
                  << w.i2 + 1 << ',' << w.j2 + 1 << ',' << w.k + 1 << ")\n";
    }
    if (!cert.rect_failures.empty()) {
        for (const auto& f : cert.rect_failures)
            std::cout << "non-rectangular outside support at column " << f.column + 1 << '\n';
    }
    if (!json_path.empty()) {
        json j{{"certificate", fsmf::to_string(cert.level)},
               {"classes", classes},
               {"spurious_condition_met", cert.spurious_condition_met}};
        if (cert.spurious_witness) j["spurious_witness"] = witness_json(*cert.spurious_witness);
        write_json(json_path, j);
    }
    return kExitOk;
}

int cmd_solve(const std::string& matrix_path, const std::string& left_path,
              const std::string& right_path, const std::string& method, std::uint64_t seed,
              int max_iters, double lr, bool use_grid, bool best_effort,
              const std::string& out_path, double stop_log10) {
    fsmf::ProblemInstance instance(fsmf::io::read_matrix(matrix_path),
                                   fsmf::SupportPair(fsmf::io::read_support(left_path),
                                                     fsmf::io::read_support(right_path)));
    fsmf::SolveReport report;
    if (method == "direct") {
        fsmf::TractabilityCertificate cert = fsmf::certify(instance.supports);
        const auto t0 = std::chrono::steady_clock::now();
        fsmf::FactorPair factors;
        try {
            factors = fsmf::svd_fsmf2_certified(instance.target, instance.supports, cert,
                                                best_effort);
        } catch (const fsmf::CertificateMismatchError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitCertificate;
        }
        report.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.method_tag = "direct";
        report.final_loss = fsmf::loss(instance, factors);
        report.certificate = fsmf::to_string(cert.level);
        report.loss_trace.emplace_back(0, report.final_loss);
        report.converged = true;
        report.seed = seed;
    } else {
        auto parsed = fsmf::method_from_string(method);
        if (!parsed) {
            std::cerr << "error: unknown method '" << method << "'\n";
            return kExitParse;
        }
        fsmf::IterativeConfig config;
        config.method = *parsed;
        config.seed = seed;
        config.max_iters = max_iters;
        config.stop_log10_error = stop_log10;
        if (*parsed == fsmf::Method::Palm) use_grid = false;  // PALM sets its own steps
        if (use_grid) {
            fsmf::GridSearchResult best = fsmf::grid_search(instance, config);
            report = best.report;
            report.learning_rate = best.learning_rate;
        } else {
            config.learning_rate = lr;
            report = fsmf::run(instance, config).second;
        }
        report.certificate = fsmf::to_string(fsmf::certify(instance.supports).level);
    }
    if (!out_path.empty()) write_json(out_path, fsmf::io::report_to_json(report));
    std::cout << "method=" << report.method_tag << " final_loss=" << fsmf::io::format_double(report.final_loss)
              << " wall_time_s=" << report.wall_time_s << '\n';
    return report.diverged ? kExitDiverged : kExitOk;
}

int cmd_gen(const std::string& family, int m, int n, int r, int n_log2, const std::string& w_path,
            bool random_target, std::uint64_t seed, const std::string& prefix) {
    const fs::path base(prefix);
    auto write_pair = [&](const fsmf::SupportPair& supports) {
        fsmf::io::write_support(base.string() + "_I.txt", supports.left);
        fsmf::io::write_support(base.string() + "_J.txt", supports.right);
        std::cout << "wrote " << base.string() << "_I.txt and " << base.string() << "_J.txt\n";
    };
    if (family == "full") {
        write_pair(fsmf::gen_full(m, n, r));
    } else if (family == "lu") {
        write_pair(fsmf::gen_lu(n));
    } else if (family == "kron1") {
        write_pair(fsmf::gen_kron1(n_log2));
    } else if (family == "kron2") {
        write_pair(fsmf::gen_kron2(n_log2));
    } else if (family == "hodlr") {
        write_pair(fsmf::gen_hodlr(n_log2));
        if (random_target) {
            fsmf::io::write_matrix(base.string() + "_A.txt",
                                   fsmf::gen_random_hodlr_matrix(n_log2, seed));
            std::cout << "wrote " << base.string() << "_A.txt\n";
        }
    } else if (family == "hadamard") {
        fsmf::io::write_matrix(base.string() + "_A.txt", fsmf::gen_hadamard(n_log2));
        std::cout << "wrote " << base.string() << "_A.txt\n";
    } else if (family == "mcp") {
        fsmf::McpReduction red = fsmf::mcp_to_fsmf(fsmf::io::read_support(w_path));
        write_pair(red.supports);
        json meta{{"transposed", red.transposed}};
        write_json(base.string() + "_meta.json", meta);
    } else {
        std::cerr << "error: unknown family '" << family << "'\n";
        return kExitParse;
    }
    return kExitOk;
}

int cmd_bench(const fsmf::BenchOptions& options, const std::string& out_dir) {
    std::vector<fsmf::BenchCell> cells = fsmf::run_benchmark(options);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        for (const auto& cell : cells) {
            std::ostringstream name;
            name << cell.family << "_N" << cell.n_log2 << '_' << cell.method << ".json";
            write_json(fs::path(out_dir) / name.str(), fsmf::io::report_to_json(cell.report, false));
        }
        json summary = json::array();
        for (const auto& cell : cells)
            summary.push_back({{"family", cell.family},
                               {"N", cell.n_log2},
                               {"method", cell.method},
                               {"converged", cell.report.converged},
                               {"iterations", cell.report.iterations},
                               {"wall_time_s", fsmf::io::json_double(cell.report.wall_time_s)},
                               {"final_loss", fsmf::io::json_double(cell.report.final_loss)}});
        write_json(fs::path(out_dir) / "summary.json", summary);
    }
    std::cout << fsmf::benchmark_summary_table(cells);
    return kExitOk;
}

int cmd_probe_gsigma(double lo, double hi, double step, const std::string& out_path) {
    std::ofstream out(out_path);
    if (!out) throw fsmf::ParseError("cannot open " + out_path + " for writing");
    out << "sigma,g1_closed,g1_oracle,g2,g3\n";
    for (double s = lo; s <= hi + 1e-12; s += step) {
        const double g1 = fsmf::g_sigma(s);
        const double g1o = fsmf::g_sigma_oracle(s);
        const double g2 = fsmf::rank_one_loss_2x2(1.0, 0.0, 0.0, 2.0 - s);
        const double g3 = fsmf::rank_one_loss_2x2(0.0, 1.0, 1.0, -s);
        out << fsmf::io::format_double(s) << ',' << fsmf::io::format_double(g1) << ','
            << fsmf::io::format_double(g1o) << ',' << fsmf::io::format_double(g2) << ','
            << fsmf::io::format_double(g3) << '\n';
    }
    std::cout << "wrote " << out_path << '\n';
    return kExitOk;
}

int cmd_probe_valley(int m, int n, int r, const std::string& prefix) {
    fsmf::SpuriousWitness w{0, 0, 1, 1, 0};
    fsmf::SpuriousValleyInstance valley = fsmf::build_spurious_valley_instance(m, n, r, w);
    fsmf::io::write_matrix(prefix + "_A.txt", valley.instance.target);
    fsmf::io::write_support(prefix + "_I.txt", valley.instance.supports.left);
    fsmf::io::write_support(prefix + "_J.txt", valley.instance.supports.right);
    json j{{"witness", witness_json(valley.witness)},
           {"in_valley_loss", fsmf::loss(valley.instance, valley.in_valley)},
           {"in_valley_sigma", fsmf::sigma_coordinate(valley.in_valley, valley.witness)},
           {"optimum_loss", fsmf::loss(valley.instance, valley.optimum)},
           {"optimum_sigma", fsmf::sigma_coordinate(valley.optimum, valley.witness)},
           {"g5", fsmf::g_sigma(5.0)},
           {"g1", fsmf::g_sigma(1.0)}};
    write_json(prefix + "_report.json", j);
    std::cout << "wrote " << prefix << "_{A,I,J}.txt and " << prefix << "_report.json\n";
    return kExitOk;
}

int cmd_probe_minimum(double a, double b, const std::string& prefix) {
    fsmf::SpuriousMinimumInstance built = fsmf::build_spurious_minimum_instance(a, b);
    fsmf::io::write_matrix(prefix + "_A.txt", built.instance.target);
    fsmf::io::write_support(prefix + "_I.txt", built.instance.supports.left);
    fsmf::io::write_support(prefix + "_J.txt", built.instance.supports.right);
    auto [gx, gy] = fsmf::masked_gradient(built.instance, built.spurious_min);
    const double grad_norm = std::sqrt(gx.frobenius_sq() + gy.frobenius_sq());
    json j{{"a", a},
           {"b", b},
           {"loss_at_point", fsmf::loss(built.instance, built.spurious_min)},
           {"gradient_norm_at_point", grad_norm},
           {"optimum_loss", fsmf::loss(built.instance, built.optimum)}};
    write_json(prefix + "_report.json", j);
    std::cout << "wrote " << prefix << "_{A,I,J}.txt and " << prefix << "_report.json\n";
    return kExitOk;
}

int cmd_probe_smartinit(const std::string& matrix_path, const std::string& left_path,
                        const std::string& right_path, std::uint64_t seed, int samples,
                        const std::string& out_path) {
    fsmf::ProblemInstance instance(fsmf::io::read_matrix(matrix_path),
                                   fsmf::SupportPair(fsmf::io::read_support(left_path),
                                                     fsmf::io::read_support(right_path)));
    fsmf::TractabilityCertificate cert = fsmf::certify(instance.supports);
    if (cert.level == fsmf::TractabilityLevel::Unknown) {
        std::cerr << "error: smart-init probe needs a certified instance\n";
        return kExitCertificate;
    }
    fsmf::FactorPair opt = fsmf::svd_fsmf2_certified(instance.target, instance.supports, cert);
    fsmf::FactorPair start = fsmf::init_factors(instance.supports, seed);
    fsmf::FeasiblePath path = fsmf::smart_init_path(instance, opt, start.X, samples);
    fsmf::PathCheck check = fsmf::check_path(path, instance);
    json j{{"feasible", check.feasible},
           {"monotone", check.monotone},
           {"max_violation", fsmf::io::json_double(check.max_violation)},
           {"samples", samples},
           {"certificate", fsmf::to_string(cert.level)},
           {"optimum_loss", fsmf::loss(instance, opt)}};
    if (!out_path.empty()) write_json(out_path, j);
    std::cout << "feasible=" << (check.feasible ? "yes" : "no")
              << " monotone=" << (check.monotone ? "yes" : "no")
              << " max_violation=" << check.max_violation << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-support matrix factorization toolkit"};
    app.require_subcommand(1);

    int jobs = fsmf::parallel::max_threads();
    app.add_option("--jobs", jobs, "worker threads (default: FSMF_JOBS or hardware)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "classify supports and certify tractability");
    std::string left_path, right_path, json_path;
    analyze->add_option("--left", left_path, "left support file")->required();
    analyze->add_option("--right", right_path, "right support file")->required();
    analyze->add_option("--json", json_path, "also write a JSON report");

    // solve
    auto* solve = app.add_subcommand("solve", "factorize a matrix under fixed supports");
    std::string matrix_path, method = "direct", out_path;
    std::uint64_t seed = 0;
    int max_iters = 10000;
    double lr = 0.0, stop_log10 = -10.0;
    bool use_grid = false, best_effort = false;
    solve->add_option("--matrix", matrix_path, "target matrix file")->required();
    solve->add_option("--left", left_path, "left support file")->required();
    solve->add_option("--right", right_path, "right support file")->required();
    solve->add_option("--method", method, "direct|gd|momentum|adam|palm");
    solve->add_option("--seed", seed, "rng seed");
    solve->add_option("--max-iters", max_iters, "iteration cap");
    solve->add_option("--lr", lr, "learning rate");
    solve->add_flag("--grid", use_grid, "tune the learning rate over the default grid");
    solve->add_flag("--best-effort", best_effort, "run direct solver on uncertified supports");
    solve->add_option("--stop-log10", stop_log10, "stop threshold on log10 residual norm");
    solve->add_option("--out", out_path, "report JSON path");

    // gen
    auto* gen = app.add_subcommand("gen", "generate structured instances");
    std::string family, w_path, prefix = "instance";
    int gm = 4, gn = 4, gr = 2, n_log2 = 3;
    bool random_target = false;
    gen->add_option("--family", family, "full|lu|kron1|kron2|hodlr|hadamard|mcp")->required();
    gen->add_option("--m", gm, "rows (full)");
    gen->add_option("--n", gn, "cols (full) / size (lu)");
    gen->add_option("--r", gr, "inner dimension (full)");
    gen->add_option("--N", n_log2, "log2 size (kron1, kron2, hodlr, hadamard)");
    gen->add_option("--w", w_path, "observation mask file (mcp)");
    gen->add_flag("--random-target", random_target, "also emit a random matrix (hodlr)");
    gen->add_option("--seed", seed, "rng seed");
    gen->add_option("--out-prefix", prefix, "output file prefix");

    // bench
    auto* bench = app.add_subcommand("bench", "transform-factorization benchmark");
    fsmf::BenchOptions bench_options;
    std::string bench_out, methods_csv = "direct,gd,momentum,adam";
    bench->add_option("--family", bench_options.family, "kron1|kron2");
    bench->add_option("--n-min", bench_options.n_min, "smallest log2 size");
    bench->add_option("--n-max", bench_options.n_max, "largest log2 size");
    bench->add_option("--methods", methods_csv, "comma-separated method list");
    bench->add_option("--seed", bench_options.seed, "rng seed");
    bench->add_option("--max-iters", bench_options.max_iters, "iteration cap per run");
    bench->add_option("--out", bench_out, "directory for per-cell reports");

    // probe
    auto* probe = app.add_subcommand("probe", "landscape probes");
    std::string what, probe_out = "probe";
    double lo = -10.0, hi = 10.0, step = 0.01, pa = 2.0, pb = 1.0;
    int pm = 2, pn = 2, pr = 2, samples = 1024;
    probe->add_option("--what", what, "gsigma|valley|minimum|smartinit")->required();
    probe->add_option("--min", lo, "grid start (gsigma)");
    probe->add_option("--max", hi, "grid end (gsigma)");
    probe->add_option("--step", step, "grid step (gsigma)");
    probe->add_option("--a", pa, "larger diagonal (minimum)");
    probe->add_option("--b", pb, "smaller diagonal (minimum)");
    probe->add_option("--m", pm, "rows (valley)");
    probe->add_option("--n", pn, "cols (valley)");
    probe->add_option("--r", pr, "inner dimension (valley)");
    probe->add_option("--samples", samples, "path samples (smartinit)");
    probe->add_option("--matrix", matrix_path, "target matrix file (smartinit)");
    probe->add_option("--left", left_path, "left support file (smartinit)");
    probe->add_option("--right", right_path, "right support file (smartinit)");
    probe->add_option("--seed", seed, "rng seed (smartinit)");
    probe->add_option("--out", probe_out, "output path or prefix");

    CLI11_PARSE(app, argc, argv);
    fsmf::parallel::set_max_threads(jobs);

    try {
        if (*analyze) return cmd_analyze(left_path, right_path, json_path);
        if (*solve)
            return cmd_solve(matrix_path, left_path, right_path, method, seed, max_iters, lr,
                             use_grid || lr == 0.0, best_effort, out_path, stop_log10);
        if (*gen)
            return cmd_gen(family, gm, gn, gr, n_log2, w_path, random_target, seed, prefix);
        if (*bench) {
            bench_options.methods.clear();
            std::stringstream ss(methods_csv);
            std::string token;
            while (std::getline(ss, token, ','))
                if (!token.empty()) bench_options.methods.push_back(token);
            return cmd_bench(bench_options, bench_out);
        }
        if (*probe) {
            if (what == "gsigma")
                return cmd_probe_gsigma(lo, hi, step, probe_out == "probe" ? "gsigma.csv" : probe_out);
            if (what == "valley") return cmd_probe_valley(pm, pn, pr, probe_out);
            if (what == "minimum") return cmd_probe_minimum(pa, pb, probe_out);
            if (what == "smartinit")
                return cmd_probe_smartinit(matrix_path, left_path, right_path, seed, samples,
                                           probe_out == "probe" ? "" : probe_out);
            std::cerr << "error: unknown probe '" << what << "'\n";
            return kExitParse;
        }
    } catch (const fsmf::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const fsmf::CertificateMismatchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCertificate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    return kExitOk;
}
