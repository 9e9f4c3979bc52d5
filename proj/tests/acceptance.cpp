// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fsmf/bench.hpp"
#include "fsmf/direct_solver.hpp"
#include "fsmf/errors.hpp"
#include "fsmf/generators.hpp"
#include "fsmf/iterative_solver.hpp"
#include "fsmf/kernels.hpp"
#include "fsmf/landscape.hpp"
#include "fsmf/support_analysis.hpp"
#include "test_helpers.hpp"

using namespace fsmf;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s — %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void criterion_1_eckart_young() {
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 5);
        const int n = 2 + static_cast<int>(rng() % 5);
        // Truncation strictly below min(m, n) keeps the tail away from zero,
        // where relative comparison is meaningful.
        const int r = 1 + static_cast<int>(rng() % std::max(1, std::min(m, n) - 1));
        DenseMatrix a = test::random_matrix(m, n, rng);
        FactorPair factors = svd_fsmf(a, gen_full(m, n, r));
        const double value = kernels::frobenius_sq(kernels::residual(a, factors.X, factors.Y));
        const double oracle = test::gram_tail_energy(a, r);
        const double scale = std::max(oracle, 1e-30);
        worst = std::max(worst, std::abs(value - oracle) / scale);
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-9 && elapsed < 1.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "100 full-support instances, max rel err %.2e, %.2f s", worst, elapsed);
    report(1, "Eckart-Young equivalence", pass, detail);
}

void criterion_2_hadamard_exact() {
    bool pass = true;
    double worst_log = -1e300, worst_time = 0.0;
    for (int n = 3; n <= 8; ++n) {
        DenseMatrix h = gen_hadamard(n);
        for (int family = 0; family < 2; ++family) {
            SupportPair supports = family == 0 ? gen_kron1(n) : gen_kron2(n);
            const auto t0 = clock_type::now();
            FactorPair factors = svd_fsmf2(h, supports);
            const double elapsed = seconds_since(t0);
            const double value =
                kernels::frobenius_sq(kernels::residual(h, factors.X, factors.Y));
            const double log_err = value > 0 ? 0.5 * std::log10(value) : -400.0;
            worst_log = std::max(worst_log, log_err);
            worst_time = std::max(worst_time, elapsed);
            pass = pass && log_err <= -10.0 && elapsed < 5.0;
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "N=3..8, both families: worst log10 error %.1f, worst solve %.2f s", worst_log,
                  worst_time);
    report(2, "exact transform factorization", pass, detail);
}

void criterion_3_benchmark_ordering() {
    bool all_converged = true, direct_fastest = true;
    double tightest = 1e300;
    for (const std::string family : {"kron1", "kron2"}) {
        BenchOptions options;
        options.family = family;
        options.n_min = 3;
        options.n_max = 6;
        options.seed = 11;
        options.max_iters = 8000;  // converged runs need ~500; stalled rates stop here
        std::vector<BenchCell> cells = run_benchmark(options);
        for (int n = 3; n <= 6; ++n) {
            double direct_time = 0.0;
            for (const auto& c : cells)
                if (c.n_log2 == n && c.method == "direct") direct_time = c.report.wall_time_s;
            for (const auto& c : cells) {
                if (c.n_log2 != n || c.method == "direct") continue;
                all_converged = all_converged && c.report.converged;
                direct_fastest = direct_fastest && direct_time < c.report.wall_time_s;
                tightest = std::min(tightest, c.report.wall_time_s / direct_time);
            }
        }
    }
    const bool pass = all_converged && direct_fastest;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "N=3..6 x {gd,momentum,adam} x {kron1,kron2}: all tuned runs converged=%s, "
                  "direct faster everywhere=%s (tightest margin %.1fx)",
                  all_converged ? "yes" : "no", direct_fastest ? "yes" : "no", tightest);
    report(3, "benchmark ordering", pass, detail);
}

void criterion_4_gsigma() {
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double sigma = -10.0 + 20.0 * i / 999.0;
        max_err = std::max(max_err, std::abs(g_sigma(sigma) - g_sigma_oracle(sigma)));
    }
    const bool spot = std::abs(g_sigma(-1.0)) <= 1e-12 && std::abs(g_sigma(1.0) - 2.0) <= 1e-12;
    const bool order = g_sigma(1.0) > g_sigma(5.0) && g_sigma(5.0) > g_sigma(-1.0);
    const bool pass = max_err <= 1e-10 && spot && order;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "1000 grid points, max |closed - oracle| %.2e; g(-1)=%.1e, g(1)-2=%.1e, "
                  "ordering %s",
                  max_err, g_sigma(-1.0), g_sigma(1.0) - 2.0, order ? "holds" : "broken");
    report(4, "valley-barrier curve", pass, detail);
}

void criterion_5_spurious_constructions() {
    SpuriousValleyInstance valley = build_spurious_valley_instance(2, 2, 2, {0, 0, 1, 1, 0});
    const double in_valley_loss = loss(valley.instance, valley.in_valley);
    const double opt_loss = loss(valley.instance, valley.optimum);
    const bool valley_ok = std::abs(in_valley_loss - g_sigma(5.0)) <= 1e-10 &&
                           sigma_coordinate(valley.in_valley, valley.witness) == 5.0 &&
                           opt_loss == 0.0 &&
                           sigma_coordinate(valley.optimum, valley.witness) == -1.0;

    SpuriousMinimumInstance built = build_spurious_minimum_instance(2.0, 1.0);
    const double point_loss = loss(built.instance, built.spurious_min);
    auto [gx, gy] = masked_gradient(built.instance, built.spurious_min);
    const double grad_norm = std::sqrt(gx.frobenius_sq() + gy.frobenius_sq());
    bool stable = true;
    std::mt19937_64 rng(1005);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        FactorPair p = built.spurious_min;
        double d[6];
        double norm = 0.0;
        for (double& v : d) {
            v = unit(rng);
            norm += v * v;
        }
        const double scale = 1e-3 / std::sqrt(norm);
        p.X(0, 0) += scale * d[0];
        p.X(1, 0) += scale * d[1];
        p.X(1, 1) += scale * d[2];
        p.Y(0, 0) += scale * d[3];
        p.Y(1, 0) += scale * d[4];
        p.Y(1, 1) += scale * d[5];
        stable = stable && loss(built.instance, p) >= 1.0 - 1e-12;
    }
    const bool minimum_ok = point_loss == 1.0 && grad_norm <= 1e-12 && stable;
    const bool pass = valley_ok && minimum_ok;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "valley: loss-g(5)=%.1e, sigma=%g/%g; minimum: loss=%g, |grad|=%.1e, 200 "
                  "perturbations stable=%s",
                  in_valley_loss - g_sigma(5.0), sigma_coordinate(valley.in_valley, valley.witness),
                  sigma_coordinate(valley.optimum, valley.witness), point_loss, grad_norm,
                  stable ? "yes" : "no");
    report(5, "spurious valley and minimum constructions", pass, detail);
}

void criterion_6_reduction_maps() {
    std::mt19937_64 rng(1006);
    double worst_forward = 0.0;
    bool backward_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        SupportMask w = test::random_mask(m, n, 0.5, rng);
        DenseMatrix a = test::random_matrix(m, n, rng);
        std::vector<double> x(static_cast<std::size_t>(m)), y(static_cast<std::size_t>(n));
        for (auto& v : x) v = test::random_matrix(1, 1, rng)(0, 0);
        for (auto& v : y) v = test::random_matrix(1, 1, rng)(0, 0);

        McpReduction red = mcp_to_fsmf(w);
        McpInstance mcp(a, w);
        ProblemInstance instance = red.instance(a);

        FactorPair lifted = map_mcp_solution_to_fsmf(red, a, x, y);
        const double fsmf_value = loss(instance, lifted);
        const double mcp_value = mcp.objective(x, y);
        worst_forward = std::max(worst_forward,
                                 std::abs(fsmf_value - mcp_value) / std::max(mcp_value, 1e-12));

        FactorPair arbitrary{
            project_to_support(
                test::random_matrix(red.supports.left.rows(), red.supports.left.cols(), rng),
                red.supports.left),
            project_to_support(
                test::random_matrix(red.supports.right.rows(), red.supports.right.cols(), rng),
                red.supports.right)};
        auto [bx, by] = map_fsmf_solution_to_mcp(red, arbitrary);
        backward_ok = backward_ok &&
                      mcp.objective(bx, by) <= loss(instance, arbitrary) + 1e-10;
    }
    const bool pass = worst_forward <= 1e-10 && backward_ok;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "50 trials each way: forward max rel gap %.2e, backward inequality %s",
                  worst_forward, backward_ok ? "holds" : "broken");
    report(6, "completion reduction maps", pass, detail);
}

void criterion_7_hodlr() {
    const bool sizes_ok =
        gen_hodlr(1).left.nnz() == 4 && gen_hodlr(2).left.nnz() == 12 && gen_hodlr(3).left.nnz() == 32;
    bool reconstruct_ok = true, certify_ok = true;
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
        SupportPair supports = gen_hodlr(n);
        certify_ok = certify_ok && certify(supports).level == TractabilityLevel::DisjointClasses;
        DenseMatrix a = gen_random_hodlr_matrix(n, 2000 + static_cast<std::uint64_t>(n));
        FactorPair factors = svd_fsmf(a, supports);
        const double value = kernels::frobenius_sq(kernels::residual(a, factors.X, factors.Y));
        worst = std::max(worst, value);
        reconstruct_ok = reconstruct_ok && value <= 1e-18;
    }
    const bool pass = sizes_ok && reconstruct_ok && certify_ok;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "|I_N|=4,12,32 %s; N<=5 reconstruction worst loss %.1e; certificates %s",
                  sizes_ok ? "ok" : "WRONG", worst, certify_ok ? "disjoint" : "WRONG");
    report(7, "hierarchical low-rank family", pass, detail);
}

void criterion_8_palm_freezing() {
    int frozen = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(3000 + seed);
        ProblemInstance instance(test::random_matrix(30, 30, rng), gen_full(30, 30, 30));
        IterativeConfig config;
        config.method = Method::Palm;
        config.palm_sparsity = {{90, 90}};
        config.max_iters = 2000;
        config.stop_log10_error = -300.0;
        config.seed = seed;
        config.record_loss_trace = false;
        auto [factors, run_report] = run(instance, config);
        const auto& trace = *run_report.support_change_trace;
        bool quiet = trace.size() == 2000;
        for (std::size_t t = 1800; t < trace.size(); ++t)
            quiet = quiet && trace[t].left_diff == 0 && trace[t].right_diff == 0;
        frozen += quiet;
    }
    const bool pass = frozen >= 8;
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "30x30, 90-sparse factors, 2000 iterations: final 10%% silent in %d/10 seeds",
                  frozen);
    report(8, "thresholding support freezing", pass, detail);
}

void criterion_9_gradient() {
    std::mt19937_64 rng(1009);
    double worst = 0.0;
    int counted = 0;
    while (counted < 100) {
        const int m = 2 + static_cast<int>(rng() % 4);
        const int n = 2 + static_cast<int>(rng() % 4);
        const int r = 1 + static_cast<int>(rng() % 4);
        SupportPair supports(test::random_mask(m, r, 0.7, rng),
                             test::random_mask(n, r, 0.7, rng));
        ProblemInstance instance(test::random_matrix(m, n, rng), supports);
        FactorPair factors{project_to_support(test::random_matrix(m, r, rng), supports.left),
                           project_to_support(test::random_matrix(n, r, rng), supports.right)};
        auto [gx, gy] = masked_gradient(instance, factors);
        const double scale = std::sqrt(gx.frobenius_sq() + gy.frobenius_sq());
        if (scale <= 1e-6) continue;
        ++counted;
        auto [fx, fy] = test::fd_gradient(instance, factors, 1e-6);
        const double err = std::sqrt((gx - fx).frobenius_sq() + (gy - fy).frobenius_sq());
        worst = std::max(worst, err / scale);
    }
    const bool pass = worst <= 1e-4;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "100 instances vs central differences: max rel err %.2e",
                  worst);
    report(9, "masked gradient correctness", pass, detail);
}

void criterion_10_unattained() {
    UnattainedLuInstance inst = gen_unattained_lu_instance();
    bool losses_ok = true;
    for (double k : {1.0, 10.0, 1000.0}) {
        const double value = loss(inst.instance, inst.witness(k));
        const double expected = 1.0 / (k * k);
        losses_ok = losses_ok && std::abs(value - expected) <= 1e-15 * expected;
    }
    TractabilityCertificate cert = certify(inst.instance.supports);
    bool refused = false;
    try {
        svd_fsmf2(inst.instance.target, inst.instance.supports);
    } catch (const CertificateMismatchError&) {
        refused = true;
    }
    const bool pass = losses_ok && cert.level == TractabilityLevel::Unknown &&
                      cert.spurious_condition_met && refused;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "witness losses 1/k^2 %s; certificate %s with spurious flag %s; solver refused %s",
                  losses_ok ? "exact" : "WRONG", to_string(cert.level).c_str(),
                  cert.spurious_condition_met ? "set" : "MISSING", refused ? "yes" : "NO");
    report(10, "unattained infimum demonstration", pass, detail);
}

void criterion_11_smart_init() {
    std::mt19937_64 rng(1011);
    int done = 0;
    bool pass = true;
    double worst = 0.0;
    while (done < 20) {
        const int m = 2 + static_cast<int>(rng() % 4);
        const int n = 2 + static_cast<int>(rng() % 4);
        const int r = 1 + static_cast<int>(rng() % 4);
        SupportPair supports(test::random_mask(m, r, 0.5, rng),
                             test::random_mask(n, r, 0.5, rng));
        TractabilityCertificate cert = certify(supports);
        if (cert.level == TractabilityLevel::Unknown) continue;
        ++done;
        ProblemInstance instance(test::random_matrix(m, n, rng), supports);
        FactorPair opt = svd_fsmf2_certified(instance.target, supports, cert);
        FactorPair start = init_factors(supports, static_cast<std::uint64_t>(done));
        FeasiblePath path = smart_init_path(instance, opt, start.X, 1000);
        double previous = 1e300;
        for (int s = 0; s < 1000; ++s) {
            FactorPair p = path.sampler(static_cast<double>(s) / 999.0);
            pass = pass && p.respects(supports);
            const double value = loss(instance, p);
            if (s > 0) worst = std::max(worst, value - previous);
            previous = value;
        }
    }
    pass = pass && worst <= 1e-12;
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "20 certified instances, 1000 samples each: max loss rise %.2e", worst);
    report(11, "monotone warm-start path", pass, detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n----------------\n");
    criterion_1_eckart_young();
    criterion_2_hadamard_exact();
    criterion_3_benchmark_ordering();
    criterion_4_gsigma();
    criterion_5_spurious_constructions();
    criterion_6_reduction_maps();
    criterion_7_hodlr();
    criterion_8_palm_freezing();
    criterion_9_gradient();
    criterion_10_unattained();
    criterion_11_smart_init();
    std::printf("----------------\n%s\n", g_failures == 0 ? "all criteria passed"
                                                          : "SOME CRITERIA FAILED");
    return g_failures == 0 ? 0 : 1;
}
