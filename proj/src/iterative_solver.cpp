#include "fsmf/iterative_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "fsmf/kernels.hpp"
#include "fsmf/parallel.hpp"
#include "fsmf/svd.hpp"

namespace fsmf {

std::string to_string(Method method) {
    switch (method) {
        case Method::GD: return "gd";
        case Method::Momentum: return "momentum";
        case Method::Adam: return "adam";
        case Method::Palm: return "palm";
    }
    return "gd";
}

std::optional<Method> method_from_string(const std::string& name) {
    if (name == "gd") return Method::GD;
    if (name == "momentum") return Method::Momentum;
    if (name == "adam") return Method::Adam;
    if (name == "palm") return Method::Palm;
    return std::nullopt;
}

std::vector<double> default_learning_rate_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 4; ++k) {
        grid.push_back(5.0 * std::pow(10.0, -k));
        grid.push_back(std::pow(10.0, -k));
    }
    return grid;
}

FactorPair init_factors(const SupportPair& supports, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    auto fill = [&](const SupportMask& mask) {
        DenseMatrix out(mask.rows(), mask.cols());
        for (int k = 0; k < mask.cols(); ++k) {
            const int nnz = mask.column_nnz(k);
            if (nnz == 0) continue;
            const double stddev = 1.0 / std::sqrt(static_cast<double>(nnz));
            for (int i : mask.column_rows(k)) out(i, k) = stddev * unit(rng);
        }
        return out;
    };
    FactorPair factors;
    factors.X = fill(supports.left);
    factors.Y = fill(supports.right);
    return factors;
}

namespace {

// Positions of the k largest magnitudes; equal magnitudes at the cutoff
// keep the lower linear index.
DenseMatrix keep_top_k(const DenseMatrix& m, int k) {
    const std::size_t total = m.size();
    std::vector<std::size_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = i;
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), total);
    auto d = m.data();
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double va = std::abs(d[a]), vb = std::abs(d[b]);
        if (va != vb) return va > vb;
        return a < b;
    });
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t t = 0; t < keep; ++t) {
        const std::size_t flat = idx[t];
        out(static_cast<int>(flat) / m.cols(), static_cast<int>(flat) % m.cols()) = d[flat];
    }
    return out;
}

std::vector<Cell> nonzero_cells(const DenseMatrix& m) {
    std::vector<Cell> cells;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) cells.emplace_back(i, j);
    return cells;
}

int symmetric_difference_size(const std::vector<Cell>& a, const std::vector<Cell>& b) {
    std::size_t i = 0, j = 0, common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<int>(a.size() + b.size() - 2 * common);
}

struct AdamState {
    DenseMatrix m, v;
    double beta1_pow = 1.0, beta2_pow = 1.0;
};

void adam_update(DenseMatrix& param, const DenseMatrix& grad, AdamState& state,
                 const IterativeConfig& cfg) {
    auto p = param.data();
    auto g = grad.data();
    auto m = state.m.data();
    auto v = state.v.data();
    state.beta1_pow *= cfg.adam_beta1;
    state.beta2_pow *= cfg.adam_beta2;
    const double c1 = 1.0 - state.beta1_pow;
    const double c2 = 1.0 - state.beta2_pow;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
        v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
        p[i] -= cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.adam_eps);
    }
}

bool non_finite_or_huge(const DenseMatrix& m, double threshold) {
    for (double v : m.data())
        if (!std::isfinite(v) || std::abs(v) > threshold) return true;
    return false;
}

}  // namespace

namespace {

// 1 / (gamma * Lipschitz) for one block, Lipschitz = 2 ||other||_op^2.
double palm_block_step(const DenseMatrix& other, double step_cap) {
    constexpr double gamma = 1.01;
    const double op = operator_norm(other);
    if (op <= 0.0) return step_cap;
    return std::min(step_cap, 1.0 / (gamma * 2.0 * op * op));
}

}  // namespace

std::pair<double, double> palm_step_sizes(const FactorPair& factors, double step_cap) {
    return {palm_block_step(factors.Y, step_cap), palm_block_step(factors.X, step_cap)};
}

std::pair<FactorPair, SolveReport> run(const ProblemInstance& instance,
                                       const IterativeConfig& config,
                                       std::optional<FactorPair> init) {
    const auto t0 = std::chrono::steady_clock::now();
    FactorPair factors = init ? std::move(*init) : init_factors(instance.supports, config.seed);
    const bool palm = config.method == Method::Palm;
    const bool sparsify = palm && config.palm_sparsity.has_value();
    const bool track_support = palm || config.record_support_change;

    SolveReport report;
    report.method_tag = to_string(config.method);
    report.seed = config.seed;
    report.learning_rate = palm ? std::nullopt : std::optional<double>(config.learning_rate);

    if (sparsify) {
        factors.X = keep_top_k(factors.X, config.palm_sparsity->first);
        factors.Y = keep_top_k(factors.Y, config.palm_sparsity->second);
    } else {
        factors.X = project_to_support(factors.X, instance.supports.left);
        factors.Y = project_to_support(factors.Y, instance.supports.right);
    }

    const double stop_loss = std::pow(10.0, 2.0 * config.stop_log10_error);
    double current = loss(instance, factors);
    if (config.record_loss_trace) report.loss_trace.emplace_back(0, current);
    if (track_support) report.support_change_trace.emplace();

    std::vector<Cell> left_supp, right_supp;
    if (track_support) {
        left_supp = nonzero_cells(factors.X);
        right_supp = nonzero_cells(factors.Y);
    }

    AdamState ax, ay;
    DenseMatrix vel_x, vel_y;
    if (config.method == Method::Adam) {
        ax = {DenseMatrix(factors.X.rows(), factors.X.cols()),
              DenseMatrix(factors.X.rows(), factors.X.cols())};
        ay = {DenseMatrix(factors.Y.rows(), factors.Y.cols()),
              DenseMatrix(factors.Y.rows(), factors.Y.cols())};
    } else if (config.method == Method::Momentum) {
        vel_x = DenseMatrix(factors.X.rows(), factors.X.cols());
        vel_y = DenseMatrix(factors.Y.rows(), factors.Y.cols());
    }

    int iter = 0;
    report.converged = current <= stop_loss;
    while (!report.converged && iter < config.max_iters) {
        ++iter;
        if (palm) {
            // One projected gradient step per factor, the other held fixed.
            const double step_x = palm_block_step(factors.Y, config.palm_step_cap);
            DenseMatrix res = kernels::residual(instance.target, factors.X, factors.Y);
            DenseMatrix gx = kernels::matmul_nn(res, factors.Y);
            for (int i = 0; i < factors.X.rows(); ++i)
                for (int j = 0; j < factors.X.cols(); ++j)
                    factors.X(i, j) += 2.0 * step_x * gx(i, j);
            factors.X = sparsify ? keep_top_k(factors.X, config.palm_sparsity->first)
                                 : project_to_support(factors.X, instance.supports.left);

            const double step_y = palm_block_step(factors.X, config.palm_step_cap);
            res = kernels::residual(instance.target, factors.X, factors.Y);
            DenseMatrix gy = kernels::matmul_tn(res, factors.X);
            for (int i = 0; i < factors.Y.rows(); ++i)
                for (int j = 0; j < factors.Y.cols(); ++j)
                    factors.Y(i, j) += 2.0 * step_y * gy(i, j);
            factors.Y = sparsify ? keep_top_k(factors.Y, config.palm_sparsity->second)
                                 : project_to_support(factors.Y, instance.supports.right);
        } else {
            // Both factors updated simultaneously from the same residual.
            auto [gx, gy] = masked_gradient(instance, factors);
            switch (config.method) {
                case Method::GD: {
                    auto x = factors.X.data();
                    auto y = factors.Y.data();
                    auto gxd = gx.data();
                    auto gyd = gy.data();
                    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= config.learning_rate * gxd[i];
                    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= config.learning_rate * gyd[i];
                    break;
                }
                case Method::Momentum: {
                    auto upd = [&](DenseMatrix& param, DenseMatrix& vel, const DenseMatrix& grad) {
                        auto p = param.data();
                        auto v = vel.data();
                        auto g = grad.data();
                        for (std::size_t i = 0; i < p.size(); ++i) {
                            v[i] = config.momentum_beta * v[i] + g[i];
                            p[i] -= config.learning_rate * v[i];
                        }
                    };
                    upd(factors.X, vel_x, gx);
                    upd(factors.Y, vel_y, gy);
                    break;
                }
                case Method::Adam: {
                    adam_update(factors.X, gx, ax, config);
                    adam_update(factors.Y, gy, ay, config);
                    break;
                }
                case Method::Palm: break;  // handled above
            }
            factors.X = project_to_support(factors.X, instance.supports.left);
            factors.Y = project_to_support(factors.Y, instance.supports.right);
        }

        if (track_support) {
            std::vector<Cell> new_left = nonzero_cells(factors.X);
            std::vector<Cell> new_right = nonzero_cells(factors.Y);
            report.support_change_trace->push_back(
                {iter, symmetric_difference_size(left_supp, new_left),
                 symmetric_difference_size(right_supp, new_right)});
            left_supp = std::move(new_left);
            right_supp = std::move(new_right);
        }

        if (non_finite_or_huge(factors.X, config.divergence_threshold) ||
            non_finite_or_huge(factors.Y, config.divergence_threshold)) {
            report.diverged = true;
            break;
        }
        current = loss(instance, factors);
        if (!std::isfinite(current) || current > config.divergence_threshold) {
            report.diverged = true;
            if (config.record_loss_trace) report.loss_trace.emplace_back(iter, current);
            break;
        }
        if (config.record_loss_trace) report.loss_trace.emplace_back(iter, current);
        if (config.observer) config.observer(iter, factors);
        report.converged = current <= stop_loss;
    }

    report.iterations = iter;
    report.final_loss = current;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(factors), std::move(report)};
}

GridSearchResult grid_search(const ProblemInstance& instance, const IterativeConfig& config) {
    std::vector<double> rates = config.grid.empty() ? default_learning_rate_grid() : config.grid;
    std::vector<std::pair<FactorPair, SolveReport>> runs(rates.size());

#pragma omp parallel for schedule(dynamic) num_threads(parallel::max_threads())
    for (int i = 0; i < static_cast<int>(rates.size()); ++i) {
        IterativeConfig cell = config;
        cell.grid.clear();
        cell.observer = nullptr;  // cells run concurrently
        cell.learning_rate = rates[static_cast<std::size_t>(i)];
        runs[static_cast<std::size_t>(i)] = run(instance, cell);
    }

    GridSearchResult result;
    int best = -1;
    for (int i = 0; i < static_cast<int>(rates.size()); ++i) {
        const SolveReport& r = runs[static_cast<std::size_t>(i)].second;
        result.all_runs.emplace_back(rates[static_cast<std::size_t>(i)], r);
        if (best < 0) {
            best = i;
            continue;
        }
        const SolveReport& b = runs[static_cast<std::size_t>(best)].second;
        bool better;
        if (r.converged != b.converged) {
            better = r.converged;
        } else if (r.converged) {
            better = r.iterations < b.iterations ||
                     (r.iterations == b.iterations && r.wall_time_s < b.wall_time_s);
        } else {
            better = r.final_loss < b.final_loss;
        }
        if (better) best = i;
    }
    result.learning_rate = rates[static_cast<std::size_t>(best)];
    result.factors = std::move(runs[static_cast<std::size_t>(best)].first);
    result.report = runs[static_cast<std::size_t>(best)].second;
    return result;
}

}  // namespace fsmf
