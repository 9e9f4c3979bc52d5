#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsmf/problem.hpp"

namespace fsmf {

enum class Method { GD, Momentum, Adam, Palm };

std::string to_string(Method method);
std::optional<Method> method_from_string(const std::string& name);

struct IterativeConfig {
    Method method = Method::GD;
    double learning_rate = 1e-2;
    std::vector<double> grid;  // used by grid_search
    int max_iters = 10000;
    /// Stop once log10 of the Frobenius norm of the residual drops to this.
    double stop_log10_error = -10.0;
    double momentum_beta = 0.9;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    /// When set, PALM projects by keeping the (k_left, k_right) largest
    /// magnitudes per factor instead of projecting onto the fixed supports.
    std::optional<std::pair<int, int>> palm_sparsity;
    std::uint64_t seed = 0;
    bool record_loss_trace = true;
    bool record_support_change = false;  // forced on for PALM
    /// Loss or any entry beyond this means the run diverged; the run stops
    /// and flags the report instead of throwing.
    double divergence_threshold = 1e15;
    /// Step cap for PALM when a factor is (numerically) zero.
    double palm_step_cap = 1e6;
    /// Test hook, called after every iteration with the current factors.
    std::function<void(int iter, const FactorPair&)> observer;
};

/// The grid from which learning rates are tuned: {5e-k, 1e-k | k = 1..4}.
std::vector<double> default_learning_rate_grid();

/// Entries inside each support column drawn N(0, 1/nnz(column)); columns
/// with an empty support stay zero. Deterministic per seed.
FactorPair init_factors(const SupportPair& supports, std::uint64_t seed);

std::pair<FactorPair, SolveReport> run(const ProblemInstance& instance,
                                       const IterativeConfig& config,
                                       std::optional<FactorPair> init = std::nullopt);

/// Per-factor gradient steps 1 / (1.01 * 2 * ||other factor||_op^2),
/// capped when the other factor vanishes. Guarantees monotone descent.
std::pair<double, double> palm_step_sizes(const FactorPair& factors,
                                          double step_cap = 1e6);

struct GridSearchResult {
    double learning_rate = 0.0;
    FactorPair factors;
    SolveReport report;
    std::vector<std::pair<double, SolveReport>> all_runs;  // in grid order
};

/// Runs every rate; picks the converged run with the fewest iterations
/// (wall time, then grid order, break remaining ties). If nothing
/// converges, returns the lowest final loss with converged=false.
GridSearchResult grid_search(const ProblemInstance& instance, const IterativeConfig& config);

}  // namespace fsmf
