#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsmf/problem.hpp"

namespace fsmf {

/// One (size, method) cell of the transform-factorization benchmark: the
/// Hadamard matrix of size 2^N against one of the structured support
/// families, solved directly or by a grid-tuned first-order method.
struct BenchCell {
    std::string family;  // kron1 | kron2
    int n_log2 = 0;
    std::string method;  // direct | gd | momentum | adam
    SolveReport report;  // learning_rate set for tuned methods
};

struct BenchOptions {
    std::string family = "kron1";
    int n_min = 3;
    int n_max = 6;
    std::vector<std::string> methods = {"direct", "gd", "momentum", "adam"};
    std::uint64_t seed = 0;
    int max_iters = 50000;
    double stop_log10_error = -10.0;
};

/// Runs every cell. Tuning time is not part of the reported wall times;
/// each tuned method reports its best run only.
std::vector<BenchCell> run_benchmark(const BenchOptions& options);

std::string benchmark_summary_table(const std::vector<BenchCell>& cells);

}  // namespace fsmf
