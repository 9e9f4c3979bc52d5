#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fsmf/dense_matrix.hpp"
#include "fsmf/support.hpp"

namespace fsmf {

/// The two factors (X m x r, Y n x r) of a candidate factorization A ~ X Y^T.
struct FactorPair {
    DenseMatrix X;
    DenseMatrix Y;

    DenseMatrix product() const;  // X * Y^T

    bool respects(const SupportPair& supports) const;
};

/// One unit of solving/benchmarking: a target matrix plus the factor masks.
struct ProblemInstance {
    DenseMatrix target;    // m x n
    SupportPair supports;  // left m x r, right n x r

    ProblemInstance() = default;
    ProblemInstance(DenseMatrix a, SupportPair s);

    int m() const { return target.rows(); }
    int n() const { return target.cols(); }
    int r() const { return supports.inner_dim(); }
};

/// Per-iteration change of the nonzero pattern of each factor.
struct SupportChange {
    int iteration;
    int left_diff;
    int right_diff;
};

struct SolveReport {
    double final_loss = 0.0;  // squared Frobenius
    std::vector<std::pair<int, double>> loss_trace;
    double wall_time_s = 0.0;
    std::string method_tag;
    std::optional<std::string> certificate;
    std::optional<std::vector<SupportChange>> support_change_trace;
    int iterations = 0;
    std::optional<double> learning_rate;
    std::uint64_t seed = 0;
    bool diverged = false;
    bool converged = false;  // reached the stopping threshold (iterative only)
};

// Core operations shared by every solver.

/// Squared Frobenius norm of A - X Y^T.
double loss(const ProblemInstance& instance, const FactorPair& factors);

/// Gradient of the loss, (-2 (A - XY^T) Y, -2 (A - XY^T)^T X), with entries
/// outside the supports zeroed.
std::pair<DenseMatrix, DenseMatrix> masked_gradient(const ProblemInstance& instance,
                                                    const FactorPair& factors);

/// Entries inside the mask unchanged, the rest set to zero.
DenseMatrix project_to_support(const DenseMatrix& m, const SupportMask& mask);

}  // namespace fsmf
