#pragma once

#include <cstdint>
#include <utility>

#include "fsmf/problem.hpp"
#include "fsmf/support.hpp"

namespace fsmf {

/// Weighted rank-one approximation data: minimize ||(A - x y^T) .* W||^2
/// over vectors x, y. W is binary.
struct McpInstance {
    DenseMatrix A;
    SupportMask W;  // observation mask, m x n

    McpInstance(DenseMatrix a, SupportMask w);

    double objective(const std::vector<double>& x, const std::vector<double>& y) const;
};

/// Factor masks that make the fixed-support problem share the weighted
/// problem's infimum: after transposing so that rows >= cols, r = n + 1,
/// the first n left columns carry the complement of W, the last column is
/// full, and the right mask pairs each of the first n columns with one
/// coordinate.
struct McpReduction {
    SupportPair supports;
    bool transposed = false;  // reduction built against A^T

    /// The fixed-support instance for a given target (transposed when the
    /// reduction was).
    ProblemInstance instance(const DenseMatrix& a) const;
};

McpReduction mcp_to_fsmf(const SupportMask& w);

/// Lifts a rank-one pair (x, y) to factors of the reduced instance with
/// exactly the same objective value.
FactorPair map_mcp_solution_to_fsmf(const McpReduction& reduction, const DenseMatrix& a,
                                    const std::vector<double>& x, const std::vector<double>& y);

/// Projects factors of the reduced instance back to a rank-one pair whose
/// weighted objective is no worse.
std::pair<std::vector<double>, std::vector<double>> map_fsmf_solution_to_mcp(
    const McpReduction& reduction, const FactorPair& factors);

// Structured support families.

SupportPair gen_full(int m, int n, int r);
/// Lower-triangular masks on both sides (m = n = r).
SupportPair gen_lu(int n);
/// ones(2^a) (x) id(2^b) against id(2^a) (x) ones(2^b), a = ceil(N/2).
SupportPair gen_kron1(int n_log2);
/// ones(2) (x) id(2^{N-1}) against id(2) (x) ones(2^{N-1}).
SupportPair gen_kron2(int n_log2);
/// Recursive two-block masks of size 2^N x (3*2^N - 2) under which every
/// hierarchically off-diagonal rank-one matrix factors exactly.
SupportPair gen_hodlr(int n_log2);

/// Sylvester construction, entries +-1, size 2^N.
DenseMatrix gen_hadamard(int n_log2);

/// Random matrix with rank-one off-diagonal blocks at every recursion
/// level (the family gen_hodlr supports reproduce exactly).
DenseMatrix gen_random_hodlr_matrix(int n_log2, std::uint64_t seed);

/// The 2x2 instance whose infimum (zero) is approached only with exploding
/// coefficients, plus the witness sequence: loss(witness(k)) = 1/k^2 while
/// the largest coefficient grows like k.
struct UnattainedLuInstance {
    ProblemInstance instance;
    FactorPair witness(double k) const;
};

UnattainedLuInstance gen_unattained_lu_instance();

}  // namespace fsmf
