#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsmf/problem.hpp"
#include "fsmf/support_analysis.hpp"
#include "fsmf/svd.hpp"

namespace fsmf {

/// One column of (X, Y) at a time is set to a best rank-one approximation
/// of the running residual masked to that column's rank-one support. The
/// residual update makes this inherently sequential.
FactorPair greedy_generic(const DenseMatrix& a, const std::vector<RankOneSupport>& supports_list);

/// Blockwise truncated SVDs per equivalence class, ascending by smallest
/// member column, with the residual updated after each class. Classes with
/// pairwise-disjoint representatives are solved in parallel (their blocks
/// cannot interact). Output always respects the supports; it is globally
/// optimal when the representatives are pairwise disjoint.
FactorPair svd_fsmf(const DenseMatrix& a, const SupportPair& supports);

/// Same as svd_fsmf but with an explicit class iteration order (indices
/// into partition_classes(supports).classes).
FactorPair svd_fsmf_ordered(const DenseMatrix& a, const SupportPair& supports,
                            const std::vector<int>& class_order);

/// Exact factorization of B when supp(B) lies inside the complete-class
/// region and every class is complete. Classes are processed by increasing
/// representative size, which respects containment chains. Throws
/// PreconditionError otherwise.
FactorPair exact_cec_completion(const DenseMatrix& b, const SupportPair& supports_t);

/// Two-stage direct solver: an exact completion over the complete-class
/// region plus a blockwise SVD solve of the reduced instance. Requires a
/// certificate other than Unknown unless best_effort is set; in best-effort
/// mode the (generally suboptimal) blockwise-greedy factors are returned.
FactorPair svd_fsmf2(const DenseMatrix& a, const SupportPair& supports, bool best_effort = false);
FactorPair svd_fsmf2_certified(const DenseMatrix& a, const SupportPair& supports,
                               const TractabilityCertificate& cert, bool best_effort = false);

/// Both optimality conditions for instances with a ReducibleOutsideCEC (or
/// DisjointClasses) certificate: the residual vanishes on the
/// complete-class region, and the reduced pair attains the reduced
/// instance's blockwise-SVD optimum.
struct OptimalityCheck {
    bool optimal = false;
    std::string reason;          // empty when optimal
    double region_residual = 0;  // Frobenius norm of the residual on the CEC region
    double loss_gap = 0;         // reduced-instance loss minus its optimum
};

OptimalityCheck check_optimality(const ProblemInstance& instance, const FactorPair& factors,
                                 const Taxonomy& taxonomy);

}  // namespace fsmf
