#include "fsmf/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fsmf/errors.hpp"
#include "fsmf/kernels.hpp"
#include "fsmf/parallel.hpp"

namespace fsmf {

namespace {

DenseMatrix gather_block(const DenseMatrix& m, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
    DenseMatrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<int>(i), static_cast<int>(j)) = m(rows[i], cols[j]);
    return out;
}

// Solves one class: writes the best rank-|members| factors of the residual
// block into the class columns and subtracts the approximant from the
// residual in place.
void solve_class(DenseMatrix& residual, const ColumnClass& c, DenseMatrix& x, DenseMatrix& y) {
    if (c.rep.empty()) return;
    const auto& rows = c.rep.row_set;
    const auto& cols = c.rep.col_set;
    DenseMatrix block = gather_block(residual, rows, cols);
    const int k = std::min<int>(static_cast<int>(c.members.size()),
                                std::min<int>(block.rows(), block.cols()));
    TruncatedSVDResult svd = truncated_svd(block, k);
    for (int t = 0; t < k; ++t) {
        const int col = c.members[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < rows.size(); ++i) x(rows[i], col) = svd.U(static_cast<int>(i), t);
        for (std::size_t j = 0; j < cols.size(); ++j) y(cols[j], col) = svd.V(static_cast<int>(j), t);
    }
    DenseMatrix approx = svd.approximant();
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            residual(rows[i], cols[j]) -= approx(static_cast<int>(i), static_cast<int>(j));
}

bool classes_pairwise_disjoint(int m, int n, const ClassPartition& partition) {
    std::vector<int> counts(static_cast<std::size_t>(m) * n, 0);
    for (const auto& c : partition.classes)
        for (int i : c.rep.row_set)
            for (int j : c.rep.col_set)
                if (++counts[static_cast<std::size_t>(i) * n + j] > 1) return false;
    return true;
}

FactorPair run_classwise(const DenseMatrix& a, const SupportPair& supports,
                         const ClassPartition& partition, const std::vector<int>& order) {
    const int m = a.rows(), n = a.cols(), r = supports.inner_dim();
    FactorPair out{DenseMatrix(m, r), DenseMatrix(n, r)};
    DenseMatrix residual = a;
    const bool disjoint = classes_pairwise_disjoint(m, n, partition);
    if (disjoint) {
        // Disjoint blocks never touch each other's residual cells.
        const int count = static_cast<int>(order.size());
#pragma omp parallel for schedule(dynamic) num_threads(parallel::max_threads())
        for (int idx = 0; idx < count; ++idx)
            solve_class(residual, partition.classes[static_cast<std::size_t>(order[static_cast<std::size_t>(idx)])], out.X, out.Y);
    } else {
        for (int idx : order) solve_class(residual, partition.classes[static_cast<std::size_t>(idx)], out.X, out.Y);
    }
    return out;
}

}  // namespace

FactorPair greedy_generic(const DenseMatrix& a, const std::vector<RankOneSupport>& supports_list) {
    const int m = a.rows(), n = a.cols();
    const int r = static_cast<int>(supports_list.size());
    FactorPair out{DenseMatrix(m, r), DenseMatrix(n, r)};
    DenseMatrix residual = a;
    for (int i = 0; i < r; ++i) {
        ColumnClass c;
        c.members = {i};
        c.rep = supports_list[static_cast<std::size_t>(i)];
        solve_class(residual, c, out.X, out.Y);
    }
    return out;
}

FactorPair svd_fsmf(const DenseMatrix& a, const SupportPair& supports) {
    ClassPartition partition = partition_classes(supports);
    std::vector<int> order(partition.classes.size());
    std::iota(order.begin(), order.end(), 0);
    return run_classwise(a, supports, partition, order);
}

FactorPair svd_fsmf_ordered(const DenseMatrix& a, const SupportPair& supports,
                            const std::vector<int>& class_order) {
    ClassPartition partition = partition_classes(supports);
    if (class_order.size() != partition.classes.size())
        throw PreconditionError("svd_fsmf_ordered: order must list every class once");
    return run_classwise(a, supports, partition, class_order);
}

FactorPair exact_cec_completion(const DenseMatrix& b, const SupportPair& supports_t) {
    ClassPartition partition = partition_classes(supports_t);
    for (const auto& c : partition.classes)
        if (!c.is_cec)
            throw PreconditionError("exact_cec_completion: class of column " +
                                    std::to_string(c.members.front() + 1) + " is not complete");
    SupportMask region = partition.cec_region(b.rows(), b.cols());
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            if (b(i, j) != 0.0 && !region.contains(i, j))
                throw PreconditionError("exact_cec_completion: target supported outside the class region");

    // Increasing representative size; containment chains are then processed
    // inner-to-outer, which is the order the telescoping argument needs.
    std::vector<int> order(partition.classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return partition.classes[static_cast<std::size_t>(lhs)].rep.cell_count() <
               partition.classes[static_cast<std::size_t>(rhs)].rep.cell_count();
    });
    return run_classwise(b, supports_t, partition, order);
}

FactorPair svd_fsmf2(const DenseMatrix& a, const SupportPair& supports, bool best_effort) {
    return svd_fsmf2_certified(a, supports, certify(supports), best_effort);
}

FactorPair svd_fsmf2_certified(const DenseMatrix& a, const SupportPair& supports,
                               const TractabilityCertificate& cert, bool best_effort) {
    if (cert.level == TractabilityLevel::Unknown) {
        if (!best_effort)
            throw CertificateMismatchError(
                "svd_fsmf2: supports carry no tractability certificate (run best-effort to "
                "get a feasible, possibly suboptimal pair)");
        return svd_fsmf(a, supports);
    }
    if (!cert.taxonomy) return svd_fsmf(a, supports);
    const Taxonomy& tax = *cert.taxonomy;
    // No complete classes: the reduced instance is the whole instance.
    if (cert.partition.cec_columns.empty())
        return svd_fsmf(a, SupportPair(tax.left_reduced, tax.right_reduced));
    SupportMask cec_region = cert.partition.cec_region(a.rows(), a.cols());

    DenseMatrix a_cec = kernels::apply_mask(a, cec_region);
    FactorPair completion = exact_cec_completion(a_cec, SupportPair(tax.left_cec, tax.right_cec));

    DenseMatrix a_reduced = a;
    for (const auto& [i, j] : cec_region.cells()) a_reduced(i, j) = 0.0;
    FactorPair reduced = svd_fsmf(a_reduced, SupportPair(tax.left_reduced, tax.right_reduced));

    completion.X += reduced.X;
    completion.Y += reduced.Y;
    return completion;
}

OptimalityCheck check_optimality(const ProblemInstance& instance, const FactorPair& factors,
                                 const Taxonomy& taxonomy) {
    OptimalityCheck check;
    const DenseMatrix& a = instance.target;
    DenseMatrix res = kernels::residual(a, factors.X, factors.Y);

    ClassPartition partition = partition_classes(instance.supports);
    SupportMask cec_region = partition.cec_region(a.rows(), a.cols());
    check.region_residual = std::sqrt(kernels::frobenius_sq(kernels::apply_mask(res, cec_region)));
    const double a_norm = a.frobenius();
    if (check.region_residual > 1e-8 * std::max(a_norm, 1e-300)) {
        check.reason = "residual does not vanish on the complete-class region";
        return check;
    }

    DenseMatrix a_reduced = a;
    for (const auto& [i, j] : cec_region.cells()) a_reduced(i, j) = 0.0;
    SupportPair reduced_supports(taxonomy.left_reduced, taxonomy.right_reduced);
    FactorPair restricted{kernels::apply_mask(factors.X, taxonomy.left_reduced),
                          kernels::apply_mask(factors.Y, taxonomy.right_reduced)};
    const double restricted_loss =
        kernels::frobenius_sq(kernels::residual(a_reduced, restricted.X, restricted.Y));
    FactorPair optimum = svd_fsmf(a_reduced, reduced_supports);
    const double optimum_loss =
        kernels::frobenius_sq(kernels::residual(a_reduced, optimum.X, optimum.Y));
    check.loss_gap = restricted_loss - optimum_loss;
    if (restricted_loss > optimum_loss + 1e-8 * optimum_loss + 1e-12 * a.frobenius_sq()) {
        check.reason = "reduced pair does not attain the reduced instance's optimum";
        return check;
    }
    check.optimal = true;
    return check;
}

}  // namespace fsmf
