#include "fsmf/support_analysis.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fsmf/errors.hpp"
#include "fsmf/svd.hpp"

namespace fsmf {

std::vector<RankOneSupport> rank_one_supports(const SupportPair& supports) {
    const int r = supports.inner_dim();
    std::vector<RankOneSupport> out(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) {
        out[k].row_set = supports.left.column_rows(k);
        out[k].col_set = supports.right.column_rows(k);
    }
    return out;
}

const ColumnClass& ClassPartition::class_of(int column) const {
    for (const auto& c : classes)
        if (std::binary_search(c.members.begin(), c.members.end(), column)) return c;
    throw std::out_of_range("ClassPartition::class_of: column not in partition");
}

SupportMask ClassPartition::cec_region(int m, int n) const {
    std::vector<Cell> cells;
    for (const auto& c : classes) {
        if (!c.is_cec || c.rep.empty()) continue;
        for (int i : c.rep.row_set)
            for (int j : c.rep.col_set) cells.emplace_back(i, j);
    }
    return SupportMask(m, n, std::move(cells));
}

ClassPartition partition_classes(const SupportPair& supports) {
    const int r = supports.inner_dim();
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<int>> groups;
    for (int k = 0; k < r; ++k)
        groups[{supports.left.column_rows(k), supports.right.column_rows(k)}].push_back(k);

    ClassPartition partition;
    for (auto& [key, members] : groups) {
        ColumnClass c;
        c.members = members;
        c.rep.row_set = key.first;
        c.rep.col_set = key.second;
        // A column with an empty rank-one support contributes nothing;
        // min(|R|, |C|) = 0 makes the completeness inequality vacuous.
        c.is_cec = static_cast<int>(c.members.size()) >=
                   static_cast<int>(std::min(c.rep.row_set.size(), c.rep.col_set.size()));
        partition.classes.push_back(std::move(c));
    }
    std::sort(partition.classes.begin(), partition.classes.end(),
              [](const ColumnClass& a, const ColumnClass& b) {
                  return a.members.front() < b.members.front();
              });
    for (const auto& c : partition.classes) {
        auto& bucket = c.is_cec ? partition.cec_columns : partition.outside_columns;
        bucket.insert(bucket.end(), c.members.begin(), c.members.end());
    }
    std::sort(partition.cec_columns.begin(), partition.cec_columns.end());
    std::sort(partition.outside_columns.begin(), partition.outside_columns.end());
    return partition;
}

namespace {

// Rectangle(ness) of an explicit cell set: collect row and column sets and
// compare the product's cardinality.
OutsideSupport classify_outside(const std::vector<Cell>& cells) {
    OutsideSupport out;
    if (cells.empty()) {
        out.rectangular = true;
        return out;
    }
    std::vector<int> rows, cols;
    for (const auto& [i, j] : cells) {
        rows.push_back(i);
        cols.push_back(j);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    if (rows.size() * cols.size() == cells.size()) {
        out.rectangular = true;
        out.rect.row_set = std::move(rows);
        out.rect.col_set = std::move(cols);
    } else {
        out.cells = cells;
    }
    return out;
}

}  // namespace

TaxonomyResult taxonomy_split(const SupportPair& supports, const ClassPartition& partition) {
    const int m = supports.left.rows();
    const int n = supports.right.rows();
    const int r = supports.inner_dim();
    SupportMask cec_region = partition.cec_region(m, n);

    TaxonomyResult result;
    std::map<int, OutsideSupport> outside;
    for (const auto& c : partition.classes) {
        if (c.is_cec) continue;
        std::vector<Cell> cells;
        for (int i : c.rep.row_set)
            for (int j : c.rep.col_set)
                if (!cec_region.contains(i, j)) cells.emplace_back(i, j);
        OutsideSupport os = classify_outside(cells);
        if (!os.rectangular)
            result.failures.push_back({c.members.front(), os.cells});
        for (int k : c.members) outside[k] = os;
    }
    if (!result.failures.empty()) return result;

    std::vector<Cell> left_cec, left_reduced, left_free;
    std::vector<Cell> right_cec, right_reduced, right_free;
    for (int k = 0; k < r; ++k) {
        const bool in_cec =
            std::binary_search(partition.cec_columns.begin(), partition.cec_columns.end(), k);
        if (in_cec) {
            for (int i : supports.left.column_rows(k)) left_cec.emplace_back(i, k);
            for (int j : supports.right.column_rows(k)) right_cec.emplace_back(j, k);
            continue;
        }
        const OutsideSupport& os = outside.at(k);
        for (int i : supports.left.column_rows(k)) {
            const bool core = os.rectangular &&
                              std::binary_search(os.rect.row_set.begin(), os.rect.row_set.end(), i);
            (core ? left_reduced : left_free).emplace_back(i, k);
        }
        for (int j : supports.right.column_rows(k)) {
            const bool core = os.rectangular &&
                              std::binary_search(os.rect.col_set.begin(), os.rect.col_set.end(), j);
            (core ? right_reduced : right_free).emplace_back(j, k);
        }
    }

    Taxonomy tax;
    tax.left_cec = SupportMask(m, r, std::move(left_cec));
    tax.left_reduced = SupportMask(m, r, std::move(left_reduced));
    tax.left_free = SupportMask(m, r, std::move(left_free));
    tax.right_cec = SupportMask(n, r, std::move(right_cec));
    tax.right_reduced = SupportMask(n, r, std::move(right_reduced));
    tax.right_free = SupportMask(n, r, std::move(right_free));
    tax.outside_supports = std::move(outside);
    result.taxonomy = std::move(tax);
    return result;
}

std::string to_string(TractabilityLevel level) {
    switch (level) {
        case TractabilityLevel::DisjointClasses: return "DisjointClasses";
        case TractabilityLevel::ReducibleOutsideCEC: return "ReducibleOutsideCEC";
        case TractabilityLevel::Unknown: return "Unknown";
    }
    return "Unknown";
}

namespace {

// Coverage count per cell over a list of rectangles; linear in covered cells.
std::vector<int> coverage_counts(int m, int n, const std::vector<const RankOneSupport*>& rects) {
    std::vector<int> counts(static_cast<std::size_t>(m) * n, 0);
    for (const auto* rect : rects)
        for (int i : rect->row_set)
            for (int j : rect->col_set) ++counts[static_cast<std::size_t>(i) * n + j];
    return counts;
}

bool representatives_pairwise_disjoint(int m, int n, const ClassPartition& partition) {
    std::vector<const RankOneSupport*> rects;
    for (const auto& c : partition.classes)
        if (!c.rep.empty()) rects.push_back(&c.rep);
    for (int count : coverage_counts(m, n, rects))
        if (count > 1) return false;
    return true;
}

// Outside supports must be pairwise equal or disjoint: count coverage over
// one representative per distinct rectangle.
bool outside_equal_or_disjoint(int m, int n, const std::map<int, OutsideSupport>& outside) {
    std::vector<RankOneSupport> distinct;
    for (const auto& [k, os] : outside) {
        if (os.rect.empty()) continue;
        if (std::find(distinct.begin(), distinct.end(), os.rect) == distinct.end())
            distinct.push_back(os.rect);
    }
    std::vector<const RankOneSupport*> rects;
    for (const auto& r : distinct) rects.push_back(&r);
    for (int count : coverage_counts(m, n, rects))
        if (count > 1) return false;
    return true;
}

std::optional<SpuriousWitness> scan_spurious_witness(const SupportPair& supports,
                                                     const std::vector<RankOneSupport>& rank_ones) {
    const int m = supports.left.rows();
    const int n = supports.right.rows();
    // Per-cell multiplicity counted over columns, not classes: duplicated
    // columns in one class still touch the cell twice.
    std::vector<int> mult(static_cast<std::size_t>(m) * n, 0);
    for (const auto& s : rank_ones)
        for (int i : s.row_set)
            for (int j : s.col_set) ++mult[static_cast<std::size_t>(i) * n + j];
    auto multiplicity = [&](int i, int j) { return mult[static_cast<std::size_t>(i) * n + j]; };

    for (int k = 0; k < static_cast<int>(rank_ones.size()); ++k) {
        const RankOneSupport& s = rank_ones[k];
        for (int i1 : s.row_set) {
            for (int j1 : s.col_set) {
                if (multiplicity(i1, j1) != 1) continue;
                for (int i2 : s.row_set) {
                    if (i2 == i1 || multiplicity(i2, j1) != 1) continue;
                    for (int j2 : s.col_set) {
                        if (j2 == j1 || multiplicity(i1, j2) != 1) continue;
                        if (multiplicity(i2, j2) >= 2) return SpuriousWitness{i1, j1, i2, j2, k};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

TractabilityCertificate certify(const SupportPair& supports) {
    const int m = supports.left.rows();
    const int n = supports.right.rows();
    TractabilityCertificate cert;
    cert.partition = partition_classes(supports);

    TaxonomyResult tax = taxonomy_split(supports, cert.partition);
    if (tax.ok())
        cert.taxonomy = std::move(tax.taxonomy);
    else
        cert.rect_failures = std::move(tax.failures);

    if (representatives_pairwise_disjoint(m, n, cert.partition)) {
        cert.level = TractabilityLevel::DisjointClasses;
        return cert;
    }
    if (cert.taxonomy &&
        outside_equal_or_disjoint(m, n, cert.taxonomy->outside_supports)) {
        cert.level = TractabilityLevel::ReducibleOutsideCEC;
        return cert;
    }

    cert.level = TractabilityLevel::Unknown;
    auto witness = scan_spurious_witness(supports, rank_one_supports(supports));
    if (witness) {
        cert.spurious_condition_met = true;
        cert.spurious_witness = *witness;
    }
    return cert;
}

namespace {

int numeric_rank(const DenseMatrix& block) {
    if (block.rows() == 0 || block.cols() == 0) return 0;
    SvdResult svd = jacobi_svd(block);
    if (svd.singular_values.empty() || svd.singular_values.front() == 0.0) return 0;
    const double cutoff = 1e-9 * svd.singular_values.front();
    int rank = 0;
    for (double s : svd.singular_values)
        if (s > cutoff) ++rank;
    return rank;
}

DenseMatrix gather_block(const DenseMatrix& m, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
    DenseMatrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(static_cast<int>(i), static_cast<int>(j)) = m(rows[i], cols[j]);
    return out;
}

}  // namespace

CecRankReport is_cec_full_rank(const ProblemInstance& instance, const FactorPair& factors,
                               const ClassPartition& partition) {
    if (!factors.respects(instance.supports))
        throw PreconditionError("is_cec_full_rank: factors leave the supports");
    CecRankReport report;
    for (const auto& c : partition.classes) {
        if (!c.is_cec || c.rep.empty()) continue;
        DenseMatrix xb = gather_block(factors.X, c.rep.row_set, c.members);
        DenseMatrix yb = gather_block(factors.Y, c.rep.col_set, c.members);
        CecRankReport::Entry entry;
        entry.members = c.members;
        entry.left_full_rank = numeric_rank(xb) == static_cast<int>(c.rep.row_set.size());
        entry.right_full_rank = numeric_rank(yb) == static_cast<int>(c.rep.col_set.size());
        if (!entry.left_full_rank && !entry.right_full_rank) report.all_full_rank = false;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace fsmf
