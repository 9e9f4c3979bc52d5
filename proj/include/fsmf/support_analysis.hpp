#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsmf/problem.hpp"
#include "fsmf/support.hpp"

namespace fsmf {

/// Columns grouped by identical rank-one contribution supports. Columns
/// whose rank-one support is empty form classes with an empty
/// representative; those are flagged complete by convention since they
/// contribute nothing.
struct ColumnClass {
    std::vector<int> members;  // sorted column indices
    RankOneSupport rep;
    bool is_cec = false;
};

struct ClassPartition {
    std::vector<ColumnClass> classes;  // ordered by smallest member column
    std::vector<int> cec_columns;      // T, sorted
    std::vector<int> outside_columns;  // complement of T, sorted

    const ColumnClass& class_of(int column) const;
    /// Union of complete-class representatives as an m x n cell set.
    SupportMask cec_region(int m, int n) const;
};

/// Rank-one support of column k: supp(I_{:,k}) x supp(J_{:,k}).
std::vector<RankOneSupport> rank_one_supports(const SupportPair& supports);

ClassPartition partition_classes(const SupportPair& supports);

/// What is left of a non-complete column's rank-one support after removing
/// the complete-class region. `cells` is kept only when not rectangular.
struct OutsideSupport {
    bool rectangular = false;
    RankOneSupport rect;               // valid when rectangular
    std::vector<Cell> cells;           // offending cell set otherwise
};

/// Index split driving the two-stage direct solver: columns in complete
/// classes (`*_cec`), the rectangular cores of the remaining columns
/// (`*_reduced`, the reduced instance's masks), and the leftover entries
/// (`*_free`, optimal solutions may put anything there).
struct Taxonomy {
    SupportMask left_cec, left_reduced, left_free;
    SupportMask right_cec, right_reduced, right_free;
    std::map<int, OutsideSupport> outside_supports;  // keyed by column in T-bar
};

struct NonRectangularWitness {
    int column;
    std::vector<Cell> cells;
};

/// Either the taxonomy or, when some outside support is not rectangular,
/// the witnesses (and no masks).
struct TaxonomyResult {
    std::optional<Taxonomy> taxonomy;
    std::vector<NonRectangularWitness> failures;

    bool ok() const { return taxonomy.has_value(); }
};

TaxonomyResult taxonomy_split(const SupportPair& supports, const ClassPartition& partition);

enum class TractabilityLevel { DisjointClasses, ReducibleOutsideCEC, Unknown };

std::string to_string(TractabilityLevel level);

/// Witness tuple for the sufficient spurious-landscape condition; indices
/// are 0-based like everything in memory.
struct SpuriousWitness {
    int i1, j1, i2, j2, k;
};

struct TractabilityCertificate {
    TractabilityLevel level = TractabilityLevel::Unknown;
    ClassPartition partition;
    std::optional<Taxonomy> taxonomy;  // present unless some S'_k is non-rectangular
    std::vector<NonRectangularWitness> rect_failures;
    bool spurious_condition_met = false;
    std::optional<SpuriousWitness> spurious_witness;
};

/// Checks, in order: pairwise-disjoint class representatives; rectangular
/// and pairwise equal-or-disjoint outside supports; otherwise Unknown plus
/// a scan for the spurious-landscape witness tuple.
TractabilityCertificate certify(const SupportPair& supports);

/// Per complete class: does X restricted to (R_P, P) or Y restricted to
/// (C_P, P) have full row rank? Rank is counted as singular values above
/// 1e-9 times the largest one.
struct CecRankReport {
    struct Entry {
        std::vector<int> members;
        bool left_full_rank;
        bool right_full_rank;
    };
    bool all_full_rank = true;
    std::vector<Entry> entries;
};

CecRankReport is_cec_full_rank(const ProblemInstance& instance, const FactorPair& factors,
                               const ClassPartition& partition);

}  // namespace fsmf
