#pragma once

#include <utility>
#include <vector>

#include "fsmf/dense_matrix.hpp"

namespace fsmf {

using Cell = std::pair<int, int>;  // (row, col), 0-based

/// Sparse binary mask over a rows x cols grid. Stores a coordinate list
/// sorted by (col, row) plus per-column caches, since column slices
/// dominate every access pattern in this library.
class SupportMask {
public:
    SupportMask() = default;
    SupportMask(int rows, int cols, std::vector<Cell> cells = {});

    static SupportMask full(int rows, int cols);
    static SupportMask from_indicator(const DenseMatrix& indicator);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    bool contains(int i, int j) const { return bits_[j][static_cast<std::size_t>(i)]; }

    /// Rows present in column k, sorted ascending.
    const std::vector<int>& column_rows(int k) const { return col_rows_[k]; }
    int column_nnz(int k) const { return static_cast<int>(col_rows_[k].size()); }

    /// All cells sorted by (col, row).
    const std::vector<Cell>& cells() const { return cells_; }

    DenseMatrix indicator() const;

    /// Set union/difference keep the grid dimensions.
    SupportMask set_union(const SupportMask& other) const;
    SupportMask set_difference(const SupportMask& other) const;

    bool is_subset_of(const SupportMask& other) const;
    bool operator==(const SupportMask& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && cells_ == other.cells_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Cell> cells_;                 // sorted by (col, row), unique
    std::vector<std::vector<int>> col_rows_;  // per-column sorted row lists
    std::vector<std::vector<bool>> bits_;     // per-column membership bitsets

    void rebuild_caches();
};

/// The pair of factor masks (left m x r, right n x r) sharing the inner
/// dimension r.
struct SupportPair {
    SupportMask left;
    SupportMask right;

    SupportPair() = default;
    SupportPair(SupportMask l, SupportMask r) : left(std::move(l)), right(std::move(r)) {
        if (left.cols() != right.cols())
            throw std::invalid_argument("SupportPair: factor masks disagree on inner dimension");
    }

    int inner_dim() const { return left.cols(); }
};

/// Rectangular index set row_set x col_set covered by one factor column's
/// outer product.
struct RankOneSupport {
    std::vector<int> row_set;  // sorted
    std::vector<int> col_set;  // sorted

    bool empty() const { return row_set.empty() || col_set.empty(); }
    std::size_t cell_count() const { return row_set.size() * col_set.size(); }
    bool contains(int i, int j) const;
    bool operator==(const RankOneSupport& other) const {
        return row_set == other.row_set && col_set == other.col_set;
    }
};

bool rank_one_supports_disjoint(const RankOneSupport& a, const RankOneSupport& b);

}  // namespace fsmf
