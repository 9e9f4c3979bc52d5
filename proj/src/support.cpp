#include "fsmf/support.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsmf {

SupportMask::SupportMask(int rows, int cols, std::vector<Cell> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SupportMask: negative dimension");
    for (const auto& [i, j] : cells_) {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::invalid_argument("SupportMask: cell out of range");
    }
    std::sort(cells_.begin(), cells_.end(),
              [](const Cell& a, const Cell& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    rebuild_caches();
}

void SupportMask::rebuild_caches() {
    col_rows_.assign(cols_, {});
    bits_.assign(cols_, std::vector<bool>(rows_, false));
    for (const auto& [i, j] : cells_) {
        col_rows_[j].push_back(i);
        bits_[j][static_cast<std::size_t>(i)] = true;
    }
}

SupportMask SupportMask::full(int rows, int cols) {
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(rows) * cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) cells.emplace_back(i, j);
    return SupportMask(rows, cols, std::move(cells));
}

SupportMask SupportMask::from_indicator(const DenseMatrix& indicator) {
    std::vector<Cell> cells;
    for (int i = 0; i < indicator.rows(); ++i)
        for (int j = 0; j < indicator.cols(); ++j)
            if (indicator(i, j) != 0.0) cells.emplace_back(i, j);
    return SupportMask(indicator.rows(), indicator.cols(), std::move(cells));
}

DenseMatrix SupportMask::indicator() const {
    DenseMatrix m(rows_, cols_);
    for (const auto& [i, j] : cells_) m(i, j) = 1.0;
    return m;
}

SupportMask SupportMask::set_union(const SupportMask& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("SupportMask::set_union: shape mismatch");
    std::vector<Cell> cells = cells_;
    cells.insert(cells.end(), other.cells_.begin(), other.cells_.end());
    return SupportMask(rows_, cols_, std::move(cells));
}

SupportMask SupportMask::set_difference(const SupportMask& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("SupportMask::set_difference: shape mismatch");
    std::vector<Cell> cells;
    for (const auto& [i, j] : cells_)
        if (!other.contains(i, j)) cells.emplace_back(i, j);
    return SupportMask(rows_, cols_, std::move(cells));
}

bool SupportMask::is_subset_of(const SupportMask& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (const auto& [i, j] : cells_)
        if (!other.contains(i, j)) return false;
    return true;
}

bool RankOneSupport::contains(int i, int j) const {
    return std::binary_search(row_set.begin(), row_set.end(), i) &&
           std::binary_search(col_set.begin(), col_set.end(), j);
}

bool rank_one_supports_disjoint(const RankOneSupport& a, const RankOneSupport& b) {
    if (a.empty() || b.empty()) return true;
    auto intersects = [](const std::vector<int>& u, const std::vector<int>& v) {
        std::size_t i = 0, j = 0;
        while (i < u.size() && j < v.size()) {
            if (u[i] == v[j]) return true;
            (u[i] < v[j]) ? ++i : ++j;
        }
        return false;
    };
    return !(intersects(a.row_set, b.row_set) && intersects(a.col_set, b.col_set));
}

}  // namespace fsmf
