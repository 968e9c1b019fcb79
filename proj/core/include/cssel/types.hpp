#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cssel {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted, duplicate-free set of column indices into a matrix with
/// `ambient()` columns.
class ColumnSubset {
 public:
  ColumnSubset() = default;

  /// Validates that `indices` is strictly increasing and bounded by `ambient`.
  ColumnSubset(std::vector<Index> indices, Index ambient);
  ColumnSubset(std::initializer_list<Index> indices, Index ambient)
      : ColumnSubset(std::vector<Index>(indices), ambient) {}

  /// Sorts and deduplicates before validating.
  static ColumnSubset from_unsorted(std::vector<Index> indices, Index ambient);
  static ColumnSubset all(Index ambient);

  std::span<const Index> indices() const { return indices_; }
  Index ambient() const { return ambient_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  Index operator[](Index k) const { return indices_[static_cast<std::size_t>(k)]; }

  bool contains(Index j) const;
  bool is_subset_of(const ColumnSubset& other) const;

  /// Maps positions inside this subset (e.g. pruning results computed on a
  /// submatrix) back to ambient indices.
  ColumnSubset select(std::span<const Index> positions) const;

  friend bool operator==(const ColumnSubset&, const ColumnSubset&) = default;

 private:
  std::vector<Index> indices_;
  Index ambient_ = 0;
};

}  // namespace cssel
