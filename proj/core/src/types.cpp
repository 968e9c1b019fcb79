#include "cssel/types.hpp"

#include <algorithm>
#include <string>

#include "cssel/errors.hpp"

namespace cssel {

ColumnSubset::ColumnSubset(std::vector<Index> indices, Index ambient)
    : indices_(std::move(indices)), ambient_(ambient) {
  if (ambient_ < 0) throw DomainError("ColumnSubset: negative ambient size");
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const Index j = indices_[k];
    if (j < 0 || j >= ambient_) {
      throw DomainError("ColumnSubset: index " + std::to_string(j) + " outside [0, " +
                        std::to_string(ambient_) + ")");
    }
    if (k > 0 && indices_[k - 1] >= j) {
      throw DomainError("ColumnSubset: indices must be strictly increasing");
    }
  }
}

ColumnSubset ColumnSubset::from_unsorted(std::vector<Index> indices, Index ambient) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return ColumnSubset(std::move(indices), ambient);
}

ColumnSubset ColumnSubset::all(Index ambient) {
  std::vector<Index> idx(static_cast<std::size_t>(ambient));
  for (Index j = 0; j < ambient; ++j) idx[static_cast<std::size_t>(j)] = j;
  return ColumnSubset(std::move(idx), ambient);
}

bool ColumnSubset::contains(Index j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

bool ColumnSubset::is_subset_of(const ColumnSubset& other) const {
  return ambient_ == other.ambient_ &&
         std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

ColumnSubset ColumnSubset::select(std::span<const Index> positions) const {
  std::vector<Index> picked;
  picked.reserve(positions.size());
  for (Index p : positions) {
    if (p < 0 || p >= size()) throw DomainError("ColumnSubset::select: position out of range");
    picked.push_back(indices_[static_cast<std::size_t>(p)]);
  }
  return from_unsorted(std::move(picked), ambient_);
}

}  // namespace cssel
