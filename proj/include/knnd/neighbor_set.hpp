#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "knnd/core.hpp"

namespace knnd {

/// Capacity-K set of neighbors of one anchor, kept sorted nearest-first
/// under the anchor's order. Single-owner; never shared between threads.
///
/// Every call to the ranking system made by insert() is tallied in
/// comparisons(), which the descent rounds report as comparator-call counts.
class BoundedNeighborSet {
 public:
  BoundedNeighborSet(ItemId anchor, std::size_t capacity);

  /// Adopts members that are already sorted under the anchor's order.
  /// Only checks size, anchor exclusion and duplicates, not the order.
  static BoundedNeighborSet fromSorted(ItemId anchor, std::size_t capacity,
                                       std::span<ItemId const> sorted);

  /// Insert-if-better. Returns false when the candidate is already present
  /// or ranks behind the last member of a full set. Throws ConfigError when
  /// candidate is the anchor.
  bool insert(RankingSystem const& rs, ItemId candidate);

  ItemId anchor() const noexcept { return anchor_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool full() const noexcept { return members_.size() == capacity_; }
  bool contains(ItemId id) const noexcept;
  std::span<ItemId const> members() const noexcept { return members_; }
  std::uint64_t comparisons() const noexcept { return comparisons_; }

 private:
  ItemId anchor_;
  std::size_t capacity_;
  std::vector<ItemId> members_;
  std::uint64_t comparisons_ = 0;
};

}  // namespace knnd
