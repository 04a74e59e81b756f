#include "knnd/neighbor_set.hpp"

#include <algorithm>

namespace knnd {

BoundedNeighborSet::BoundedNeighborSet(ItemId anchor, std::size_t capacity)
    : anchor_(anchor), capacity_(capacity) {
  if (capacity == 0) {
    throw ConfigError("neighbor set capacity must be positive");
  }
  members_.reserve(capacity);
}

BoundedNeighborSet BoundedNeighborSet::fromSorted(ItemId anchor, std::size_t capacity,
                                                  std::span<ItemId const> sorted) {
  BoundedNeighborSet set(anchor, capacity);
  if (sorted.size() > capacity) {
    throw ConfigError("neighbor set: more members than capacity");
  }
  for (ItemId id : sorted) {
    if (id == anchor || set.contains(id)) {
      throw ConfigError("neighbor set: anchor or duplicate among members");
    }
    set.members_.push_back(id);
  }
  return set;
}

bool BoundedNeighborSet::contains(ItemId id) const noexcept {
  return std::find(members_.begin(), members_.end(), id) != members_.end();
}

bool BoundedNeighborSet::insert(RankingSystem const& rs, ItemId candidate) {
  if (candidate == anchor_) {
    throw ConfigError("neighbor set: candidate equals anchor");
  }
  if (contains(candidate)) return false;

  auto const before = [&](ItemId a, ItemId b) {
    ++comparisons_;
    return rs.precedes(anchor_, a, b);
  };

  auto end = members_.end();
  if (full()) {
    if (!before(candidate, members_.back())) return false;
    --end;  // the last member is evicted, candidate lands somewhere before it
  }
  auto const pos = std::upper_bound(members_.begin(), end, candidate,
                                    [&](ItemId c, ItemId m) { return before(c, m); }) -
                   members_.begin();
  if (full()) {
    members_.pop_back();
  }
  members_.insert(members_.begin() + pos, candidate);
  return true;
}

}  // namespace knnd
