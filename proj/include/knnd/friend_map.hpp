#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "knnd/core.hpp"

namespace knnd {

/// K-out digraph: row x holds the K friends of x, nearest first.
/// Stored as one flat n*K id array; payloads stay in the Dataset.
class FriendMap {
 public:
  FriendMap() = default;
  FriendMap(std::size_t n, std::size_t k);

  std::size_t size() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  std::span<ItemId const> friends(ItemId x) const noexcept {
    return {ids_.data() + std::size_t{x} * k_, k_};
  }
  std::span<ItemId> row(ItemId x) noexcept { return {ids_.data() + std::size_t{x} * k_, k_}; }

  bool isFriend(ItemId x, ItemId y) const noexcept;

  /// Throws ConfigError unless every row has K distinct ids in range and
  /// none equals its anchor.
  void validate() const;

  friend bool operator==(FriendMap const&, FriendMap const&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<ItemId> ids_;
};

/// Transpose of a FriendMap in CSR layout: cofriends(y) lists every x with
/// y in friends(x), in ascending order of x.
class CoFriendMap {
 public:
  CoFriendMap() = default;

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<ItemId const> cofriends(ItemId y) const noexcept {
    return {ids_.data() + offsets_[y], offsets_[y + 1] - offsets_[y]};
  }
  std::size_t totalSize() const noexcept { return ids_.size(); }

  friend bool operator==(CoFriendMap const&, CoFriendMap const&) = default;

 private:
  friend CoFriendMap buildCoFriends(FriendMap const& friends);
  friend CoFriendMap transpose(CoFriendMap const& cofriends);

  std::vector<std::size_t> offsets_;
  std::vector<ItemId> ids_;
};

CoFriendMap buildCoFriends(FriendMap const& friends);

/// Views a cofriend map as a digraph of its own (each row sized by in-degree)
/// and transposes it again. For a K-out input this recovers the original
/// arcs, so the result is compared to the friend map as an arc set.
CoFriendMap transpose(CoFriendMap const& cofriends);

}  // namespace knnd
