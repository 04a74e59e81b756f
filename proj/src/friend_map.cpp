#include "knnd/friend_map.hpp"

#include <algorithm>

namespace knnd {

FriendMap::FriendMap(std::size_t n, std::size_t k) : n_(n), k_(k), ids_(n * k) {}

bool FriendMap::isFriend(ItemId x, ItemId y) const noexcept {
  auto const row = friends(x);
  return std::find(row.begin(), row.end(), y) != row.end();
}

void FriendMap::validate() const {
  if (ids_.size() != n_ * k_) {
    throw ConfigError("friend map: storage does not match n*K");
  }
  std::vector<ItemId> sorted;
  for (ItemId x = 0; x < n_; ++x) {
    auto const row = friends(x);
    sorted.assign(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("friend map: duplicate friend");
    }
    for (ItemId y : sorted) {
      if (y == x || y >= n_) {
        throw ConfigError("friend map: self-loop or id out of range");
      }
    }
  }
}

namespace {

// Counting-sort transpose of an adjacency given as rows(u) for u in [0, n).
template <class Rows>
void transposeInto(std::size_t n, Rows rows, std::vector<std::size_t>& offsets,
                   std::vector<ItemId>& ids) {
  offsets.assign(n + 1, 0);
  for (ItemId u = 0; u < n; ++u) {
    for (ItemId v : rows(u)) ++offsets[v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  ids.resize(offsets[n]);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (ItemId u = 0; u < n; ++u) {
    for (ItemId v : rows(u)) ids[cursor[v]++] = u;
  }
}

}  // namespace

CoFriendMap buildCoFriends(FriendMap const& friends) {
  CoFriendMap out;
  transposeInto(
      friends.size(), [&](ItemId u) { return friends.friends(u); }, out.offsets_, out.ids_);
  return out;
}

CoFriendMap transpose(CoFriendMap const& cofriends) {
  CoFriendMap out;
  transposeInto(
      cofriends.size(), [&](ItemId u) { return cofriends.cofriends(u); }, out.offsets_,
      out.ids_);
  return out;
}

}  // namespace knnd
