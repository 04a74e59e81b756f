#include "knnd/core.hpp"

namespace knnd {

Ordering compare(RankingSystem const& rs, ItemId x, ItemId y, ItemId z) {
  auto const n = rs.size();
  if (x >= n || y >= n || z >= n) {
    throw ConfigError("compare: item id out of range");
  }
  if (x == y || x == z || y == z) {
    throw ConfigError("compare: anchor and both items must be pairwise distinct");
  }
  return rs.precedes(x, y, z) ? Ordering::less : Ordering::greater;
}

}  // namespace knnd
