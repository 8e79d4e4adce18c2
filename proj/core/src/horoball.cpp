#include "reldom/horoball.hpp"

#include <algorithm>

namespace reldom {

long horoball_distance(int level_a, int level_b, long base_distance) {
  if (level_a < 0 || level_b < 0 || base_distance < 0)
    throw std::invalid_argument("horoball_distance: negative input");
  if (base_distance == 0) return std::labs(level_a - level_b);
  const int lo = std::min(level_a, level_b);
  const int hi = std::max(level_a, level_b);
  long best = -1;
  long pow2 = 1;
  for (int i = 0; i < hi; ++i) pow2 *= 2;
  for (int m = hi;; ++m) {
    const long horizontal = (base_distance + pow2 - 1) / pow2;
    const long total = (m - lo) + (m - hi) + horizontal;
    if (best < 0 || total < best) best = total;
    if (pow2 >= base_distance) break;  // larger peaks only add vertical steps
    pow2 *= 2;
  }
  return best;
}

}  // namespace reldom
