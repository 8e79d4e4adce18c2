#pragma once

#include <stdexcept>

namespace reldom {

/// Vertex of a combinatorial horoball: an element of the base coset together
/// with a level. Level 0 is identified with the coset inside the Cayley graph.
struct HoroballVertex {
  long base = 0;  // position along the base, e.g. the exponent for a cyclic coset
  int level = 0;
};

/// Graph distance between two horoball vertices whose bases are
/// `base_distance` apart in the base graph. Closed form: minimize, over peak
/// levels m >= max(levels), two vertical segments plus a horizontal segment
/// of ceil(base_distance / 2^m) edges.
long horoball_distance(int level_a, int level_b, long base_distance);

inline long horoball_distance(const HoroballVertex& a, const HoroballVertex& b,
                              long base_distance) {
  return horoball_distance(a.level, b.level, base_distance);
}

}  // namespace reldom
