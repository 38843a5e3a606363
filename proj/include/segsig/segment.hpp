#pragma once

#include <algorithm>
#include <stdexcept>

namespace segsig {

/// A closed sub-interval [a, b] of [0, 1], or the distinguished empty set.
///
/// The empty segment is a separate value, not an alias for a degenerate
/// interval: [a, a] is a legal measure-zero segment and both occur as
/// hypotheses, so they must stay distinguishable.
struct Segment {
  double a = 0.0;
  double b = 0.0;
  bool is_empty = true;

  static Segment closed(double a, double b) {
    if (!(0.0 <= a && a <= b && b <= 1.0))
      throw std::invalid_argument("Segment::closed: need 0 <= a <= b <= 1");
    return Segment{a, b, false};
  }

  static Segment empty() { return Segment{}; }

  double length() const { return is_empty ? 0.0 : b - a; }

  bool contains(double x) const { return !is_empty && a <= x && x <= b; }
};

inline bool operator==(const Segment& lhs, const Segment& rhs) {
  if (lhs.is_empty || rhs.is_empty) return lhs.is_empty == rhs.is_empty;
  return lhs.a == rhs.a && lhs.b == rhs.b;
}

/// Lebesgue measure of the symmetric difference of two segments.
inline double nikodym_distance(const Segment& g1, const Segment& g2) {
  const double overlap =
      (g1.is_empty || g2.is_empty)
          ? 0.0
          : std::max(0.0, std::min(g1.b, g2.b) - std::max(g1.a, g2.a));
  return g1.length() + g2.length() - 2.0 * overlap;
}

}  // namespace segsig
