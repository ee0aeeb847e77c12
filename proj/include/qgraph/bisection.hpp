#pragma once

#include <cmath>
#include <optional>

namespace qgraph {

struct Bracket {
  double lo;
  double hi;
  int iterations = 0;
  double midpoint() const { return 0.5 * (lo + hi); }
};

// Shrinks [lo, hi] around a sign change of f until hi - lo <= tol or the
// interval can no longer be split in floating point. Returns nullopt when
// f(lo) and f(hi) have the same strict sign.
template <typename F>
std::optional<Bracket> bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return Bracket{lo, lo};
  if (fhi == 0.0) return Bracket{hi, hi};
  if (std::signbit(flo) == std::signbit(fhi)) return std::nullopt;
  Bracket b{lo, hi};
  while (b.hi - b.lo > tol) {
    const double mid = b.midpoint();
    if (mid <= b.lo || mid >= b.hi) break;
    const double fm = f(mid);
    ++b.iterations;
    if (fm == 0.0) return Bracket{mid, mid, b.iterations};
    if (std::signbit(fm) == std::signbit(flo)) {
      b.lo = mid;
      flo = fm;
    } else {
      b.hi = mid;
    }
  }
  return b;
}

}  // namespace qgraph
