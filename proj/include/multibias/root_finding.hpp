#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

namespace multibias::roots {

struct Bracket {
  double lo;
  double hi;
};

/// Grows `hi` geometrically from `start` until `f(hi) >= target`.
/// `f` must be nondecreasing on [lo, inf). Returns nullopt if no finite
/// upper end is found.
template <class F>
std::optional<Bracket> expand_upward(F&& f, double target, double lo, double start,
                                     double factor = 2.0, std::size_t max_steps = 2000) {
  double hi = start;
  for (std::size_t i = 0; i < max_steps && std::isfinite(hi); ++i) {
    if (f(hi) >= target) return Bracket{lo, hi};
    lo = hi;
    hi *= factor;
  }
  return std::nullopt;
}

/// Bisection for `f(x) = target` with `f` nondecreasing on the bracket and
/// f(lo) <= target <= f(hi). Stops once the bracket is narrower than
/// `rel_tol * hi` or cannot be split further in double precision.
template <class F>
double bisect_increasing(F&& f, double target, Bracket b, double rel_tol = 1e-15,
                         std::size_t max_iter = 400) {
  double lo = b.lo;
  double hi = b.hi;
  for (std::size_t i = 0; i < max_iter; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= rel_tol * hi) break;
  }
  // The end nearer the target in function value.
  return std::abs(f(lo) - target) <= std::abs(f(hi) - target) ? lo : hi;
}

}  // namespace multibias::roots
