#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace zipfscale {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi]. Stops
/// once the bracket is narrower than rel_tol * max(|lo|, |hi|, 1e-300) or
/// after max_iter reductions. The best evaluated point is returned, which may
/// be an end point when f is monotone on the bracket.
template <typename F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double rel_tol,
                                      int max_iter = 500) {
  constexpr double kInvPhi = 0.6180339887498948482;
  if (hi < lo) std::swap(lo, hi);
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  ScalarMinimum best{x1, f1, 0};
  if (f2 < best.value) best = {x2, f2, 0};
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if (hi - lo <= rel_tol * scale) break;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
      if (f1 < best.value) best = {x1, f1, 0};
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
      if (f2 < best.value) best = {x2, f2, 0};
    }
  }
  for (const double end : {lo, hi}) {
    const double fe = f(end);
    if (fe < best.value) best = {end, fe, 0};
  }
  best.iterations = iter;
  return best;
}

}  // namespace zipfscale
