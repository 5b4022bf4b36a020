#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace zipfscale {

// Worst-case and related-work rate curves for Zipf data (alpha = 1).

enum class BaselineKind { Sublinear, Linear, AdagradBound, AdamKappa, SDGradOneNorm };

const char* to_string(BaselineKind kind);

struct BaselinePoint {
  double t = 0.0;
  double value = 0.0;
};

struct BaselineCurve {
  BaselineKind kind = BaselineKind::Sublinear;
  std::size_t d = 0;
  std::vector<BaselinePoint> points;
};

struct WorstCaseRates {
  double r_sub = 0.0;
  double r_lin = 0.0;
};

/// r_sub = 2d / (H_{d,1} t) and r_lin = (1 - 1/d)^t.
WorstCaseRates worst_case_rates(std::size_t d, double t);

/// d H_{d,1} / (T H_{d,2}).
double adagrad_bound(std::size_t d, double horizon_T);

/// min(d^2 + 1, d).
std::uint64_t adam_kappa(std::uint64_t d);

/// Gradient 1-norm of sign descent at t = tau sqrt(d) / 2, eta = 1/(z t phi),
/// relative to its initial value H_{d,1} / z.
double sd_grad_one_norm_ratio(std::size_t d, double tau, double phi);

BaselineCurve baseline_curve(BaselineKind kind, std::size_t d, const std::vector<double>& times);

}  // namespace zipfscale
