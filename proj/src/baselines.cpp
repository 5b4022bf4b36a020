#include "zipfscale/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zipfscale/errors.hpp"
#include "zipfscale/powerlaw.hpp"

namespace zipfscale {

const char* to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Sublinear: return "sublinear";
    case BaselineKind::Linear: return "linear";
    case BaselineKind::AdagradBound: return "adagrad";
    case BaselineKind::AdamKappa: return "adam_kappa";
    case BaselineKind::SDGradOneNorm: return "sd_grad_one_norm";
  }
  return "unknown";
}

WorstCaseRates worst_case_rates(std::size_t d, double t) {
  if (d < 2) throw DomainError("worst_case_rates: d must be >= 2");
  if (!(t >= 0.0)) throw DomainError("worst_case_rates: t must be >= 0");
  const double n = static_cast<double>(d);
  WorstCaseRates rates;
  rates.r_sub = t > 0.0 ? 2.0 * n / (harmonic_partial(d, 1.0) * t)
                        : std::numeric_limits<double>::infinity();
  rates.r_lin = std::exp(t * std::log1p(-1.0 / n));
  return rates;
}

double adagrad_bound(std::size_t d, double horizon_T) {
  if (d < 2) throw DomainError("adagrad_bound: d must be >= 2");
  if (!(horizon_T > 0.0)) throw DomainError("adagrad_bound: T must be > 0");
  return static_cast<double>(d) * harmonic_partial(d, 1.0) /
         (horizon_T * harmonic_partial(d, 2.0));
}

std::uint64_t adam_kappa(std::uint64_t d) {
  if (d < 1) throw DomainError("adam_kappa: d must be >= 1");
  return std::min(d * d + 1, d);
}

double sd_grad_one_norm_ratio(std::size_t d, double tau, double phi) {
  if (d < 2) throw DomainError("sd_grad_one_norm_ratio: d must be >= 2");
  if (!(tau > 0.0)) throw DomainError("sd_grad_one_norm_ratio: tau must be > 0");
  if (!(phi >= 1.0 && phi <= static_cast<double>(d))) {
    throw DomainError("sd_grad_one_norm_ratio: phi must lie in [1, d]");
  }
  const double t = 0.5 * tau * std::sqrt(static_cast<double>(d));
  const auto decreasing = static_cast<std::size_t>(std::floor(phi));
  double norm = 0.0;
  for (std::size_t k = 1; k <= decreasing; ++k) norm += 1.0 / static_cast<double>(k) - 1.0 / phi;
  norm += static_cast<double>(d - decreasing) / (2.0 * t * phi);
  return norm / harmonic_partial(d, 1.0);
}

BaselineCurve baseline_curve(BaselineKind kind, std::size_t d, const std::vector<double>& times) {
  BaselineCurve curve{kind, d, {}};
  for (const double t : times) {
    double value = 0.0;
    switch (kind) {
      case BaselineKind::Sublinear: value = worst_case_rates(d, t).r_sub; break;
      case BaselineKind::Linear: value = worst_case_rates(d, t).r_lin; break;
      case BaselineKind::AdagradBound: value = adagrad_bound(d, t); break;
      case BaselineKind::AdamKappa: value = static_cast<double>(adam_kappa(d)); break;
      case BaselineKind::SDGradOneNorm:
        value = sd_grad_one_norm_ratio(d, 2.0 * t / std::sqrt(static_cast<double>(d)), 1.5);
        break;
    }
    curve.points.push_back({t, value});
  }
  return curve;
}

}  // namespace zipfscale
