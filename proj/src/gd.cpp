#include "zipfscale/gd.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "zipfscale/errors.hpp"
#include "zipfscale/quadrature.hpp"
#include "zipfscale/specfun.hpp"
#include "zipfscale/summation.hpp"

namespace zipfscale {
namespace {

// 1/alpha snapped to the nearest integer when it is one up to rounding, so
// that floor/ceil of e.g. 1/(1/3) do not land one off.
double snapped_inverse(double alpha) {
  const double inv = 1.0 / alpha;
  const double nearest = std::round(inv);
  return std::abs(inv - nearest) <= 1e-12 * nearest ? nearest : inv;
}

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError(std::string(where) + ": alpha must be positive");
  }
}

}  // namespace

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::GD ? "gd" : "sd";
}

GDRegime gd_regime(double alpha) {
  check_alpha(alpha, "gd_regime");
  if (alpha < 1.0) return GDRegime::AlphaBelowOne;
  if (alpha == 1.0) return GDRegime::AlphaEqualsOne;
  return GDRegime::AlphaAboveOne;
}

GdLossModel::GdLossModel(const PowerLawSpec& spec)
    : spec_(spec), weights_(spec.d()), log_factor_(spec.d()), normalizer_(spec.z()) {
  const double alpha = spec.alpha();
  for (std::size_t k = 1; k <= spec.d(); ++k) {
    const double w = std::pow(static_cast<double>(k), -alpha);
    weights_[k - 1] = w;
    log_factor_[k - 1] = k == 1 ? 0.0 : std::log1p(-w);
  }
}

double GdLossModel::power_sum(double exponent) const {
  if (!(exponent >= 0.0)) throw DomainError("GdLossModel: exponent must be >= 0");
  if (exponent == 0.0) return normalizer_;
  double sum = 0.0;
  // k = 1 has factor (1 - 1)^exponent = 0 for any positive exponent.
  for (std::size_t idx = weights_.size(); idx-- > 1;) {
    sum += weights_[idx] * std::exp(exponent * log_factor_[idx]);
  }
  return sum;
}

double GdLossModel::relative_loss(double t) const {
  if (!(t >= 0.0)) throw DomainError("GdLossModel: t must be >= 0");
  if (t == 0.0) return 1.0;
  return power_sum(2.0 * t) / normalizer_;
}

double gd_relative_loss(const PowerLawSpec& spec, std::uint64_t t) {
  return GdLossModel(spec).relative_loss(static_cast<double>(t));
}

RateCurve gd_full_simulation(const FullEigenSystem& system, double eta,
                             std::span<const std::uint64_t> times) {
  if (system.d > kOracleMaxDim) throw SizeError("gd_full_simulation: system exceeds oracle cap");
  if (!(eta >= 0.0)) throw DomainError("gd_full_simulation: eta must be >= 0");
  RateCurve curve;
  curve.algorithm = Algorithm::GD;
  curve.d = system.d;
  curve.alpha = system.alpha;
  curve.time_semantics = TimeSemantics::RawSteps;
  const double initial = system.initial_loss();
  curve.points.reserve(times.size());
  for (const std::uint64_t t : times) {
    const double exponent = 2.0 * static_cast<double>(t);
    CompensatedSum loss;
    for (std::size_t idx = 0; idx < system.lambdas.size(); ++idx) {
      const double lambda = system.lambdas[idx];
      const double delta = system.deltas0[idx];
      loss.add(lambda * std::pow(1.0 - eta * lambda, exponent) * delta * delta);
    }
    curve.points.push_back({static_cast<double>(t), loss.value() / initial});
  }
  return curve;
}

RateCurve gd_full_simulation(const FullEigenSystem& system, double eta,
                             std::uint64_t t_max) {
  std::vector<std::uint64_t> times(t_max + 1);
  std::iota(times.begin(), times.end(), std::uint64_t{0});
  return gd_full_simulation(system, eta, times);
}

double gd_integral_form(std::size_t d, double alpha, double t) {
  check_alpha(alpha, "gd_integral_form");
  if (d < 2) throw DomainError("gd_integral_form: d must be >= 2");
  if (!(t >= 0.0)) throw DomainError("gd_integral_form: t must be >= 0");
  const double upper = std::log(static_cast<double>(d));
  // Integrate over z = ln k; dk = k dz.
  const auto integrand = [alpha, t](double z) {
    if (t == 0.0) return std::exp((1.0 - alpha) * z);
    const double w = std::exp(-alpha * z);
    if (w >= 1.0) return 0.0;
    return std::exp((1.0 - alpha) * z + t * std::log1p(-w));
  };
  QuadratureOptions options;
  options.rel_tol = 1e-13;
  const double peak = std::log1p(t) / alpha;
  if (peak > 0.0 && peak < upper) {
    return integrate(integrand, 0.0, peak, options).value +
           integrate(integrand, peak, upper, options).value;
  }
  return integrate(integrand, 0.0, upper, options).value;
}

double gd_approx_error_bound(std::size_t d, double alpha, double t) {
  check_alpha(alpha, "gd_approx_error_bound");
  if (d < 2) throw DomainError("gd_approx_error_bound: d must be >= 2");
  if (!(t >= 0.0)) throw DomainError("gd_approx_error_bound: t must be >= 0");
  const double d_alpha = std::pow(static_cast<double>(d), alpha);
  const double scale = (1.0 + t <= d_alpha) ? 1.0 + t : d_alpha;
  if (t == 0.0) return 1.0 / scale;
  return std::exp(t * std::log1p(-1.0 / scale)) / scale;
}

double gd_asymptotic_rate(double alpha, double tau) {
  check_alpha(alpha, "gd_asymptotic_rate");
  if (!(tau >= 0.0)) throw DomainError("gd_asymptotic_rate: tau must be >= 0");
  switch (gd_regime(alpha)) {
    case GDRegime::AlphaBelowOne:
      if (tau == 0.0) return 1.0;
      return (1.0 - alpha) / alpha * gen_exp_integral(1.0 / alpha, tau);
    case GDRegime::AlphaEqualsOne:
      if (tau > 1.0) {
        throw DomainError("gd_asymptotic_rate: tau must lie in [0, 1] when alpha = 1, got " +
                          std::to_string(tau));
      }
      return 1.0 - tau;
    case GDRegime::AlphaAboveOne:
      return beta(1.0 - 1.0 / alpha, 1.0 + 2.0 * tau) / (alpha * zeta(alpha));
  }
  return 0.0;
}

double gd_asymptotic_rate_power_form(double alpha, double t) {
  if (!(alpha > 1.0)) throw DomainError("gd_asymptotic_rate_power_form: requires alpha > 1");
  if (!(t > 0.0)) throw DomainError("gd_asymptotic_rate_power_form: requires t > 0");
  const double c = gamma_fn(1.0 - 1.0 / alpha) / (alpha * zeta(alpha));
  return c * std::pow(2.0 * t, -(1.0 - 1.0 / alpha));
}

double gd_time_scaling(double alpha, std::size_t d, double tau) {
  const double n = static_cast<double>(d);
  switch (gd_regime(alpha)) {
    case GDRegime::AlphaBelowOne:
      return 0.5 * tau * std::pow(n, alpha);
    case GDRegime::AlphaEqualsOne:
      return 0.5 * std::pow(n, tau);
    case GDRegime::AlphaAboveOne:
      return tau;
  }
  return 0.0;
}

double gd_rescaled_time(double alpha, std::size_t d, double t) {
  if (!(t >= 0.0)) throw DomainError("gd_rescaled_time: t must be >= 0");
  const double n = static_cast<double>(d);
  switch (gd_regime(alpha)) {
    case GDRegime::AlphaBelowOne:
      return 2.0 * t / std::pow(n, alpha);
    case GDRegime::AlphaEqualsOne:
      // t = 0 (and any t <= 1/2) sits at the start of the rescaled axis.
      return 2.0 * t <= 1.0 ? 0.0 : std::log(2.0 * t) / std::log(n);
    case GDRegime::AlphaAboveOne:
      return t;
  }
  return 0.0;
}

double gd_time_to_eps(double alpha, std::size_t d, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("gd_time_to_eps: eps must lie in (0, 1)");
  const double n = static_cast<double>(d);
  switch (gd_regime(alpha)) {
    case GDRegime::AlphaBelowOne: {
      const double tau = gen_exp_integral_inverse(1.0 / alpha, alpha / (1.0 - alpha) * eps);
      return 0.5 * tau * std::pow(n, alpha);
    }
    case GDRegime::AlphaEqualsOne:
      return std::pow(n, 1.0 - eps);
    case GDRegime::AlphaAboveOne: {
      const double c = gamma_fn(1.0 - 1.0 / alpha) / (alpha * zeta(alpha));
      return std::pow(c / eps, alpha / (alpha - 1.0));
    }
  }
  return 0.0;
}

GdTimeBounds gd_time_bounds_alpha_lt_1(double alpha, double eps) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("gd_time_bounds_alpha_lt_1: alpha must lie in (0, 1)");
  }
  if (!(eps > 0.0)) throw DomainError("gd_time_bounds_alpha_lt_1: eps must be > 0");
  const double ratio = (1.0 - alpha) / alpha;
  const double y = ratio / eps;
  if (!(y > 1.0)) {
    throw DomainError("gd_time_bounds_alpha_lt_1: (1-alpha)/(alpha eps) must exceed 1");
  }
  const double inv = snapped_inverse(alpha);
  GdTimeBounds bounds;
  bounds.tau_plus = std::log(y);
  bounds.tau_minus = bounds.tau_plus - std::log(std::log(y)) - std::ceil(inv);
  bounds.eps_threshold =
      std::min(std::exp(2.0 - std::floor(inv)), lambert_w(6.0) / 6.0) * ratio;
  return bounds;
}

}  // namespace zipfscale
