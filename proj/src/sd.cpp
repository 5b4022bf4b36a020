#include "zipfscale/sd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zipfscale/errors.hpp"
#include "zipfscale/golden.hpp"
#include "zipfscale/summation.hpp"
#include "zipfscale/specfun.hpp"

namespace zipfscale {
namespace {

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError(std::string(where) + ": alpha must be positive");
  }
}

void check_phi(double phi, std::size_t d, const char* where) {
  if (!(phi >= 1.0 && phi <= static_cast<double>(d))) {
    throw DomainError(std::string(where) + ": phi = " + std::to_string(phi) +
                      " outside [1, d = " + std::to_string(d) + "]");
  }
}

}  // namespace

SDConfig make_sd_config(const PowerLawSpec& spec, std::uint64_t horizon_T, double phi) {
  if (horizon_T == 0) throw DomainError("make_sd_config: horizon T must be >= 1");
  check_phi(phi, spec.d(), "make_sd_config");
  SDConfig config;
  config.horizon_T = horizon_T;
  config.phi = phi;
  config.eta = 1.0 / (spec.z() * static_cast<double>(horizon_T) * std::pow(phi, spec.alpha()));
  return config;
}

SDExactState make_sd_exact_state(double delta0_magnitude, double eta) {
  if (!(eta > 0.0)) throw DomainError("make_sd_exact_state: eta must be > 0");
  if (!(delta0_magnitude >= 0.0)) {
    throw DomainError("make_sd_exact_state: distance magnitude must be >= 0");
  }
  SDExactState state;
  state.delta0 = delta0_magnitude;
  state.eta = eta;
  auto steps = static_cast<std::uint64_t>(std::floor(delta0_magnitude / eta));
  // The quotient may round across an integer; restore t_switch * eta <= delta0.
  while (steps > 0 && static_cast<double>(steps) * eta > delta0_magnitude) --steps;
  while (static_cast<double>(steps + 1) * eta <= delta0_magnitude) ++steps;
  state.t_switch = steps;
  state.c = delta0_magnitude - static_cast<double>(steps) * eta;
  return state;
}

double sd_exact_distance(double delta0, double eta, std::uint64_t t) {
  if (!(eta > 0.0)) throw DomainError("sd_exact_distance: eta must be > 0");
  if (delta0 == 0.0) return 0.0;
  const double sign = delta0 > 0.0 ? 1.0 : -1.0;
  const SDExactState state = make_sd_exact_state(std::abs(delta0), eta);
  if (t <= state.t_switch) return sign * (state.delta0 - static_cast<double>(t) * eta);
  if (state.c == 0.0) return 0.0;
  const bool odd = ((t - state.t_switch) % 2) == 1;
  return sign * (odd ? state.c - eta : state.c);
}

double sd_simplified_distance(double delta0, double eta, std::uint64_t t) {
  if (!(eta > 0.0)) throw DomainError("sd_simplified_distance: eta must be > 0");
  if (!(delta0 >= 0.0)) throw DomainError("sd_simplified_distance: delta0 must be >= 0");
  const double travelled = static_cast<double>(t) * eta;
  // A tie within rounding (t eta == delta0 in exact arithmetic) stays on the
  // decreasing branch and lands on zero.
  if (travelled <= delta0 * (1.0 + 8.0 * std::numeric_limits<double>::epsilon())) {
    return std::max(0.0, delta0 - travelled);
  }
  return 0.5 * eta;
}

SdLossModel::SdLossModel(const PowerLawSpec& spec)
    : spec_(spec),
      h_alpha_(harmonic_prefix(spec.d(), spec.alpha())),
      h_two_alpha_(harmonic_prefix(spec.d(), 2.0 * spec.alpha())) {}

double SdLossModel::relative_loss(double horizon_T, double phi) const {
  if (!(horizon_T > 0.0)) throw DomainError("SdLossModel: horizon T must be > 0");
  const std::size_t d = spec_.d();
  check_phi(phi, d, "SdLossModel");
  const double alpha = spec_.alpha();
  const auto decreasing = std::min(static_cast<std::size_t>(std::floor(phi)), d);
  const double phi_a = std::pow(phi, -alpha);
  const double phi_2a = phi_a * phi_a;
  const double n = static_cast<double>(decreasing);
  const double oscillating = static_cast<double>(d - decreasing);
  const double numerator = h_two_alpha_[decreasing] - 2.0 * h_alpha_[decreasing] * phi_a +
                           n * phi_2a +
                           oscillating / (4.0 * horizon_T * horizon_T) * phi_2a;
  return numerator / h_two_alpha_[d];
}

double sd_simplified_relative_loss(const PowerLawSpec& spec, std::uint64_t horizon_T,
                                   double phi) {
  if (horizon_T == 0) throw DomainError("sd_simplified_relative_loss: T must be >= 1");
  return SdLossModel(spec).relative_loss(static_cast<double>(horizon_T), phi);
}

double sd_full_simulation(const FullEigenSystem& system, double eta,
                          std::uint64_t horizon_T, SDMode mode) {
  if (system.d > kOracleMaxDim) throw SizeError("sd_full_simulation: system exceeds oracle cap");
  if (!(eta > 0.0)) throw DomainError("sd_full_simulation: eta must be > 0");
  CompensatedSum loss;
  for (std::size_t idx = 0; idx < system.lambdas.size(); ++idx) {
    const double delta0 = system.deltas0[idx];
    const double distance = mode == SDMode::Exact
                                ? sd_exact_distance(delta0, eta, horizon_T)
                                : sd_simplified_distance(std::abs(delta0), eta, horizon_T);
    loss.add(system.lambdas[idx] * distance * distance);
  }
  return loss.value() / system.initial_loss();
}

double sd_c1(double alpha) {
  check_alpha(alpha, "sd_c1");
  return 1.0 - 1.0 / (2.0 * alpha);
}

double sd_c2(double alpha) {
  check_alpha(alpha, "sd_c2");
  if (alpha == 1.0) throw DomainError("sd_c2: undefined at alpha = 1");
  return alpha / (1.0 - alpha);
}

SDScaling sd_scaling(double alpha, std::size_t d, double tau) {
  check_alpha(alpha, "sd_scaling");
  const double n = static_cast<double>(d);
  if (alpha < 0.5) {
    if (!(tau > 0.0)) throw DomainError("sd_scaling: tau must be > 0 when alpha < 1/2");
    const double c1 = sd_c1(alpha);
    const double c2 = sd_c2(alpha);
    const double phi = tau * tau <= (1.0 - c1) / (4.0 * c2) ? n : n / (c1 + 4.0 * c2 * tau * tau);
    return {tau, phi};
  }
  if (alpha == 0.5) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
      throw DomainError("sd_scaling: tau must lie in [0, 1] when alpha = 1/2");
    }
    return {0.5 * std::pow(n, 0.5 * tau), std::pow(n, 1.0 - tau)};
  }
  if (!(tau > 0.0)) throw DomainError("sd_scaling: tau must be > 0 when alpha > 1/2");
  const double base = 1.0 + 1.0 / (tau * tau);
  const bool small_tau = tau * tau < 1.0 / (std::pow(2.0, alpha) - 1.0) && alpha < 1.0;
  const double phi = small_tau ? base : std::pow(base, 1.0 / alpha);
  return {0.5 * tau * std::sqrt(n), phi};
}

double sd_asymptotic_rate(double alpha, double tau) {
  check_alpha(alpha, "sd_asymptotic_rate");
  if (alpha < 0.5) {
    if (!(tau > 0.0)) throw DomainError("sd_asymptotic_rate: tau must be > 0");
    const double c1 = sd_c1(alpha);
    const double c2 = sd_c2(alpha);
    if (tau * tau <= (1.0 - c1) / (4.0 * c2)) return 2.0 * alpha * c2;
    return std::pow(c1 + 4.0 * c2 * tau * tau, 2.0 * alpha) / (4.0 * tau * tau);
  }
  if (alpha == 0.5) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
      throw DomainError("sd_asymptotic_rate: tau must lie in [0, 1] when alpha = 1/2, got " +
                        std::to_string(tau));
    }
    return 1.0 - tau;
  }
  if (!(tau >= 0.0)) throw DomainError("sd_asymptotic_rate: tau must be >= 0");
  return 1.0 / (1.0 + zeta(2.0 * alpha) * tau * tau);
}

double sd_optimal_phi_large_alpha(double alpha, std::size_t d, double horizon_T) {
  if (!(alpha > 0.5)) throw DomainError("sd_optimal_phi_large_alpha: requires alpha > 1/2");
  if (!(horizon_T > 0.0)) throw DomainError("sd_optimal_phi_large_alpha: T must be > 0");
  const double spread = static_cast<double>(d) - 1.0;
  const double threshold = spread / (std::pow(2.0, alpha) - 1.0);
  const double four_t2 = 4.0 * horizon_T * horizon_T;
  if (four_t2 < threshold) {
    throw DomainError("sd_optimal_phi_large_alpha: closed form needs 4T^2 >= " +
                      std::to_string(threshold) + ", got " + std::to_string(four_t2));
  }
  return std::pow(1.0 + spread / four_t2, 1.0 / alpha);
}

std::vector<double> sd_phi_grid_exponents() {
  std::vector<double> exponents(321);
  for (int i = 0; i <= 320; ++i) {
    exponents[static_cast<std::size_t>(i)] = std::pow(10.0, -10.0 + i / 32.0);
  }
  return exponents;
}

PhiSearchResult sd_grid_search_phi(const SdLossModel& model, double horizon_T) {
  const std::size_t d = model.spec().d();
  if (d < 2) throw DomainError("sd_grid_search_phi: d must be >= 2");
  const double log_d = std::log(static_cast<double>(d));
  PhiSearchResult best{0.0, std::numeric_limits<double>::infinity()};
  for (const double x : sd_phi_grid_exponents()) {
    const double phi = std::min(std::exp(x * log_d), static_cast<double>(d));
    const double loss = model.relative_loss(horizon_T, phi);
    if (loss < best.loss_best) best = {phi, loss};
  }
  return best;
}

PhiSearchResult sd_grid_search_phi(const PowerLawSpec& spec, std::uint64_t horizon_T) {
  return sd_grid_search_phi(SdLossModel(spec), static_cast<double>(horizon_T));
}

PhiSearchResult sd_optimize_phi(const SdLossModel& model, double horizon_T) {
  const std::size_t d = model.spec().d();
  if (d < 2) throw DomainError("sd_optimize_phi: d must be >= 2");
  const double log_d = std::log(static_cast<double>(d));
  const std::vector<double> exponents = sd_phi_grid_exponents();
  std::size_t best_index = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const double phi = std::min(std::exp(exponents[i] * log_d), static_cast<double>(d));
    const double loss = model.relative_loss(horizon_T, phi);
    if (loss < best_loss) {
      best_loss = loss;
      best_index = i;
    }
  }
  const double lo = best_index == 0 ? 0.0 : exponents[best_index - 1] * log_d;
  const double hi = best_index + 1 == exponents.size() ? log_d : exponents[best_index + 1] * log_d;
  const auto objective = [&](double u) {
    const double phi = std::clamp(std::exp(u), 1.0, static_cast<double>(d));
    return model.relative_loss(horizon_T, phi);
  };
  const ScalarMinimum refined = golden_section_minimize(objective, lo, hi, 1e-10);
  const double grid_phi = std::min(std::exp(exponents[best_index] * log_d), static_cast<double>(d));
  if (refined.value < best_loss) {
    return {std::clamp(std::exp(refined.x), 1.0, static_cast<double>(d)), refined.value};
  }
  return {grid_phi, best_loss};
}

StepSizeRange sd_step_size_range(const PowerLawSpec& spec, double horizon_T) {
  if (!(horizon_T > 0.0)) throw DomainError("sd_step_size_range: T must be > 0");
  return {spec.frequency(spec.d()) / horizon_T, spec.frequency(1) / horizon_T};
}

double sd_time_to_eps(double alpha, std::size_t d, double eps) {
  check_alpha(alpha, "sd_time_to_eps");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("sd_time_to_eps: eps must lie in (0, 1)");
  const double n = static_cast<double>(d);
  if (alpha < 0.5) {
    const double c2 = sd_c2(alpha);
    const double plateau = 2.0 * alpha * c2;
    if (eps >= plateau) {
      throw DomainError("sd_time_to_eps: eps = " + std::to_string(eps) +
                        " is not below the plateau " + std::to_string(plateau) +
                        "; longer training cannot reach it");
    }
    return 0.5 * std::pow(c2, alpha / (1.0 - 2.0 * alpha)) *
           std::pow(1.0 / eps, 1.0 / (2.0 - 4.0 * alpha));
  }
  if (alpha == 0.5) return 0.5 * std::pow(n, 0.5 * (1.0 - eps));
  return 0.5 * std::sqrt(n * (1.0 / eps - 1.0) / zeta(2.0 * alpha));
}

}  // namespace zipfscale
