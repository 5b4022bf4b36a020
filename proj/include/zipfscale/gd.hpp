#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zipfscale/powerlaw.hpp"

namespace zipfscale {

enum class Algorithm { GD, SD };
enum class TimeSemantics { RawSteps, RescaledTau };

const char* to_string(Algorithm algorithm);

struct RatePoint {
  double time = 0.0;
  double relative_loss = 0.0;
};

/// Relative loss (L(t) - L*) / (L(0) - L*) sampled along a time axis.
struct RateCurve {
  Algorithm algorithm = Algorithm::GD;
  std::size_t d = 0;
  double alpha = 0.0;
  TimeSemantics time_semantics = TimeSemantics::RawSteps;
  std::vector<RatePoint> points;
};

enum class GDRegime { AlphaBelowOne, AlphaEqualsOne, AlphaAboveOne };

GDRegime gd_regime(double alpha);

/// Evaluates r_d(t) = (1/H_{d,a}) sum_k k^{-a} (1 - k^{-a})^{2t} for gradient
/// descent with step-size 1/pi_1. Holds the O(d) weights so repeated queries
/// on the same spec skip the log evaluations.
class GdLossModel {
 public:
  explicit GdLossModel(const PowerLawSpec& spec);

  /// Relative loss after t steps (t may be fractional for rescaled grids).
  double relative_loss(double t) const;

  /// sum_{k=1}^{d} k^{-a} (1 - k^{-a})^{exponent}, unnormalized.
  double power_sum(double exponent) const;

  const PowerLawSpec& spec() const { return spec_; }

 private:
  PowerLawSpec spec_;
  std::vector<double> weights_;     // k^{-alpha}, k = 1..d
  std::vector<double> log_factor_;  // ln(1 - k^{-alpha}); entry for k = 1 unused
  double normalizer_;
};

double gd_relative_loss(const PowerLawSpec& spec, std::uint64_t t);

/// Closed-form per-component decay on the dense system, t = 0..t_max.
RateCurve gd_full_simulation(const FullEigenSystem& system, double eta,
                             std::uint64_t t_max);
RateCurve gd_full_simulation(const FullEigenSystem& system, double eta,
                             std::span<const std::uint64_t> times);

/// I_d(t) = int_1^d k^{-a} (1 - k^{-a})^t dk by adaptive quadrature. The
/// exponent is t itself; the loss after n steps corresponds to t = 2n.
double gd_integral_form(std::size_t d, double alpha, double t);

/// Bound on |S_d(t) - I_d(t)| for the sum/integral pair above.
double gd_approx_error_bound(std::size_t d, double alpha, double t);

/// Limit of r_d(t_d(tau)) as d grows. For alpha > 1 tau is the raw step count.
double gd_asymptotic_rate(double alpha, double tau);

/// Large-t equivalent Gamma(1-1/a)/(a zeta(a)) * (2t)^{-(1-1/a)} of the
/// alpha > 1 rate.
double gd_asymptotic_rate_power_form(double alpha, double t);

/// Raw step count t_d(tau) for rescaled time tau.
double gd_time_scaling(double alpha, std::size_t d, double tau);

/// Inverse of gd_time_scaling.
double gd_rescaled_time(double alpha, std::size_t d, double t);

/// Predicted step count to reach relative loss eps.
double gd_time_to_eps(double alpha, std::size_t d, double eps);

struct GdTimeBounds {
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  double eps_threshold = 0.0;
};

/// Bracket on the rescaled time needed to reach eps when alpha < 1. Only
/// meaningful for eps <= eps_threshold; callers check.
GdTimeBounds gd_time_bounds_alpha_lt_1(double alpha, double eps);

}  // namespace zipfscale
