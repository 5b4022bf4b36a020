#pragma once

#include <cstdint>
#include <vector>

#include "zipfscale/powerlaw.hpp"

namespace zipfscale {

/// Sign-descent run of T steps with step-size eta = 1 / (z T phi^alpha).
/// phi counts the coordinates still in the decreasing phase at time T.
struct SDConfig {
  std::uint64_t horizon_T = 1;
  double phi = 1.0;
  double eta = 0.0;
};

SDConfig make_sd_config(const PowerLawSpec& spec, std::uint64_t horizon_T, double phi);

/// Per-coordinate switch point of exact sign descent: the distance decreases
/// linearly for t_switch steps, then oscillates between c and c - eta.
struct SDExactState {
  double delta0 = 0.0;
  double eta = 0.0;
  std::uint64_t t_switch = 0;
  double c = 0.0;
};

SDExactState make_sd_exact_state(double delta0_magnitude, double eta);

/// Signed distance after t steps of delta <- delta - eta * sign(delta), O(1).
double sd_exact_distance(double delta0, double eta, std::uint64_t t);

/// Distance magnitude under the simplified dynamics that replace the
/// oscillation by the constant eta / 2.
double sd_simplified_distance(double delta0, double eta, std::uint64_t t);

/// Normalized simplified-dynamics loss r_d(T, phi) with O(1) queries after an
/// O(d) prefix-table build. T may be fractional for rescaled-time grids.
class SdLossModel {
 public:
  explicit SdLossModel(const PowerLawSpec& spec);

  double relative_loss(double horizon_T, double phi) const;

  const PowerLawSpec& spec() const { return spec_; }

 private:
  PowerLawSpec spec_;
  std::vector<double> h_alpha_;      // H_{n, alpha}, n = 0..d
  std::vector<double> h_two_alpha_;  // H_{n, 2 alpha}, n = 0..d
};

double sd_simplified_relative_loss(const PowerLawSpec& spec, std::uint64_t horizon_T,
                                   double phi);

enum class SDMode { Exact, Simplified };

/// Normalized loss sum lambda delta(T)^2 / sum lambda delta(0)^2 on the dense
/// system, coordinate by coordinate.
double sd_full_simulation(const FullEigenSystem& system, double eta,
                          std::uint64_t horizon_T, SDMode mode);

struct SDScaling {
  double horizon_T = 0.0;
  double phi = 0.0;
};

/// Horizon and step-size shape as functions of d and rescaled time tau.
SDScaling sd_scaling(double alpha, std::size_t d, double tau);

/// Limit of r_d(T_d(tau), phi_d(tau)) as d grows.
double sd_asymptotic_rate(double alpha, double tau);

/// Closed-form minimizer (1 + (d-1)/(4T^2))^{1/alpha}, valid when
/// 4T^2 >= (d-1)/(2^alpha - 1).
double sd_optimal_phi_large_alpha(double alpha, std::size_t d, double horizon_T);

struct PhiSearchResult {
  double phi_best = 0.0;
  double loss_best = 0.0;
};

/// Exponents x_i = 10^{-10 + i/32}, i = 0..320, of the phi = d^x grid.
std::vector<double> sd_phi_grid_exponents();

/// Minimizes r_d(T, d^x) over the 321-point grid; ties keep the smaller phi.
PhiSearchResult sd_grid_search_phi(const SdLossModel& model, double horizon_T);
PhiSearchResult sd_grid_search_phi(const PowerLawSpec& spec, std::uint64_t horizon_T);

/// Continuous minimizer of r_d(T, phi) over phi in [1, d]: the grid search
/// followed by golden-section refinement between the neighbours of the best
/// grid point.
PhiSearchResult sd_optimize_phi(const SdLossModel& model, double horizon_T);

struct StepSizeRange {
  double eta_min = 0.0;
  double eta_max = 0.0;
};

/// Range [delta_d(0)/T, delta_1(0)/T] = [pi_d/T, pi_1/T] containing the
/// optimal simplified-dynamics step-size.
StepSizeRange sd_step_size_range(const PowerLawSpec& spec, double horizon_T);

/// Predicted step count to reach relative loss eps.
double sd_time_to_eps(double alpha, std::size_t d, double eps);

/// c1 = 1 - 1/(2 alpha) and c2 = alpha / (1 - alpha) of the alpha < 1/2 scaling.
double sd_c1(double alpha);
double sd_c2(double alpha);

}  // namespace zipfscale
