#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zipfscale/corpus.hpp"
#include "zipfscale/csv.hpp"
#include "zipfscale/gd.hpp"
#include "zipfscale/sd.hpp"

namespace zipfscale {

struct ExperimentConfig {
  double alpha = 1.0;
  std::vector<std::size_t> d_list;
  std::vector<double> grid;  // tau grid, or eps grid for time-to-eps
  Algorithm algorithm = Algorithm::GD;
  std::string output_path;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Fit of ln t = ln c + beta ln d.
struct ScalingFit {
  double coefficient_c = 0.0;
  double exponent_beta = 0.0;
  double residual_rms = 0.0;
  std::size_t n_points = 0;
};

ScalingFit fit_scaling(const std::vector<double>& ds, const std::vector<double>& ts);

std::vector<std::size_t> default_d_list();
std::vector<double> default_tau_grid(Algorithm algorithm, double alpha);
std::vector<double> default_eps_grid(Algorithm algorithm);

/// Fills empty d_list and grid with defaults and checks regime validity.
/// Throws ConfigError on an invalid configuration.
ExperimentConfig normalize_config(ExperimentConfig config, bool eps_grid = false);

/// Runs `task(i)` for i = 0..count-1 on up to `threads` workers. The first
/// exception thrown by a task is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

/// Inverse of the sign-descent horizon scaling T(tau).
double sd_rescaled_time(double alpha, std::size_t d, double horizon_T);

CsvTable run_gd_curves(const ExperimentConfig& config);
CsvTable run_sd_curves(const ExperimentConfig& config);
CsvTable run_stepsize_convergence(const ExperimentConfig& config);

/// Smallest integer t with gd loss <= eps.
std::uint64_t gd_measured_time_to_eps(const GdLossModel& model, double eps);
/// Smallest even T whose phi-optimized simplified loss is <= eps.
std::uint64_t sd_measured_time_to_eps(const SdLossModel& model, double eps);

struct TimeToEpsResult {
  CsvTable points;
  CsvTable fits;
  std::vector<double> eps;
  std::vector<ScalingFit> scaling;
};

TimeToEpsResult run_time_to_eps(const ExperimentConfig& config);

/// Loss curve of real statistics at rescaled times from the config grid,
/// with the asymptotic prediction at the realized rescaled time.
CsvTable run_real_data(const ExperimentConfig& config, const BigramStats& stats);

CsvTable run_baselines(const ExperimentConfig& config);

/// Per-eps scaling fit of a time-to-eps table (columns eps, d, t_measured).
CsvTable fit_time_to_eps_table(const CsvTable& points);

}  // namespace zipfscale
