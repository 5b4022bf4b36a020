#include "zipfscale/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "zipfscale/baselines.hpp"
#include "zipfscale/errors.hpp"

namespace zipfscale {
namespace {

std::string algo_name(Algorithm algorithm) { return to_string(algorithm); }

void check_tau(Algorithm algorithm, double alpha, double tau) {
  const auto fail = [&](const std::string& range) {
    throw ConfigError("tau = " + format_double(tau) + " outside " + range + " for " +
                      algo_name(algorithm) + " at alpha = " + format_double(alpha));
  };
  if (!std::isfinite(tau)) fail("the finite reals");
  if (algorithm == Algorithm::GD) {
    if (alpha == 1.0 && (tau < 0.0 || tau > 1.0)) fail("[0, 1]");
    if (tau < 0.0) fail("[0, inf)");
    return;
  }
  if (alpha == 0.5) {
    if (tau < 0.0 || tau > 1.0) fail("[0, 1]");
  } else if (alpha == 1.0) {
    if (tau < 1.0) fail("[1, inf)");
  } else if (tau <= 0.0) {
    fail("(0, inf)");
  }
}

void check_eps(Algorithm algorithm, double alpha, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ConfigError("eps = " + format_double(eps) + " outside (0, 1)");
  }
  if (algorithm == Algorithm::SD && alpha < 0.5) {
    const double plateau = 2.0 * alpha * sd_c2(alpha);
    if (eps >= plateau) {
      throw ConfigError("eps = " + format_double(eps) + " is not below the sign-descent plateau " +
                        format_double(plateau) + " at alpha = " + format_double(alpha));
    }
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::uint64_t even_horizon(double horizon_T) {
  const auto half = static_cast<std::uint64_t>(std::llround(0.5 * horizon_T));
  return 2 * std::max<std::uint64_t>(half, 1);
}

}  // namespace

ScalingFit fit_scaling(const std::vector<double>& ds, const std::vector<double>& ts) {
  if (ds.size() != ts.size() || ds.size() < 2) {
    throw DomainError("fit_scaling: need at least two (d, t) pairs of matching length");
  }
  const auto n = static_cast<double>(ds.size());
  std::vector<double> x(ds.size());
  std::vector<double> y(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!(ds[i] > 0.0 && ts[i] > 0.0)) throw DomainError("fit_scaling: values must be positive");
    x[i] = std::log(ds[i]);
    y[i] = std::log(ts[i]);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_scaling: all d values are equal");
  ScalingFit fit;
  fit.exponent_beta = sxy / sxx;
  const double intercept = my - fit.exponent_beta * mx;
  fit.coefficient_c = std::exp(intercept);
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - intercept - fit.exponent_beta * x[i];
    sq += r * r;
  }
  fit.residual_rms = std::sqrt(sq / n);
  fit.n_points = ds.size();
  return fit;
}

std::vector<std::size_t> default_d_list() { return {1000, 10000, 100000, 1000000}; }

std::vector<double> default_tau_grid(Algorithm algorithm, double alpha) {
  if (algorithm == Algorithm::GD) {
    if (alpha < 1.0) return linspace(0.0, 4.0, 33);
    if (alpha == 1.0) return linspace(0.0, 1.0, 33);
    std::vector<double> steps(33);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      steps[i] = std::round(std::pow(10.0, 3.0 * static_cast<double>(i) / 32.0));
    }
    return steps;
  }
  if (alpha == 0.5) return linspace(0.0, 1.0, 33);
  if (alpha >= 1.0) return linspace(1.0, 4.0, 33);
  return linspace(0.125, 4.0, 33);
}

std::vector<double> default_eps_grid(Algorithm algorithm) {
  if (algorithm == Algorithm::GD) return {0.25, 0.5, 0.75};
  return {0.1, 0.25};
}

ExperimentConfig normalize_config(ExperimentConfig config, bool eps_grid) {
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    throw ConfigError("alpha must be a positive finite number");
  }
  if (config.d_list.empty()) config.d_list = default_d_list();
  for (const std::size_t d : config.d_list) {
    if (d < 2) throw ConfigError("every d must be >= 2, got " + std::to_string(d));
  }
  if (config.grid.empty()) {
    config.grid = eps_grid ? default_eps_grid(config.algorithm)
                           : default_tau_grid(config.algorithm, config.alpha);
  }
  for (const double value : config.grid) {
    if (eps_grid) {
      check_eps(config.algorithm, config.alpha, value);
    } else {
      check_tau(config.algorithm, config.alpha, value);
    }
  }
  if (config.threads == 0) config.threads = 1;
  return config;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
}

double sd_rescaled_time(double alpha, std::size_t d, double horizon_T) {
  if (!(horizon_T > 0.0)) throw DomainError("sd_rescaled_time: T must be > 0");
  const double n = static_cast<double>(d);
  if (alpha < 0.5) return horizon_T;
  if (alpha == 0.5) return 2.0 * std::log(2.0 * horizon_T) / std::log(n);
  return 2.0 * horizon_T / std::sqrt(n);
}

CsvTable run_gd_curves(const ExperimentConfig& raw) {
  const ExperimentConfig config = normalize_config(raw);
  CsvTable table({"alpha", "d", "t", "tau", "r_finite", "r_asymptotic"});
  for (const std::size_t d : config.d_list) {
    const GdLossModel model(PowerLawSpec(d, config.alpha));
    std::vector<std::vector<std::string>> rows(config.grid.size());
    parallel_for(config.grid.size(), config.threads, [&](std::size_t i) {
      const double tau = config.grid[i];
      const double t = gd_time_scaling(config.alpha, d, tau);
      rows[i] = {cell(config.alpha), cell(std::uint64_t{d}), cell(t), cell(tau),
                 cell(model.relative_loss(t)), cell(gd_asymptotic_rate(config.alpha, tau))};
    });
    for (auto& row : rows) table.add_row(std::move(row));
  }
  return table;
}

CsvTable run_sd_curves(const ExperimentConfig& raw) {
  ExperimentConfig adjusted = raw;
  adjusted.algorithm = Algorithm::SD;
  const ExperimentConfig config = normalize_config(adjusted);
  CsvTable table({"alpha", "d", "tau", "T", "phi", "r_finite", "r_asymptotic"});
  for (const std::size_t d : config.d_list) {
    const SdLossModel model(PowerLawSpec(d, config.alpha));
    std::vector<std::vector<std::string>> rows(config.grid.size());
    parallel_for(config.grid.size(), config.threads, [&](std::size_t i) {
      const double tau = config.grid[i];
      const SDScaling scaling = sd_scaling(config.alpha, d, tau);
      const double phi = std::clamp(scaling.phi, 1.0, static_cast<double>(d));
      rows[i] = {cell(config.alpha),
                 cell(std::uint64_t{d}),
                 cell(tau),
                 cell(scaling.horizon_T),
                 cell(phi),
                 cell(model.relative_loss(scaling.horizon_T, phi)),
                 cell(sd_asymptotic_rate(config.alpha, tau))};
    });
    for (auto& row : rows) table.add_row(std::move(row));
  }
  return table;
}

CsvTable run_stepsize_convergence(const ExperimentConfig& raw) {
  ExperimentConfig adjusted = raw;
  adjusted.algorithm = Algorithm::SD;
  const ExperimentConfig config = normalize_config(adjusted);
  CsvTable table({"alpha", "d", "tau", "phi_grid_best", "phi_predicted", "ratio"});
  for (const std::size_t d : config.d_list) {
    const SdLossModel model(PowerLawSpec(d, config.alpha));
    std::vector<std::vector<std::string>> rows(config.grid.size());
    parallel_for(config.grid.size(), config.threads, [&](std::size_t i) {
      const double tau = config.grid[i];
      const SDScaling scaling = sd_scaling(config.alpha, d, tau);
      const PhiSearchResult best = sd_grid_search_phi(model, scaling.horizon_T);
      rows[i] = {cell(config.alpha), cell(std::uint64_t{d}), cell(tau), cell(best.phi_best),
                 cell(scaling.phi), cell(best.phi_best / scaling.phi)};
    });
    for (auto& row : rows) table.add_row(std::move(row));
  }
  return table;
}

std::uint64_t gd_measured_time_to_eps(const GdLossModel& model, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("gd_measured_time_to_eps: eps outside (0, 1)");
  const auto loss = [&](std::uint64_t t) { return model.relative_loss(static_cast<double>(t)); };
  std::uint64_t lo = 0;  // loss(lo) > eps
  std::uint64_t hi = 1;
  while (loss(hi) > eps) {
    lo = hi;
    if (hi > (std::uint64_t{1} << 62)) {
      throw DomainError("gd_measured_time_to_eps: eps not reached");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (loss(mid) > eps ? lo : hi) = mid;
  }
  return hi;
}

std::uint64_t sd_measured_time_to_eps(const SdLossModel& model, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("sd_measured_time_to_eps: eps outside (0, 1)");
  const auto loss = [&](std::uint64_t half) {
    return sd_optimize_phi(model, 2.0 * static_cast<double>(half)).loss_best;
  };
  std::uint64_t lo = 0;
  std::uint64_t hi = 1;
  while (loss(hi) > eps) {
    lo = hi;
    if (hi > (std::uint64_t{1} << 40)) {
      throw DomainError("sd_measured_time_to_eps: eps not reached");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (loss(mid) > eps ? lo : hi) = mid;
  }
  return 2 * hi;
}

TimeToEpsResult run_time_to_eps(const ExperimentConfig& raw) {
  const ExperimentConfig config = normalize_config(raw, true);
  TimeToEpsResult result;
  result.points = CsvTable(
      {"algorithm", "alpha", "d", "eps", "t_measured", "t_predicted", "r_at_measured"});
  result.fits = CsvTable({"algorithm", "alpha", "eps", "c", "beta", "residual_rms", "n_points"});
  result.eps = config.grid;

  const std::size_t n_eps = config.grid.size();
  std::vector<std::vector<double>> measured(n_eps, std::vector<double>(config.d_list.size()));
  for (std::size_t di = 0; di < config.d_list.size(); ++di) {
    const std::size_t d = config.d_list[di];
    const PowerLawSpec spec(d, config.alpha);
    std::vector<std::vector<std::string>> rows(n_eps);
    if (config.algorithm == Algorithm::GD) {
      const GdLossModel model(spec);
      parallel_for(n_eps, config.threads, [&](std::size_t i) {
        const double eps = config.grid[i];
        const std::uint64_t t = gd_measured_time_to_eps(model, eps);
        measured[i][di] = static_cast<double>(t);
        rows[i] = {"gd", cell(config.alpha), cell(std::uint64_t{d}), cell(eps), cell(t),
                   cell(gd_time_to_eps(config.alpha, d, eps)),
                   cell(model.relative_loss(static_cast<double>(t)))};
      });
    } else {
      const SdLossModel model(spec);
      parallel_for(n_eps, config.threads, [&](std::size_t i) {
        const double eps = config.grid[i];
        const std::uint64_t t = sd_measured_time_to_eps(model, eps);
        measured[i][di] = static_cast<double>(t);
        rows[i] = {"sd", cell(config.alpha), cell(std::uint64_t{d}), cell(eps), cell(t),
                   cell(sd_time_to_eps(config.alpha, d, eps)),
                   cell(sd_optimize_phi(model, static_cast<double>(t)).loss_best)};
      });
    }
    for (auto& row : rows) result.points.add_row(std::move(row));
  }

  if (config.d_list.size() >= 2) {
    std::vector<double> ds(config.d_list.begin(), config.d_list.end());
    for (std::size_t i = 0; i < n_eps; ++i) {
      const ScalingFit fit = fit_scaling(ds, measured[i]);
      result.scaling.push_back(fit);
      result.fits.add_row({algo_name(config.algorithm), cell(config.alpha), cell(config.grid[i]),
                           cell(fit.coefficient_c), cell(fit.exponent_beta),
                           cell(fit.residual_rms), cell(std::uint64_t{fit.n_points})});
    }
  }
  return result;
}

CsvTable run_real_data(const ExperimentConfig& raw, const BigramStats& stats) {
  if (stats.d < 2) throw DomainError("run_real_data: statistics need at least 2 tokens");
  ExperimentConfig adjusted = raw;
  adjusted.d_list = {stats.d};
  const ExperimentConfig config = normalize_config(adjusted);
  const double alpha = config.alpha;
  const std::size_t d = stats.d;
  CsvTable table({"d", "algorithm", "t", "tau", "r", "r_asymptotic", "eta"});
  table.add_row({cell(std::uint64_t{d}), algo_name(config.algorithm), "0", "0", "1", "1", "nan"});

  std::vector<std::vector<std::string>> rows(config.grid.size());
  if (config.algorithm == Algorithm::GD) {
    std::vector<std::uint64_t> times(config.grid.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = gd_time_scaling(alpha, d, config.grid[i]);
      times[i] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(t)));
    }
    const RateCurve curve = real_gd_curve(stats, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double tau = gd_rescaled_time(alpha, d, static_cast<double>(times[i]));
      double prediction = std::nan("");
      try {
        prediction = gd_asymptotic_rate(alpha, tau);
      } catch (const DomainError&) {
      }
      rows[i] = {cell(std::uint64_t{d}), "gd", cell(times[i]), cell(tau),
                 cell(curve.points[i].relative_loss), cell(prediction),
                 cell(1.0 / stats.pi[0])};
    }
  } else {
    parallel_for(config.grid.size(), config.threads, [&](std::size_t i) {
      const std::uint64_t horizon = even_horizon(sd_scaling(alpha, d, config.grid[i]).horizon_T);
      const double tau = sd_rescaled_time(alpha, d, static_cast<double>(horizon));
      const StepSizeOptimum best = optimize_sd_step(stats, horizon);
      double prediction = std::nan("");
      try {
        prediction = sd_asymptotic_rate(alpha, tau);
      } catch (const DomainError&) {
      }
      rows[i] = {cell(std::uint64_t{d}), "sd", cell(horizon), cell(tau), cell(best.loss_star),
                 cell(prediction), cell(best.eta_star)};
    });
  }
  for (auto& row : rows) table.add_row(std::move(row));
  return table;
}

CsvTable run_baselines(const ExperimentConfig& raw) {
  if (raw.alpha != 1.0) throw ConfigError("baselines are defined for alpha = 1 only");
  ExperimentConfig adjusted = raw;
  adjusted.algorithm = Algorithm::GD;
  const ExperimentConfig config = normalize_config(adjusted);
  CsvTable table({"d", "tau", "t", "r_true", "r_sub", "r_lin", "r_adagrad"});
  for (const std::size_t d : config.d_list) {
    const GdLossModel model(PowerLawSpec(d, 1.0));
    std::vector<std::vector<std::string>> rows(config.grid.size());
    parallel_for(config.grid.size(), config.threads, [&](std::size_t i) {
      const double tau = config.grid[i];
      const double t = gd_time_scaling(1.0, d, tau);
      const WorstCaseRates rates = worst_case_rates(d, t);
      rows[i] = {cell(std::uint64_t{d}), cell(tau), cell(t), cell(model.relative_loss(t)),
                 cell(rates.r_sub), cell(rates.r_lin), cell(adagrad_bound(d, t))};
    });
    for (auto& row : rows) table.add_row(std::move(row));
  }
  return table;
}

CsvTable fit_time_to_eps_table(const CsvTable& points) {
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (std::size_t r = 0; r < points.rows().size(); ++r) {
    auto& group = groups[points.number(r, "eps")];
    group.first.push_back(points.number(r, "d"));
    group.second.push_back(points.number(r, "t_measured"));
  }
  if (groups.empty()) throw FormatError("time-to-eps table has no rows");
  CsvTable fits({"eps", "c", "beta", "residual_rms", "n_points"});
  for (const auto& [eps, group] : groups) {
    const ScalingFit fit = fit_scaling(group.first, group.second);
    fits.add_row({cell(eps), cell(fit.coefficient_c), cell(fit.exponent_beta),
                  cell(fit.residual_rms), cell(std::uint64_t{fit.n_points})});
  }
  return fits;
}

}  // namespace zipfscale
