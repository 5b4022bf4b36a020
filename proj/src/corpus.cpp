#include "zipfscale/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "zipfscale/errors.hpp"
#include "zipfscale/golden.hpp"
#include "zipfscale/sd.hpp"

namespace zipfscale {
namespace {

using Row = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

void add_to_row(Row& row, std::uint32_t next, std::uint64_t count) {
  auto it = std::lower_bound(row.begin(), row.end(), next,
                             [](const auto& entry, std::uint32_t id) { return entry.first < id; });
  if (it != row.end() && it->first == next) {
    it->second += count;
  } else {
    row.insert(it, {next, count});
  }
}

// Counts unigrams at positions [begin, end) and pairs (p, p + 1) for p in the
// same range.
BigramCounts count_range(std::span<const std::uint32_t> stream, std::uint32_t vocab_size,
                         std::size_t begin, std::size_t end) {
  BigramCounts counts;
  counts.vocab_size = vocab_size;
  std::map<std::uint32_t, std::map<std::uint32_t, std::uint64_t>> pairs;
  for (std::size_t p = begin; p < end; ++p) {
    const std::uint32_t token = stream[p];
    if (token == kDocumentBoundary) continue;
    if (token >= vocab_size) {
      throw FormatError("token id " + std::to_string(token) + " at position " +
                        std::to_string(p) + " is not below vocab size " +
                        std::to_string(vocab_size));
    }
    ++counts.unigram[token];
    ++counts.total_tokens;
    if (p + 1 < stream.size()) {
      const std::uint32_t next = stream[p + 1];
      if (next != kDocumentBoundary && next < vocab_size) ++pairs[token][next];
    }
  }
  for (const auto& [context, row] : pairs) {
    Row& out = counts.bigram_rows[context];
    out.assign(row.begin(), row.end());
  }
  return counts;
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<double>(xs.size());
  const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::pair<double, double> conditional_range(const BigramStats& stats) {
  double smallest = std::numeric_limits<double>::infinity();
  double largest = 0.0;
  for (const auto& row : stats.rows) {
    for (const auto& entry : row) {
      smallest = std::min(smallest, entry.frequency);
      largest = std::max(largest, entry.frequency);
    }
  }
  return {smallest, largest};
}

}  // namespace

void BigramCounts::merge(const BigramCounts& other) {
  if (vocab_size != other.vocab_size) {
    throw DomainError("BigramCounts::merge: vocabulary sizes differ");
  }
  for (const auto& [token, count] : other.unigram) unigram[token] += count;
  for (const auto& [context, row] : other.bigram_rows) {
    Row& target = bigram_rows[context];
    for (const auto& [next, count] : row) add_to_row(target, next, count);
  }
  total_tokens += other.total_tokens;
}

std::uint64_t BigramCounts::bigram_total() const {
  std::uint64_t total = 0;
  for (const auto& [context, row] : bigram_rows) {
    for (const auto& entry : row) total += entry.second;
  }
  return total;
}

BigramCounts count_bigrams(std::span<const std::uint32_t> stream, std::uint32_t vocab_size,
                           unsigned threads) {
  if (vocab_size == 0) throw DomainError("count_bigrams: vocab size must be positive");
  if (stream.size() < 2) {
    throw DomainError("count_bigrams: stream needs at least 2 entries, got " +
                      std::to_string(stream.size()));
  }
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(stream.size() / 2)));
  if (threads == 1) return count_range(stream, vocab_size, 0, stream.size());

  std::vector<BigramCounts> shards(threads);
  std::vector<std::exception_ptr> failures(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (stream.size() + threads - 1) / threads;
  for (unsigned i = 0; i < threads; ++i) {
    const std::size_t begin = std::min(stream.size(), i * chunk);
    const std::size_t end = std::min(stream.size(), begin + chunk);
    workers.emplace_back([&, i, begin, end] {
      try {
        shards[i] = count_range(stream, vocab_size, begin, end);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  BigramCounts total = std::move(shards[0]);
  for (unsigned i = 1; i < threads; ++i) total.merge(shards[i]);
  return total;
}

std::size_t BigramStats::nonzero_entries() const {
  std::size_t n = 0;
  for (const auto& row : rows) n += row.size();
  return n;
}

BigramStats stats_from_counts(const BigramCounts& counts) {
  if (counts.total_tokens == 0) throw DomainError("stats_from_counts: no tokens");
  std::vector<std::pair<std::uint32_t, std::uint64_t>> ranked;
  for (const auto& [token, count] : counts.unigram) {
    if (count > 0) ranked.emplace_back(token, count);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  BigramStats stats;
  stats.d = ranked.size();
  stats.pi.resize(stats.d);
  stats.token_of_rank.resize(stats.d);
  std::uint64_t total = 0;
  for (const auto& entry : ranked) total += entry.second;
  for (std::size_t r = 0; r < stats.d; ++r) {
    stats.token_of_rank[r] = ranked[r].first;
    stats.rank_of_token[ranked[r].first] = static_cast<std::uint32_t>(r);
    stats.pi[r] = static_cast<double>(ranked[r].second) / static_cast<double>(total);
  }

  stats.rows.resize(stats.d);
  stats.row_power_sums.assign(stats.d, 0.0);
  for (std::size_t r = 0; r < stats.d; ++r) {
    auto found = counts.bigram_rows.find(stats.token_of_rank[r]);
    if (found == counts.bigram_rows.end()) continue;
    std::uint64_t row_total = 0;
    for (const auto& entry : found->second) row_total += entry.second;
    if (row_total == 0) continue;
    auto& row = stats.rows[r];
    for (const auto& [next, count] : found->second) {
      if (count == 0) continue;
      auto rank = stats.rank_of_token.find(next);
      if (rank == stats.rank_of_token.end()) {
        throw FormatError("stats_from_counts: next token " + std::to_string(next) +
                          " has no unigram count");
      }
      row.push_back({rank->second, static_cast<double>(count) / static_cast<double>(row_total)});
    }
    std::stable_sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
      return a.frequency > b.frequency || (a.frequency == b.frequency && a.next_rank < b.next_rank);
    });
    double s = 0.0;
    for (const auto& entry : row) s += entry.frequency * entry.frequency;
    stats.row_power_sums[r] = s;
  }
  return stats;
}

BigramStats stats_from_powerlaw(const PowerLawSpec& spec) {
  BigramStats stats;
  stats.d = spec.d();
  stats.pi = frequencies(spec);
  stats.token_of_rank.resize(stats.d);
  std::vector<ConditionalEntry> row(stats.d);
  double s = 0.0;
  for (std::size_t r = 0; r < stats.d; ++r) {
    stats.token_of_rank[r] = static_cast<std::uint32_t>(r);
    stats.rank_of_token[static_cast<std::uint32_t>(r)] = static_cast<std::uint32_t>(r);
    row[r] = {static_cast<std::uint32_t>(r), stats.pi[r]};
    s += stats.pi[r] * stats.pi[r];
  }
  stats.rows.assign(stats.d, row);
  stats.row_power_sums.assign(stats.d, s);
  return stats;
}

BigramCounts powerlaw_product_counts(std::size_t d) {
  if (d < 1 || d > 22) {
    throw DomainError("powerlaw_product_counts: d must lie in [1, 22] to fit 64-bit counts");
  }
  std::uint64_t lcm = 1;
  for (std::uint64_t k = 1; k <= d; ++k) lcm = std::lcm(lcm, k);
  BigramCounts counts;
  counts.vocab_size = static_cast<std::uint32_t>(d);
  std::uint64_t row_scale = 0;
  for (std::uint64_t k = 1; k <= d; ++k) row_scale += lcm / k;
  for (std::uint32_t j = 0; j < d; ++j) {
    const std::uint64_t weight = lcm / (j + 1);
    Row& row = counts.bigram_rows[j];
    for (std::uint32_t k = 0; k < d; ++k) row.emplace_back(k, weight * (lcm / (k + 1)));
    counts.unigram[j] = weight * row_scale;
    counts.total_tokens += weight * row_scale;
  }
  return counts;
}

RateCurve real_gd_curve(const BigramStats& stats, std::span<const std::uint64_t> times) {
  if (times.empty()) throw DomainError("real_gd_curve: time grid is empty");
  if (stats.d == 0) throw DomainError("real_gd_curve: empty statistics");
  const double eta = 1.0 / stats.pi[0];
  std::vector<double> weight(stats.d);
  std::vector<double> log_factor(stats.d);
  double initial = 0.0;
  for (std::size_t i = 0; i < stats.d; ++i) {
    weight[i] = stats.pi[i] * stats.row_power_sums[i];
    log_factor[i] = std::log1p(-eta * stats.pi[i]);
    initial += weight[i];
  }
  RateCurve curve;
  curve.algorithm = Algorithm::GD;
  curve.d = stats.d;
  curve.time_semantics = TimeSemantics::RawSteps;
  for (const std::uint64_t t : times) {
    double loss = 0.0;
    if (t == 0) {
      loss = initial;
    } else {
      for (std::size_t i = 0; i < stats.d; ++i) {
        if (weight[i] == 0.0 || std::isinf(log_factor[i])) continue;
        loss += weight[i] * std::exp(2.0 * static_cast<double>(t) * log_factor[i]);
      }
    }
    curve.points.push_back({static_cast<double>(t), loss / initial});
  }
  return curve;
}

double real_sd_loss(const BigramStats& stats, double eta, std::uint64_t horizon_T) {
  if (horizon_T % 2 != 0) {
    throw DomainError("real_sd_loss: T = " + std::to_string(horizon_T) +
                      " is odd; only even iterations are reported");
  }
  if (!(eta > 0.0)) throw DomainError("real_sd_loss: eta must be > 0");
  double initial = 0.0;
  double loss = 0.0;
  for (std::size_t j = 0; j < stats.d; ++j) {
    double row_loss = 0.0;
    for (const auto& entry : stats.rows[j]) {
      const double distance = sd_exact_distance(entry.frequency, eta, horizon_T);
      row_loss += distance * distance;
    }
    initial += stats.pi[j] * stats.row_power_sums[j];
    loss += stats.pi[j] * row_loss;
  }
  if (!(initial > 0.0)) throw DomainError("real_sd_loss: statistics have no bigrams");
  return loss / initial;
}

StepSizeOptimum optimize_sd_step(const BigramStats& stats, std::uint64_t horizon_T) {
  if (stats.d < 2) throw DomainError("optimize_sd_step: needs at least 2 tokens");
  if (horizon_T < 2 || horizon_T % 2 != 0) {
    throw DomainError("optimize_sd_step: T must be a positive even integer");
  }
  const auto [smallest, largest] = conditional_range(stats);
  if (!(largest > 0.0)) throw DomainError("optimize_sd_step: statistics have no bigrams");
  const double steps = static_cast<double>(horizon_T);
  const double n = static_cast<double>(stats.d);

  StepSizeOptimum result;
  result.eta_min = smallest / steps;
  result.eta_max = largest / steps;
  const double lo = std::log(result.eta_min / n);
  const double hi = std::log(result.eta_max * n);
  const auto objective = [&](double u) { return real_sd_loss(stats, std::exp(u), horizon_T); };

  // A width of 1e-4 in log eta is a relative bracket width of 1e-4 in eta.
  const double rel_tol = 1e-4 / std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  ScalarMinimum best = golden_section_minimize(objective, lo, hi, rel_tol);

  constexpr std::size_t kCoarse = 64;
  double probe_best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kCoarse; ++i) {
    const double u = lo + (hi - lo) * static_cast<double>(i) / (kCoarse - 1);
    probe_best = std::min(probe_best, objective(u));
  }
  if (probe_best < 0.99 * best.value) {
    result.grid_fallback = true;
    constexpr std::size_t kDense = 2048;
    std::size_t best_index = 0;
    double dense_best = std::numeric_limits<double>::infinity();
    const double step = (hi - lo) / (kDense - 1);
    for (std::size_t i = 0; i < kDense; ++i) {
      const double value = objective(lo + step * static_cast<double>(i));
      if (value < dense_best) {
        dense_best = value;
        best_index = i;
      }
    }
    const double center = lo + step * static_cast<double>(best_index);
    ScalarMinimum local = golden_section_minimize(objective, std::max(lo, center - step),
                                                  std::min(hi, center + step), rel_tol);
    best = local.value <= dense_best ? local : ScalarMinimum{center, dense_best, 0};
  }
  result.eta_star = std::exp(best.x);
  result.loss_star = best.value;
  return result;
}

int sd_loss_slope_sign_changes(const BigramStats& stats, std::uint64_t horizon_T,
                               std::size_t grid_points) {
  if (grid_points < 3) throw DomainError("sd_loss_slope_sign_changes: need >= 3 points");
  const auto [smallest, largest] = conditional_range(stats);
  const double steps = static_cast<double>(horizon_T);
  const double n = static_cast<double>(stats.d);
  const double lo = std::log(smallest / steps / n);
  const double hi = std::log(largest / steps * n);
  std::vector<double> values(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double u = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    values[i] = real_sd_loss(stats, std::exp(u), horizon_T);
  }
  int changes = 0;
  int previous = 0;
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double slope = values[i] - values[i - 1];
    const int sign = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

ZipfFit zipf_fit_check(const BigramStats& stats) {
  if (stats.d < 10) throw DomainError("zipf_fit_check: needs at least 10 tokens");
  ZipfFit fit;
  std::vector<double> xs(stats.d);
  std::vector<double> ys(stats.d);
  for (std::size_t r = 0; r < stats.d; ++r) {
    xs[r] = std::log(static_cast<double>(r + 1));
    ys[r] = std::log(stats.pi[r]);
  }
  fit.unigram_exponent = least_squares_slope(xs, ys);

  std::vector<double> row_slopes;
  for (const auto& row : stats.rows) {
    if (row.size() < 10) continue;
    std::vector<double> rx(row.size());
    std::vector<double> ry(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      rx[i] = std::log(static_cast<double>(i + 1));
      ry[i] = std::log(row[i].frequency);
    }
    row_slopes.push_back(least_squares_slope(rx, ry));
  }
  fit.rows_used = row_slopes.size();
  if (!row_slopes.empty()) {
    fit.q25 = quantile(row_slopes, 0.25);
    fit.q50 = quantile(row_slopes, 0.50);
    fit.q75 = quantile(row_slopes, 0.75);
  } else {
    fit.q25 = fit.q50 = fit.q75 = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

std::vector<std::uint32_t> generate_zipf_stream(std::uint32_t vocab_size, double alpha,
                                                std::size_t length, std::uint64_t seed) {
  if (vocab_size == 0) throw DomainError("generate_zipf_stream: vocab size must be positive");
  if (!(alpha >= 0.0)) throw DomainError("generate_zipf_stream: alpha must be >= 0");
  std::vector<double> cumulative(vocab_size);
  double running = 0.0;
  for (std::uint32_t k = 0; k < vocab_size; ++k) {
    running += std::pow(static_cast<double>(k + 1), -alpha);
    cumulative[k] = running;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> stream(length);
  for (auto& token : stream) {
    // 53 high bits -> uniform in [0, 1), independent of the library's
    // distribution implementation.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * running;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    token = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(vocab_size) - 1));
  }
  return stream;
}

}  // namespace zipfscale
