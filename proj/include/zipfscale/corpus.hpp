#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "zipfscale/gd.hpp"
#include "zipfscale/powerlaw.hpp"

namespace zipfscale {

/// Token id that separates documents inside a stream.
inline constexpr std::uint32_t kDocumentBoundary = 0xFFFFFFFFu;

/// Above this vocabulary size no dense d x d table may be allocated.
inline constexpr std::size_t kDenseTableMaxDim = 4096;

/// Raw unigram and consecutive-pair counts of a token stream.
struct BigramCounts {
  std::uint32_t vocab_size = 0;
  std::map<std::uint32_t, std::uint64_t> unigram;
  /// Context id -> (next id, count), sorted by next id.
  std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint64_t>>> bigram_rows;
  std::uint64_t total_tokens = 0;

  /// Adds another shard's counts. Vocabulary sizes must agree.
  void merge(const BigramCounts& other);
  std::uint64_t bigram_total() const;
};

/// Counts unigrams and consecutive pairs. kDocumentBoundary breaks pairing.
/// `threads` > 1 splits the stream at boundaries-agnostic shard edges and
/// merges; the result does not depend on the thread count.
BigramCounts count_bigrams(std::span<const std::uint32_t> stream, std::uint32_t vocab_size,
                           unsigned threads = 1);

struct ConditionalEntry {
  std::uint32_t next_rank = 0;  // 0-based rank of the next token
  double frequency = 0.0;
};

/// Normalized statistics in rank order (index 0 is the most frequent token).
struct BigramStats {
  std::size_t d = 0;
  std::vector<double> pi;
  std::vector<std::vector<ConditionalEntry>> rows;
  std::vector<double> row_power_sums;
  std::vector<std::uint32_t> token_of_rank;
  std::map<std::uint32_t, std::uint32_t> rank_of_token;

  std::size_t nonzero_entries() const;
};

BigramStats stats_from_counts(const BigramCounts& counts);

/// Exact power-law statistics with every row equal to the unigram
/// distribution in rank order.
BigramStats stats_from_powerlaw(const PowerLawSpec& spec);

/// Counts whose normalization reproduces `stats_from_powerlaw` for alpha = 1
/// exactly in integers: count(j, k) = (L/j)(L/k) with L = lcm(1..d).
BigramCounts powerlaw_product_counts(std::size_t d);

/// GD with step-size 1/pi_1 on the real statistics, normalized loss.
RateCurve real_gd_curve(const BigramStats& stats, std::span<const std::uint64_t> times);

/// Exact sign-descent loss after T (even) steps, normalized.
double real_sd_loss(const BigramStats& stats, double eta, std::uint64_t horizon_T);

struct StepSizeOptimum {
  double eta_star = 0.0;
  double loss_star = 0.0;
  double eta_min = 0.0;
  double eta_max = 0.0;
  bool grid_fallback = false;
};

/// Golden-section search on log eta over [eta_min/d, d eta_max].
StepSizeOptimum optimize_sd_step(const BigramStats& stats, std::uint64_t horizon_T);

/// Counts sign changes of the discrete slope of real_sd_loss over a log grid.
int sd_loss_slope_sign_changes(const BigramStats& stats, std::uint64_t horizon_T,
                               std::size_t grid_points = 200);

struct ZipfFit {
  double unigram_exponent = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  std::size_t rows_used = 0;
};

ZipfFit zipf_fit_check(const BigramStats& stats);

// File formats.

std::vector<std::uint32_t> read_token_file(const std::filesystem::path& path);
void write_token_file(const std::filesystem::path& path, std::span<const std::uint32_t> stream);

BigramCounts read_counts_file(const std::filesystem::path& path);
void write_counts_file(const std::filesystem::path& path, const BigramCounts& counts);

/// Deterministic i.i.d. stream with P(k) proportional to (k+1)^{-alpha},
/// k = 0..vocab-1.
std::vector<std::uint32_t> generate_zipf_stream(std::uint32_t vocab_size, double alpha,
                                                std::size_t length, std::uint64_t seed);

}  // namespace zipfscale
