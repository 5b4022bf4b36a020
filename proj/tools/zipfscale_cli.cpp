// Command-line runner for the power-law GD / sign-descent experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "zipfscale/baselines.hpp"
#include "zipfscale/corpus.hpp"
#include "zipfscale/csv.hpp"
#include "zipfscale/errors.hpp"
#include "zipfscale/experiments.hpp"

namespace {

using namespace zipfscale;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;

struct Options {
  double alpha = 1.0;
  std::vector<std::size_t> d_list;
  std::vector<double> tau_grid;
  std::vector<double> eps_grid;
  std::string algo = "gd";
  std::string out;
  bool json = false;
  std::string counts;
  std::string tokens;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  // bigram-count / synth-corpus
  std::uint32_t vocab = 0;
  std::size_t length = 100000;
  std::string input;
};

Algorithm parse_algo(const std::string& name) {
  if (name == "gd") return Algorithm::GD;
  if (name == "sd") return Algorithm::SD;
  throw ConfigError("unknown algorithm '" + name + "'");
}

ExperimentConfig make_config(const Options& o, bool eps) {
  ExperimentConfig config;
  config.alpha = o.alpha;
  config.d_list = o.d_list;
  config.grid = eps ? o.eps_grid : o.tau_grid;
  config.algorithm = parse_algo(o.algo);
  config.output_path = o.out;
  config.seed = o.seed;
  config.threads = o.threads;
  return config;
}

json cell_value(const std::string& text) {
  if (text == "nan" || text == "inf" || text == "-inf") return text;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  return text;
}

json table_json(const CsvTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows()) {
    json object = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) object[table.header()[i]] = cell_value(row[i]);
    rows.push_back(std::move(object));
  }
  return {{"columns", table.header()}, {"rows", rows}};
}

json config_json(const std::string& command, const Options& o) {
  return {{"command", command},     {"alpha", o.alpha},       {"d", o.d_list},
          {"tau_grid", o.tau_grid}, {"eps_grid", o.eps_grid}, {"algo", o.algo},
          {"threads", o.threads},   {"seed", o.seed},         {"counts", o.counts},
          {"tokens", o.tokens}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed on " + path);
}

void emit(const std::string& command, const Options& o, const CsvTable& table,
          const json& extra = json::object()) {
  if (o.json) {
    json summary = {{"version", ZIPFSCALE_VERSION}, {"config", config_json(command, o)}};
    summary.update(table_json(table));
    summary.update(extra);
    if (o.out.empty() || o.out == "-") {
      std::cout << summary.dump(2) << '\n';
      return;
    }
    write_text(o.out + ".json", summary.dump(2) + "\n");
  }
  table.write(o.out);
}

BigramStats load_stats(const Options& o, std::uint32_t vocab_hint = 0) {
  if (!o.counts.empty()) return stats_from_counts(read_counts_file(o.counts));
  if (o.tokens.empty()) throw ConfigError("either --counts or --tokens is required");
  const std::vector<std::uint32_t> stream = read_token_file(o.tokens);
  std::uint32_t vocab = vocab_hint;
  if (vocab == 0) {
    for (const std::uint32_t token : stream) {
      if (token != kDocumentBoundary) vocab = std::max(vocab, token + 1);
    }
  }
  return stats_from_counts(count_bigrams(stream, vocab, o.threads));
}

CsvTable stats_table(const BigramStats& stats) {
  CsvTable table({"rank", "token", "pi", "row_nonzero", "row_power_sum"});
  for (std::size_t r = 0; r < stats.d; ++r) {
    table.add_row({cell(std::uint64_t{r + 1}), cell(std::uint64_t{stats.token_of_rank[r]}),
                   cell(stats.pi[r]), cell(std::uint64_t{stats.rows[r].size()}),
                   cell(stats.row_power_sums[r])});
  }
  return table;
}

int run(const std::string& command, Options& o) {
  if (command == "gd-curve") {
    if (o.algo != "gd") throw ConfigError("gd-curve runs gradient descent only");
    emit(command, o, run_gd_curves(make_config(o, false)));
  } else if (command == "sd-curve") {
    o.algo = "sd";
    emit(command, o, run_sd_curves(make_config(o, false)));
  } else if (command == "sd-stepsize") {
    o.algo = "sd";
    emit(command, o, run_stepsize_convergence(make_config(o, false)));
  } else if (command == "time-to-eps") {
    const TimeToEpsResult result = run_time_to_eps(make_config(o, true));
    emit(command, o, result.points, {{"fits", table_json(result.fits)}});
    std::cerr << result.fits.str();
  } else if (command == "baselines") {
    emit(command, o, run_baselines(make_config(o, false)));
  } else if (command == "bigram-count") {
    if (o.tokens.empty()) throw ConfigError("bigram-count needs --tokens");
    if (o.out.empty()) throw ConfigError("bigram-count needs --out for the counts file");
    const std::vector<std::uint32_t> stream = read_token_file(o.tokens);
    std::uint32_t vocab = o.vocab;
    if (vocab == 0) {
      for (const std::uint32_t token : stream) {
        if (token != kDocumentBoundary) vocab = std::max(vocab, token + 1);
      }
    }
    const BigramCounts counts = count_bigrams(stream, vocab, o.threads);
    write_counts_file(o.out, counts);
    std::cerr << "tokens " << counts.total_tokens << ", bigrams " << counts.bigram_total()
              << ", vocab " << counts.vocab_size << '\n';
  } else if (command == "bigram-stats") {
    const BigramStats stats = load_stats(o, o.vocab);
    json extra = json::object();
    if (stats.d >= 10) {
      const ZipfFit fit = zipf_fit_check(stats);
      extra["zipf_fit"] = {{"unigram_exponent", fit.unigram_exponent},
                           {"conditional_q25", fit.q25},
                           {"conditional_q50", fit.q50},
                           {"conditional_q75", fit.q75},
                           {"rows_used", fit.rows_used}};
      std::cerr << "unigram exponent " << format_double(fit.unigram_exponent)
                << ", conditional exponent quartiles " << format_double(fit.q25) << ' '
                << format_double(fit.q50) << ' ' << format_double(fit.q75) << '\n';
    }
    emit(command, o, stats_table(stats), extra);
  } else if (command == "real-curve") {
    const BigramStats stats = load_stats(o, o.vocab);
    emit(command, o, run_real_data(make_config(o, false), stats));
  } else if (command == "fit") {
    if (o.input.empty()) throw ConfigError("fit needs an input CSV");
    emit(command, o, fit_time_to_eps_table(CsvTable::read(o.input)));
  } else if (command == "synth-corpus") {
    if (o.out.empty()) throw ConfigError("synth-corpus needs --out");
    if (o.vocab == 0) throw ConfigError("synth-corpus needs --vocab");
    write_token_file(o.out, generate_zipf_stream(o.vocab, o.alpha, o.length, o.seed));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power-law scaling experiments for gradient descent and sign descent"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ZIPFSCALE_VERSION);
  Options o;

  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "power-law exponent")->capture_default_str();
    sub->add_option("--d", o.d_list, "vocabulary size (repeatable)")->delimiter(',');
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "seed for randomized parts");
    sub->add_option("--out", o.out, "output path, '-' for stdout");
    sub->add_flag("--json", o.json, "also write a JSON summary");
  };
  const auto add_tau = [&](CLI::App* sub) {
    sub->add_option("--tau-grid", o.tau_grid, "rescaled times")->delimiter(',');
  };
  const auto add_data = [&](CLI::App* sub) {
    sub->add_option("--counts", o.counts, "counts file")->check(CLI::ExistingFile);
    sub->add_option("--tokens", o.tokens, "token stream file")->check(CLI::ExistingFile);
    sub->add_option("--vocab", o.vocab, "vocabulary size (default: max id + 1)");
  };
  const auto add_algo = [&](CLI::App* sub) {
    sub->add_option("--algo", o.algo, "gd or sd")->check(CLI::IsMember({"gd", "sd"}));
  };

  auto* gd = app.add_subcommand("gd-curve", "GD loss vs rescaled time");
  add_model(gd);
  add_tau(gd);
  add_algo(gd);
  auto* sd = app.add_subcommand("sd-curve", "sign-descent loss vs rescaled time");
  add_model(sd);
  add_tau(sd);
  auto* step = app.add_subcommand("sd-stepsize", "grid-optimal phi vs predicted phi");
  add_model(step);
  add_tau(step);
  auto* eps = app.add_subcommand("time-to-eps", "iterations to reach eps and fitted exponents");
  add_model(eps);
  add_algo(eps);
  eps->add_option("--eps-grid", o.eps_grid, "target relative losses")->delimiter(',');
  auto* base = app.add_subcommand("baselines", "worst-case rates against the true GD loss");
  add_model(base);
  add_tau(base);
  auto* count = app.add_subcommand("bigram-count", "count bigrams of a token file");
  add_data(count);
  count->add_option("--out", o.out, "counts file to write");
  count->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  auto* stats = app.add_subcommand("bigram-stats", "rank-ordered statistics and Zipf fit");
  add_data(stats);
  stats->add_option("--out", o.out, "output path, '-' for stdout");
  stats->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  stats->add_flag("--json", o.json, "also write a JSON summary");
  auto* real = app.add_subcommand("real-curve", "loss curve on corpus statistics");
  add_model(real);
  add_tau(real);
  add_algo(real);
  add_data(real);
  auto* fit = app.add_subcommand("fit", "refit scaling exponents from a time-to-eps CSV");
  fit->add_option("input", o.input, "time-to-eps CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--out", o.out, "output path, '-' for stdout");
  fit->add_flag("--json", o.json, "also write a JSON summary");
  auto* synth = app.add_subcommand("synth-corpus", "write an i.i.d. Zipf token stream");
  synth->add_option("--alpha", o.alpha, "power-law exponent");
  synth->add_option("--vocab", o.vocab, "vocabulary size")->required();
  synth->add_option("--length", o.length, "number of tokens");
  synth->add_option("--seed", o.seed, "generator seed");
  synth->add_option("--out", o.out, "token file to write (.txt for text)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SizeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
