#include "zipfscale/powerlaw.hpp"

#include <cmath>
#include <string>

#include "zipfscale/errors.hpp"
#include "zipfscale/specfun.hpp"
#include "zipfscale/summation.hpp"

namespace zipfscale {

double harmonic_partial(std::size_t d, double p) {
  if (d == 0) throw DomainError("harmonic_partial: d must be >= 1");
  double sum = 0.0;
  for (std::size_t k = d; k >= 1; --k) sum += std::pow(static_cast<double>(k), -p);
  return sum;
}

double harmonic_asymptote(std::size_t d, double p) {
  const double n = static_cast<double>(d);
  if (p < 1.0) return std::pow(n, 1.0 - p) / (1.0 - p);
  if (p == 1.0) return std::log(n);
  return zeta(p);
}

std::vector<double> harmonic_prefix(std::size_t d, double p) {
  // Prefix sums must run upwards; compensated summation keeps the large-d
  // entries as accurate as the descending harmonic_partial.
  std::vector<double> prefix(d + 1, 0.0);
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 1; k <= d; ++k) {
    const double term = std::pow(static_cast<double>(k), -p) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
    prefix[k] = sum;
  }
  return prefix;
}

PowerLawSpec::PowerLawSpec(std::size_t d, double alpha) : d_(d), alpha_(alpha) {
  if (d == 0) throw DomainError("PowerLawSpec: d must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("PowerLawSpec: alpha must be positive, got " + std::to_string(alpha));
  }
  z_ = harmonic_partial(d, alpha);
}

double PowerLawSpec::frequency(std::size_t k) const {
  return 1.0 / (z_ * std::pow(static_cast<double>(k), alpha_));
}

std::vector<double> frequencies(const PowerLawSpec& spec) {
  std::vector<double> pi(spec.d());
  for (std::size_t k = 1; k <= spec.d(); ++k) pi[k - 1] = spec.frequency(k);
  return pi;
}

double FullEigenSystem::initial_loss() const {
  CompensatedSum total;
  for (std::size_t idx = 0; idx < lambdas.size(); ++idx) {
    total.add(lambdas[idx] * deltas0[idx] * deltas0[idx]);
  }
  return total.value();
}

FullEigenSystem build_full_problem(
    const PowerLawSpec& spec,
    const std::optional<std::vector<std::vector<std::size_t>>>& row_permutations) {
  const std::size_t d = spec.d();
  if (d > kOracleMaxDim) {
    throw SizeError("build_full_problem: d = " + std::to_string(d) +
                    " exceeds the dense oracle cap of " + std::to_string(kOracleMaxDim));
  }
  if (row_permutations && row_permutations->size() != d) {
    throw DomainError("build_full_problem: expected one permutation per row");
  }
  const std::vector<double> pi = frequencies(spec);
  FullEigenSystem system;
  system.d = d;
  system.alpha = spec.alpha();
  system.lambdas.resize(d * d);
  system.deltas0.resize(d * d);
  std::vector<char> seen(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (row_permutations) {
      const auto& perm = (*row_permutations)[i];
      if (perm.size() != d) throw DomainError("build_full_problem: permutation has wrong length");
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t j : perm) {
        if (j >= d || seen[j]) {
          throw DomainError("build_full_problem: row " + std::to_string(i) +
                            " is not a permutation of 0..d-1");
        }
        seen[j] = 1;
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      system.lambdas[i * d + j] = pi[i];
      system.deltas0[i * d + j] = row_permutations ? pi[(*row_permutations)[i][j]] : pi[j];
    }
  }
  return system;
}

double unimodal_peak(double alpha, double t) {
  if (!(t >= 0.0)) throw DomainError("unimodal_peak: t must be >= 0");
  return std::pow(1.0 + t, 1.0 / alpha);
}

}  // namespace zipfscale
