#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace zipfscale {

/// Largest vocabulary for which the dense d x d eigen-system oracle is built.
inline constexpr std::size_t kOracleMaxDim = 2048;

/// Sum_{k=1}^{d} k^{-p}, accumulated from k = d down to 1.
double harmonic_partial(std::size_t d, double p);

/// Leading-order behaviour of harmonic_partial as d grows:
/// d^{1-p}/(1-p) for p < 1, ln d for p == 1, zeta(p) for p > 1.
double harmonic_asymptote(std::size_t d, double p);

/// Prefix table H[n] = sum_{k=1}^{n} k^{-p} for n = 0..d.
std::vector<double> harmonic_prefix(std::size_t d, double p);

/// Vocabulary of size d whose token frequencies follow a power law with
/// exponent alpha, pi_k = 1 / (z k^alpha).
class PowerLawSpec {
 public:
  PowerLawSpec(std::size_t d, double alpha);

  std::size_t d() const { return d_; }
  double alpha() const { return alpha_; }
  /// Normalizer z = H_{d, alpha}.
  double z() const { return z_; }
  /// Frequency of the token with 1-based rank k.
  double frequency(std::size_t k) const;

 private:
  std::size_t d_;
  double alpha_;
  double z_;
};

std::vector<double> frequencies(const PowerLawSpec& spec);

/// Dense eigen-system of the linear bigram least-squares problem: eigenvalue
/// lambda_{ij} = pi_i and initial distance delta_{ij}(0) = pi_{rho_i(j)}.
/// Both grids are stored row-major.
struct FullEigenSystem {
  std::size_t d = 0;
  double alpha = 0.0;
  std::vector<double> lambdas;
  std::vector<double> deltas0;

  double lambda(std::size_t i, std::size_t j) const { return lambdas[i * d + j]; }
  double delta0(std::size_t i, std::size_t j) const { return deltas0[i * d + j]; }

  /// sum_{ij} lambda_{ij} delta_{ij}(0)^2.
  double initial_loss() const;
};

/// Builds the dense system. Each permutation (0-based) maps column j of row i
/// to frequency index row_permutations[i][j]; identity ordering by default.
FullEigenSystem build_full_problem(
    const PowerLawSpec& spec,
    const std::optional<std::vector<std::vector<std::size_t>>>& row_permutations =
        std::nullopt);

/// Peak location (1 + t)^{1/alpha} of s(k) = k^{-alpha} (1 - k^{-alpha})^t.
double unimodal_peak(double alpha, double t);

}  // namespace zipfscale
