#include "zipfscale/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zipfscale/errors.hpp"
#include "zipfscale/quadrature.hpp"

namespace zipfscale {
namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Stirling correction ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2].
double stirling_correction(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

// ln Gamma(b + a) - ln Gamma(b) for large b without cancellation.
double ln_gamma_shift(double b, double a) {
  return (b - 0.5) * std::log1p(a / b) + a * std::log(b + a) - a +
         stirling_correction(b + a) - stirling_correction(b);
}

double e_p_upper_bound(double n, double x) {
  // e^{-x} / (x + n - 1); for n == 1 this is e^{-x} / x.
  return std::exp(-x) / (x + n - 1.0);
}

double e_p_lower_bound(double n, double x) { return std::exp(-x) / (x + n); }

}  // namespace

void SpecFunTolerance::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("SpecFunTolerance: abs_tol must be > 0");
  if (max_iter < 1) throw DomainError("SpecFunTolerance: max_iter must be >= 1");
}

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("ln_gamma: argument must be a positive finite number, got " +
                      std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection keeps the rational part away from its pole at 0.
    return std::log(kPi / std::sin(kPi * x)) - ln_gamma(1.0 - x);
  }
  if (x > 50.0) {
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) +
           stirling_correction(x);
  }
  const double z = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

double gamma_fn(double x) { return std::exp(ln_gamma(x)); }

double beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta: both arguments must be positive");
  }
  const double small = std::min(a, b);
  const double large = std::max(a, b);
  if (large > 50.0 && large > 4.0 * small) {
    return std::exp(ln_gamma(small) - ln_gamma_shift(large, small));
  }
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

double zeta(double s) {
  if (!(s > 1.0) || std::isnan(s)) {
    throw DomainError("zeta: series diverges for s <= 1");
  }
  constexpr int kTerms = 100;
  const double n = kTerms;
  double sum = 0.0;
  for (int k = kTerms - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);

  // Euler-Maclaurin tail sum_{k >= n} k^{-s}.
  constexpr std::array<double, 4> kBernoulliOverFactorial = {
      1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
  double tail = std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s);
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  double power = std::pow(n, -s - 1.0);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    tail += kBernoulliOverFactorial[j] * rising * power;
    const double m = static_cast<double>(2 * j + 1);
    rising *= (s + m) * (s + m + 1.0);
    power /= n * n;
  }
  return sum + tail;
}

double gen_exp_integral(double p, double x, const SpecFunTolerance& tol) {
  tol.validate();
  if (!(p >= 1.0)) throw DomainError("gen_exp_integral: order p must be >= 1");
  if (!(x > 0.0)) throw DomainError("gen_exp_integral: x must be > 0");
  const double prefactor = std::exp(-x) / x;
  if (prefactor == 0.0) return 0.0;

  // u = 1 + v/x maps the integral to e^{-x}/x * int_0^inf e^{-v} (1+v/x)^{-p} dv.
  const auto integrand = [p, x](double v) {
    return std::exp(-v - p * std::log1p(v / x));
  };
  constexpr double kCutoff = 60.0;
  const double split = std::min(x, 1.0);
  QuadratureOptions options;
  options.rel_tol = 1e-14;
  options.abs_tol = 0.0;
  const double head = integrate(integrand, 0.0, split, options).value;
  const double body = integrate(integrand, split, kCutoff, options).value;
  return prefactor * (head + body);
}

double gen_exp_integral_inverse(double p, double y, const SpecFunTolerance& tol) {
  tol.validate();
  if (!(p >= 1.0)) throw DomainError("gen_exp_integral_inverse: order p must be >= 1");
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw DomainError("gen_exp_integral_inverse: target must be positive and finite");
  }
  if (p > 1.0 && y >= 1.0 / (p - 1.0)) {
    throw DomainError("gen_exp_integral_inverse: target " + std::to_string(y) +
                      " is not attained; E_p(0+) = 1/(p-1) = " +
                      std::to_string(1.0 / (p - 1.0)));
  }
  const double n_floor = std::floor(p);
  const double n_ceil = std::ceil(p);

  // E_ceil(p) <= E_p <= E_floor(p) and e^{-x}/(x+n) <= E_n(x) <= e^{-x}/(x+n-1)
  // give brackets without evaluating E_p itself.
  double hi = 1.0;
  while (e_p_upper_bound(n_floor, hi) > y) hi *= 2.0;
  double lo = std::min(1.0, hi);
  while (lo > 1e-300 && e_p_lower_bound(n_ceil, lo) < y &&
         e_p_lower_bound(n_ceil, 0.0) > y) {
    lo *= 0.5;
  }
  // The integer-order lower bound saturates at 1/ceil(p); fall back to E_p.
  while (gen_exp_integral(p, lo, tol) < y) {
    lo *= 0.5;
    if (lo < 1e-300) {
      throw DomainError("gen_exp_integral_inverse: target outside representable range");
    }
  }

  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double mid = (hi > 2.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gen_exp_integral(p, mid, tol) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

double lambert_w(double y, const SpecFunTolerance& tol) {
  tol.validate();
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw DomainError("lambert_w: only the principal branch on y >= 0 is supported");
  }
  if (y == 0.0) return 0.0;
  double w = std::log1p(y);
  if (y > 3.0) w -= std::log(w);
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - y;
    const double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace zipfscale
