#pragma once

namespace zipfscale {

struct SpecFunTolerance {
  double abs_tol = 1e-10;
  int max_iter = 200;

  void validate() const;
};

/// ln Gamma(x) for x > 0 (Lanczos approximation, g = 7).
double ln_gamma(double x);

/// Gamma(x) for x > 0.
double gamma_fn(double x);

/// Beta(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), a, b > 0.
double beta(double a, double b);

/// Riemann zeta for real s > 1: partial sum plus Euler-Maclaurin tail.
double zeta(double s);

/// Generalized exponential integral E_p(x) = int_1^inf e^{-xu} u^{-p} du,
/// for p >= 1 and x > 0.
double gen_exp_integral(double p, double x, const SpecFunTolerance& tol = {});

/// Inverse of x -> E_p(x). E_p is strictly decreasing on (0, inf) with range
/// (0, 1/(p-1)) for p > 1 and (0, inf) for p == 1.
double gen_exp_integral_inverse(double p, double y,
                                const SpecFunTolerance& tol = {});

/// Principal branch of the Lambert W function for y >= 0.
double lambert_w(double y, const SpecFunTolerance& tol = {});

}  // namespace zipfscale
