#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "zipfscale/errors.hpp"
#include "zipfscale/quadrature.hpp"
#include "zipfscale/specfun.hpp"

using namespace zipfscale;

namespace {

// E_p(x) by exp-sinh quadrature on [1, inf).
double oracle_expint(double p, double x) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double u) { return std::exp(-x * u) * std::pow(u, -p); }, 1.0,
                              std::numeric_limits<double>::infinity());
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
  return out;
}

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("tolerance validation") {
    CHECK_NOTHROW(SpecFunTolerance{}.validate());
    CHECK_THROWS_AS((SpecFunTolerance{0.0, 10}.validate()), DomainError);
    CHECK_THROWS_AS((SpecFunTolerance{1e-10, 0}.validate()), DomainError);
  }

  TEST_CASE("ln_gamma known values") {
    CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ln_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-13));
    CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
    CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
  }

  TEST_CASE("ln_gamma and gamma against Boost") {
    for (const double x : log_grid(1e-3, 300.0, 60)) {
      CAPTURE(x);
      CHECK(std::abs(ln_gamma(x) - boost::math::lgamma(x)) <= 1e-10 * std::max(1.0, std::abs(boost::math::lgamma(x))));
      if (x < 100.0) CHECK(gamma_fn(x) == doctest::Approx(boost::math::tgamma(x)).epsilon(1e-10));
    }
  }

  TEST_CASE("beta") {
    CHECK(beta(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(beta(0.5, 3.0) == doctest::Approx(16.0 / 15.0).epsilon(1e-12));
    const double quad =
        integrate([](double z) { return std::pow(z, -0.5) * std::pow(1.0 - z, 20.0); }, 0.0, 1.0)
            .value;
    CHECK(beta(0.5, 21.0) == doctest::Approx(quad).epsilon(1e-9));
    CHECK(beta(0.5, 21.0) == doctest::Approx(0.389).epsilon(1e-3));
    for (const double a : {0.1, 0.5, 1.5, 7.0}) {
      for (const double b : {0.3, 1.0, 3.0, 201.0, 2e6}) {
        CAPTURE(a);
        CAPTURE(b);
        CHECK(beta(a, b) == doctest::Approx(boost::math::beta(a, b)).epsilon(1e-10));
      }
    }
    CHECK_THROWS_AS(beta(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(beta(1.0, -2.0), DomainError);
  }

  TEST_CASE("zeta") {
    const double pi = std::numbers::pi;
    CHECK(std::abs(zeta(2.0) - pi * pi / 6.0) <= 1e-12);
    CHECK(std::abs(zeta(4.0) - std::pow(pi, 4) / 90.0) <= 1e-12);
    CHECK(std::abs(zeta(3.0) - 1.2020569031595942) <= 1e-12);
    for (const double s : {1.01, 1.1, 1.5, 2.5, 3.0, 8.0, 40.0}) {
      CAPTURE(s);
      CHECK(zeta(s) == doctest::Approx(boost::math::zeta(s)).epsilon(1e-11));
    }
    CHECK_THROWS_AS(zeta(1.0), DomainError);
    CHECK_THROWS_AS(zeta(0.5), DomainError);
  }

  TEST_CASE("zeta agrees with brute partial summation") {
    constexpr std::size_t kTerms = 10'000'000;
    for (const double s : {1.1, 1.5, 2.0, 3.0}) {
      double partial = 0.0;
      for (std::size_t k = kTerms; k >= 1; --k) partial += std::pow(static_cast<double>(k), -s);
      // Tail beyond kTerms by Euler-Maclaurin: N^{1-s}/(s-1) - N^{-s}/2.
      const double n = static_cast<double>(kTerms);
      const double tail = std::pow(n, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(n, -s);
      CAPTURE(s);
      CHECK(std::abs(zeta(s) - (partial + tail)) <= 1e-8);
    }
  }

  TEST_CASE("generalized exponential integral values") {
    CHECK(gen_exp_integral(1.0, 1.0) == doctest::Approx(0.21938393439552029).epsilon(1e-10));
    for (const double p : {1.0, 1.5, 2.0, 4.0, 1.0 / 0.3}) {
      for (const double x : log_grid(1e-3, 50.0, 25)) {
        CAPTURE(p);
        CAPTURE(x);
        const double ours = gen_exp_integral(p, x);
        CHECK(std::abs(ours - oracle_expint(p, x)) <= 1e-10 + 1e-9 * ours);
        if (p == std::floor(p)) {
          CHECK(ours == doctest::Approx(boost::math::expint(static_cast<int>(p), x)).epsilon(1e-10));
        }
      }
    }
    CHECK_THROWS_AS(gen_exp_integral(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(gen_exp_integral(0.5, 1.0), DomainError);
  }

  TEST_CASE("integer-order bracketing") {
    for (int n = 1; n <= 4; ++n) {
      for (const double x : log_grid(1e-2, 40.0, 30)) {
        CAPTURE(n);
        CAPTURE(x);
        const double e = gen_exp_integral(n, x);
        CHECK(std::exp(-x) / (x + n) <= e);
        CHECK(e <= std::exp(-x) / (x + n - 1));
      }
    }
  }

  TEST_CASE("monotone in p and x") {
    const std::vector<double> ps{1.0, 1.25, 1.5, 2.0, 3.0, 4.0};
    const std::vector<double> xs = log_grid(1e-3, 50.0, 20);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i + 1 < ps.size()) CHECK(gen_exp_integral(ps[i + 1], xs[j]) < gen_exp_integral(ps[i], xs[j]));
        if (j + 1 < xs.size()) CHECK(gen_exp_integral(ps[i], xs[j + 1]) < gen_exp_integral(ps[i], xs[j]));
      }
    }
  }

  TEST_CASE("inverse round trip") {
    CHECK(gen_exp_integral_inverse(1.0, gen_exp_integral(1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(gen_exp_integral_inverse(2.0, gen_exp_integral(2.0, 3.7)) == doctest::Approx(3.7).epsilon(1e-8));
    for (const double p : {1.0, 1.5, 2.0, 4.0}) {
      for (const double x : log_grid(1e-3, 50.0, 30)) {
        CAPTURE(p);
        CAPTURE(x);
        const double back = gen_exp_integral_inverse(p, gen_exp_integral(p, x));
        CHECK(std::abs(back - x) <= 1e-6 * x);
      }
    }
  }

  TEST_CASE("inverse range errors") {
    CHECK_THROWS_AS(gen_exp_integral_inverse(2.0, 0.0), DomainError);
    CHECK_THROWS_AS(gen_exp_integral_inverse(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(gen_exp_integral_inverse(1.0, -1.0), DomainError);
    CHECK_NOTHROW(gen_exp_integral_inverse(1.0, 5.0));
  }

  TEST_CASE("lambert_w") {
    CHECK(lambert_w(0.0) == 0.0);
    CHECK(lambert_w(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(std::exp(lambert_w(6.0) / 6.0) - 1.2696) <= 1e-3);
    for (int i = 0; i <= 200; ++i) {
      const double y = 0.5 * i;
      const double w = lambert_w(y);
      CAPTURE(y);
      CHECK(std::abs(w * std::exp(w) - y) <= 1e-10 * std::max(y, 1e-300));
      CHECK(w == doctest::Approx(boost::math::lambert_w0(y)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lambert_w(-0.1), DomainError);
  }
}
