#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zipfscale/baselines.hpp"
#include "zipfscale/errors.hpp"
#include "zipfscale/gd.hpp"
#include "zipfscale/powerlaw.hpp"

using namespace zipfscale;

TEST_SUITE("baselines") {
  TEST_CASE("worst-case rates") {
    CHECK(worst_case_rates(100, 0.0).r_lin == 1.0);
    CHECK(worst_case_rates(10000, 10000.0).r_lin == doctest::Approx(std::exp(-1.0)).epsilon(1e-4));
    CHECK(worst_case_rates(10000, 10000.0).r_lin == doctest::Approx(0.3679).epsilon(1e-3));
    for (const std::size_t d : {2u, 50u, 10000u}) {
      for (const double t : {1.0, 7.0, 1e5}) {
        const WorstCaseRates rates = worst_case_rates(d, t);
        CHECK(rates.r_sub * t * harmonic_partial(d, 1.0) / (2.0 * static_cast<double>(d)) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rates.r_lin <= 1.0);
        if (t < 100.0 * static_cast<double>(d)) CHECK(rates.r_lin > 0.0);
      }
    }
    CHECK_THROWS_AS(worst_case_rates(1, 1.0), DomainError);
  }

  TEST_CASE("worst-case rates are pessimistic at d = 1e4") {
    const std::size_t d = 10000;
    const GdLossModel model(PowerLawSpec(d, 1.0));
    for (const double tau : {0.25, 0.5, 0.75}) {
      const double t = std::pow(static_cast<double>(d), tau);
      const WorstCaseRates rates = worst_case_rates(d, t);
      const double truth = model.relative_loss(t);
      CAPTURE(tau);
      CHECK(rates.r_sub > truth);
      CHECK(rates.r_lin > truth);
      // At tau = 0.75 the linear rate is only exp(-1/d^0.25), about 0.905.
      if (tau <= 0.5) CHECK(rates.r_lin >= 0.99);
      CHECK(std::abs(truth - (1.0 - tau)) <= 0.2);
    }
  }

  TEST_CASE("adagrad bound") {
    CHECK(adagrad_bound(2, 1.0) == doctest::Approx(2.4).epsilon(1e-14));
    CHECK(adagrad_bound(1000, 10.0) * 10.0 == doctest::Approx(adagrad_bound(1000, 1.0)).epsilon(1e-14));
    double previous = INFINITY;
    for (const std::size_t d : {100u, 10'000u, 1'000'000u, 100'000'000u}) {
      const double n = static_cast<double>(d);
      const double asymptote = 6.0 * n * std::log(n) / (std::numbers::pi * std::numbers::pi);
      const double miss = std::abs(adagrad_bound(d, 1.0) / asymptote - 1.0);
      CHECK(miss < previous);
      previous = miss;
    }
    CHECK(previous < 0.05);
  }

  TEST_CASE("adam kappa") {
    CHECK(adam_kappa(5) == 5);
    CHECK(adam_kappa(1) == 1);
    for (const std::uint64_t d : {2u, 17u, 1000u}) CHECK(adam_kappa(d) == d);
  }

  TEST_CASE("sign-descent gradient one-norm") {
    for (const std::size_t d : {10'000u, 1'000'000u}) {
      for (const double tau : {3.0, 10.0}) {
        const double n = static_cast<double>(d);
        const double scaled = sd_grad_one_norm_ratio(d, tau, 1.5) * std::log(n) * tau / std::sqrt(n);
        CAPTURE(d);
        CAPTURE(tau);
        CHECK(scaled > 0.5);
        CHECK(scaled < 1.0);
      }
    }
    // Large t leaves only the decreasing-regime residual 1 - 1/phi.
    const double residual = (1.0 - 1.0 / 1.5) / harmonic_partial(1000, 1.0);
    CHECK(sd_grad_one_norm_ratio(1000, 1e12, 1.5) == doctest::Approx(residual).epsilon(1e-8));
    // phi = 1: the decreasing sum vanishes.
    const double t = 0.5 * 4.0 * std::sqrt(1000.0);
    CHECK(sd_grad_one_norm_ratio(1000, 4.0, 1.0) == doctest::Approx(999.0 / (2.0 * t) / harmonic_partial(1000, 1.0)));
  }

  TEST_CASE("baseline curves") {
    const BaselineCurve lin = baseline_curve(BaselineKind::Linear, 100, {0.0, 10.0, 100.0});
    REQUIRE(lin.points.size() == 3);
    CHECK(lin.points[0].value == 1.0);
    for (const auto& p : lin.points) CHECK(p.value <= 1.0);
    const BaselineCurve adam = baseline_curve(BaselineKind::AdamKappa, 100, {1.0});
    CHECK(adam.points[0].value == 100.0);
    CHECK(std::string(to_string(BaselineKind::AdagradBound)) == "adagrad");
  }
}
