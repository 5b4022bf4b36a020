#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "zipfscale/errors.hpp"
#include "zipfscale/gd.hpp"
#include "zipfscale/specfun.hpp"

using namespace zipfscale;

namespace {

// Direct iteration of x <- x - eta * lambda * x on each coordinate.
double iterate_gd(const FullEigenSystem& system, double eta, int steps) {
  double loss = 0.0;
  for (std::size_t idx = 0; idx < system.lambdas.size(); ++idx) {
    double x = system.deltas0[idx];
    for (int s = 0; s < steps; ++s) x -= eta * system.lambdas[idx] * x;
    loss += system.lambdas[idx] * x * x;
  }
  return loss / system.initial_loss();
}

}  // namespace

TEST_SUITE("gd") {
  TEST_CASE("regime and names") {
    CHECK(gd_regime(0.999) == GDRegime::AlphaBelowOne);
    CHECK(gd_regime(1.0) == GDRegime::AlphaEqualsOne);
    CHECK(gd_regime(1.001) == GDRegime::AlphaAboveOne);
    CHECK(std::string(to_string(Algorithm::SD)) == "sd");
  }

  TEST_CASE("relative loss examples") {
    CHECK(gd_relative_loss(PowerLawSpec(1000, 1.0), 0) == 1.0);
    CHECK(gd_relative_loss(PowerLawSpec(2, 1.0), 1) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    const PowerLawSpec spec(2, 1.0);
    const FullEigenSystem system = build_full_problem(spec);
    CHECK(gd_relative_loss(spec, 1) == doctest::Approx(iterate_gd(system, 1.0 / spec.frequency(1), 1)));
  }

  TEST_CASE("closed form matches dense oracle") {
    const std::vector<std::uint64_t> times{0, 1, 10, 100};
    for (const std::size_t d : {2u, 16u, 256u, 2048u}) {
      for (const double alpha : {0.5, 1.0, 2.0}) {
        const PowerLawSpec spec(d, alpha);
        const RateCurve oracle = gd_full_simulation(build_full_problem(spec), 1.0 / spec.frequency(1), times);
        REQUIRE(oracle.points.size() == times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
          CAPTURE(d);
          CAPTURE(alpha);
          CAPTURE(times[i]);
          CHECK(std::abs(gd_relative_loss(spec, times[i]) - oracle.points[i].relative_loss) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("dense oracle agrees with iteration and is permutation invariant") {
    const PowerLawSpec spec(32, 1.0);
    const double eta = 1.0 / spec.frequency(1);
    const FullEigenSystem identity = build_full_problem(spec);
    std::mt19937_64 rng(11);
    std::vector<std::vector<std::size_t>> perms(32, std::vector<std::size_t>(32));
    for (auto& perm : perms) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
    }
    const FullEigenSystem permuted = build_full_problem(spec, perms);
    const RateCurve a = gd_full_simulation(identity, eta, 20);
    const RateCurve b = gd_full_simulation(permuted, eta, 20);
    REQUIRE(a.points.size() == 21);
    for (std::size_t t = 0; t <= 20; ++t) {
      CHECK(std::abs(a.points[t].relative_loss - b.points[t].relative_loss) <= 1e-12);
      CHECK(a.points[t].relative_loss == doctest::Approx(iterate_gd(identity, eta, static_cast<int>(t))).epsilon(1e-9));
    }
    const RateCurve frozen = gd_full_simulation(identity, 0.0, 5);
    for (const auto& point : frozen.points) CHECK(point.relative_loss == 1.0);
    CHECK_THROWS_AS(gd_full_simulation(FullEigenSystem{kOracleMaxDim + 1, 1.0, {}, {}}, 1.0, 1), SizeError);
  }

  TEST_CASE("strictly decreasing in t") {
    for (const double alpha : {0.5, 1.0, 2.0}) {
      const GdLossModel model(PowerLawSpec(10'000, alpha));
      double previous = model.relative_loss(1.0);
      for (double t = 2.0; t < 1e5; t *= 1.7) {
        const double current = model.relative_loss(std::floor(t));
        if (current == 0.0) break;
        CHECK(current < previous);
        previous = current;
      }
    }
  }

  TEST_CASE("integral form") {
    for (const double alpha : {0.5, 1.0, 2.0}) {
      const double plain = alpha == 1.0 ? std::log(100.0) : (std::pow(100.0, 1.0 - alpha) - 1.0) / (1.0 - alpha);
      CHECK(gd_integral_form(100, alpha, 0.0) == doctest::Approx(plain).epsilon(1e-10));
    }
    // Change of variables k = d^z at alpha = 1.
    for (const double t : {1.0, 10.0, 500.0}) {
      const double d = 1e4;
      double direct = 0.0;
      constexpr int kPanels = 200000;
      for (int i = 0; i < kPanels; ++i) {
        const double z = (i + 0.5) / kPanels;
        direct += std::pow(1.0 - std::pow(d, -z), t);
      }
      direct *= std::log(d) / kPanels;
      CHECK(gd_integral_form(10000, 1.0, t) == doctest::Approx(direct).epsilon(1e-7));
    }
  }

  TEST_CASE("approximation error bound") {
    CHECK(gd_approx_error_bound(100, 1.0, 0.0) == 1.0);
    CHECK(gd_approx_error_bound(100, 1.0, 10.0) == doctest::Approx(std::pow(10.0 / 11.0, 10) / 11.0).epsilon(1e-14));
    CHECK(gd_approx_error_bound(100, 1.0, 10.0) == doctest::Approx(0.03505).epsilon(1e-3));
    // Branch switch at 1 + t = d^alpha.
    CHECK(gd_approx_error_bound(100, 1.0, 99.0) == doctest::Approx(std::pow(0.99, 99) / 100.0));
    CHECK(gd_approx_error_bound(100, 1.0, 150.0) == doctest::Approx(std::pow(0.99, 150) / 100.0));
  }

  TEST_CASE("asymptotic rates") {
    CHECK(gd_asymptotic_rate(1.0, 0.5) == doctest::Approx(0.5));
    CHECK(gd_asymptotic_rate(0.5, 1.0) == doctest::Approx(boost::math::expint(2, 1.0)).epsilon(1e-10));
    CHECK(gd_asymptotic_rate(0.5, 1.0) == doctest::Approx(0.1485).epsilon(1e-3));
    const double expected = boost::math::beta(0.5, 21.0) / (2.0 * boost::math::zeta(2.0));
    CHECK(gd_asymptotic_rate(2.0, 10.0) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(gd_asymptotic_rate(2.0, 10.0) == doctest::Approx(0.118).epsilon(1e-2));
    CHECK_THROWS_AS(gd_asymptotic_rate(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(gd_asymptotic_rate(1.0, -0.1), DomainError);
    // Beta form approaches the power form for large t.
    for (const double alpha : {1.5, 2.0, 3.0}) {
      CHECK(gd_asymptotic_rate(alpha, 1e6) / gd_asymptotic_rate_power_form(alpha, 1e6) == doctest::Approx(1.0).epsilon(1e-4));
    }
  }

  TEST_CASE("time scaling and inverse") {
    CHECK(gd_time_scaling(1.0, 10000, 0.5) == doctest::Approx(50.0));
    CHECK(gd_time_scaling(0.5, 10000, 2.0) == doctest::Approx(100.0));
    CHECK(gd_time_scaling(2.0, 10000, 7.0) == 7.0);
    for (const double alpha : {0.5, 1.0, 2.0}) {
      for (const double tau : {0.2, 0.7}) {
        const double t = gd_time_scaling(alpha, 1000, tau);
        CHECK(gd_rescaled_time(alpha, 1000, t) == doctest::Approx(tau).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("asymptotic gap shrinks with d") {
    const std::vector<std::size_t> ds{1000, 10'000, 100'000, 1'000'000};
    for (const double alpha : {0.5, 1.0, 2.0}) {
      std::vector<double> taus;
      if (alpha == 1.0) {
        for (int i = 1; i <= 9; ++i) taus.push_back(0.1 * i);
      } else if (alpha < 1.0) {
        taus = {0.25, 1.0, 4.0};
      } else {
        taus = {1.0, 10.0, 100.0};
      }
      double previous = INFINITY;
      for (const std::size_t d : ds) {
        const GdLossModel model(PowerLawSpec(d, alpha));
        double gap = 0.0;
        for (const double tau : taus) {
          gap = std::max(gap, std::abs(model.relative_loss(gd_time_scaling(alpha, d, tau)) -
                                       gd_asymptotic_rate(alpha, tau)));
        }
        CAPTURE(alpha);
        CAPTURE(d);
        CHECK(gap < previous);
        previous = gap;
      }
    }
  }

  TEST_CASE("time to eps") {
    CHECK(gd_time_to_eps(1.0, 10000, 0.5) == doctest::Approx(100.0));
    CHECK(gd_time_to_eps(1.0, 10000, 1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    const double t = gd_time_to_eps(0.5, 1'000'000, 0.1);
    const GdLossModel model(PowerLawSpec(1'000'000, 0.5));
    CHECK(std::abs(model.relative_loss(t) - 0.1) <= 0.02);
    const double c = std::tgamma(0.5) / (2.0 * boost::math::zeta(2.0));
    CHECK(gd_time_to_eps(2.0, 10, 0.1) == doctest::Approx(std::pow(c / 0.1, 2.0)));
    CHECK_THROWS_AS(gd_time_to_eps(1.0, 100, 0.0), DomainError);
    CHECK_THROWS_AS(gd_time_to_eps(1.0, 100, 1.0), DomainError);
  }

  TEST_CASE("time bounds for alpha below one") {
    const GdTimeBounds b = gd_time_bounds_alpha_lt_1(0.5, 1e-6);
    const double y = 1.0 / 1e-6;
    CHECK(b.tau_plus - b.tau_minus == doctest::Approx(std::log(std::log(y)) + 2.0).epsilon(1e-14));
    const double root = gen_exp_integral_inverse(2.0, 1e-6);
    CHECK(b.tau_minus <= root);
    CHECK(root <= b.tau_plus);
    CHECK(b.eps_threshold == doctest::Approx(lambert_w(6.0) / 6.0));
    CHECK(b.eps_threshold == doctest::Approx(0.2387).epsilon(1e-3));
    for (const double alpha : {0.2, 0.3, 0.5, 0.75}) {
      const double eps = 1e-4;
      const GdTimeBounds bounds = gd_time_bounds_alpha_lt_1(alpha, eps);
      REQUIRE(eps <= bounds.eps_threshold);
      const double tau = gen_exp_integral_inverse(1.0 / alpha, alpha / (1.0 - alpha) * eps);
      CAPTURE(alpha);
      CHECK(bounds.tau_minus <= tau);
      CHECK(tau <= bounds.tau_plus);
    }
    CHECK_THROWS_AS(gd_time_bounds_alpha_lt_1(1.0, 0.1), DomainError);
  }
}
