#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "fraclab/green.hpp"

using namespace fraclab;

namespace {
const FractionalParams p23 = FractionalParams::make(2.0, 3);
const FractionalParams p21 = FractionalParams::make(2.0, 1);
const FractionalParams p18 = FractionalParams::make(1.8, 3);
}  // namespace

TEST_CASE("closed forms at s = 2") {
  SECTION("3D Yukawa kernel exp(-sqrt(l) r)/(4 pi r)") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (double r = 0.05; r <= 10.0; r += 0.23) {
        const double exact = std::exp(-std::sqrt(lambda) * r) / (4.0 * pi * r);
        const GreenEval g = green(p23, lambda, r);
        CHECK(g.value == Approx(exact).epsilon(1e-6));
      }
    }
  }
  SECTION("1D kernel exp(-sqrt(l)|x|)/(2 sqrt(l))") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (double x = 0.05; x <= 10.0; x += 0.23) {
        const double exact = std::exp(-std::sqrt(lambda) * x) / (2.0 * std::sqrt(lambda));
        CHECK(green(p21, lambda, x).value == Approx(exact).epsilon(1e-6));
      }
    }
  }
  SECTION("paper anchor G_{2,1}(1) in 3D") {
    CHECK(green(p23, 1.0, 1.0).value ==
          Approx(std::exp(-1.0) / (4.0 * pi)).epsilon(1e-10));  // ~0.0292702
  }
}

TEST_CASE("1D values at the origin") {
  // closed form (lambda^{1-1/s} s sin(pi/s))^{-1}, matched by quadrature
  CHECK(green(p21, 1.0, 0.0).value == Approx(0.5).epsilon(1e-12));
  const FractionalParams p43 = FractionalParams::make(4.0 / 3.0, 1);
  CHECK(green(p43, 1.0, 0.0).value ==
        Approx(3.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));  // sin(3pi/4) = sqrt(2)/2
  for (double s : {1.1, 4.0 / 3.0, 1.45}) {
    const FractionalParams p = FractionalParams::make(s, 1);
    for (double lambda : {0.3, 1.0, 2.5}) {
      const double exact =
          1.0 / (std::pow(lambda, 1.0 - 1.0 / s) * s * sin_pi(1.0 / s));
      CHECK(green(p, lambda, 0.0).value == Approx(exact).epsilon(1e-8));
    }
  }
}

TEST_CASE("green_zero power law") {
  CHECK(green_zero(p23, 2.0) == Approx(1.0 / (8.0 * pi)).epsilon(1e-14));
  const FractionalParams phalf = FractionalParams::make(0.5, 1);
  CHECK(green_zero(phalf, 1.0) == Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-14));
  // r -> 0 divergence with exponent -(d-s): green_zero(r) * r -> 1/(4 pi) at s = 2
  for (double r : {1e-3, 1e-6, 1e-9})
    CHECK(green_zero(p23, r) * r == Approx(1.0 / (4.0 * pi)).epsilon(1e-13));
  CHECK_THROWS_AS(green_zero(FractionalParams::make(1.25, 1), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(green_zero(p23, 0.0), std::invalid_argument);
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(green(p18, 1.0, 0.0), std::invalid_argument);  // pointwise singular
  CHECK_THROWS_AS(green(p23, -1.0, 1.0), std::invalid_argument);
  const FractionalParams p125 = FractionalParams::make(1.25, 1);
  CHECK_THROWS_AS(green(p125, 0.0, 0.0), numeric_error);  // zero-energy kernel unbounded
  CHECK_THROWS_AS(green(p125, 0.0, 1.0), numeric_error);
  CHECK_THROWS(green(FractionalParams{1.0, 1, Regime::Transition}, 1.0, 1.0));
}

TEST_CASE("scaling identity G_{s,l e^s}(x) = e^{d-s} G_{s,l}(e x)") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int d : {1, 3}) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      double s;
      if (d == 3)
        s = 1.6 + 0.85 * U(rng);
      else
        s = U(rng) < 0.5 ? 0.55 + 0.4 * U(rng) : 1.05 + 0.4 * U(rng);
      const double lambda = 0.1 + 1.9 * U(rng);
      const double eps = 0.1 + 1.9 * U(rng);
      const double x = 0.05 + 4.95 * U(rng);
      const FractionalParams p = FractionalParams::make(s, d);
      const double lhs = green(p, lambda * std::pow(eps, s), x).value;
      const double rhs = std::pow(eps, double(d) - s) * green(p, lambda, eps * x).value;
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("positivity of the 3D kernel") {
  for (double s : {1.7, 2.0, 2.4})
    for (double lambda : {0.0, 0.5, 1.0, 4.0})
      for (double r : {0.02, 0.3, 1.0, 4.0, 9.0})
        CHECK(green(FractionalParams::make(s, 3), lambda, r).value > 0.0);
}

TEST_CASE("smooth correction J is bounded and continuous through x = 0") {
  for (auto [s, d] : {std::pair{1.8, 3}, {2.2, 3}, {0.75, 1}}) {
    const double j0_closed = green_detail::j_origin_closed(s, d, 1.0);
    const double j0_quad = green_detail::j_origin_quadrature(s, d, 1.0);
    CHECK(j0_quad == Approx(j0_closed).epsilon(1e-11));
    double prev = std::abs(green_detail::j_value(s, d, 1.0, 0.1) - j0_quad);
    for (double x : {0.01, 1e-3, 1e-4}) {
      const double dev = std::abs(green_detail::j_value(s, d, 1.0, x) - j0_quad);
      CHECK(dev < prev + 1e-13);
      prev = dev;
    }
    CHECK(prev <= 1e-3 * std::abs(j0_quad));
  }
}

TEST_CASE("small-lambda expansion ratio tends to 1") {
  SECTION("closed-form anchor at s = 2, d = 3") {
    CHECK(small_lambda_ratio(p23, 1e-6, 1.0) == Approx(1.0).margin(2e-3));
  }
  SECTION("resonance-driven samples approach 1 monotonically") {
    for (auto [s, d, x] : {std::tuple{1.8, 3, 1.0}, {2.2, 3, 0.7}, {0.6, 1, 0.5},
                           {0.75, 1, 0.5}}) {
      const FractionalParams p = FractionalParams::make(s, d);
      double prev = 0.0;
      for (double lambda : {1e-2, 1e-3, 1e-4}) {
        const double ratio = small_lambda_ratio(p, lambda, x);
        CHECK(ratio > prev);
        prev = ratio;
      }
      CHECK(prev == Approx(1.0).margin(5e-2));
    }
  }
  CHECK_THROWS_AS(small_lambda_ratio(p18, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(small_lambda_ratio(FractionalParams::make(1.25, 1), 0.1, 1.0),
                  std::invalid_argument);
}

TEST_CASE("GreenTable matches the pointwise evaluator") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (auto [s, d, lambda] : {std::tuple{1.8, 3, 1.0}, {2.2, 3, 0.37}, {0.75, 1, 1.0},
                              {4.0 / 3.0, 1, 2.0}}) {
    GreenTable table(s, d, lambda, 1e-6, 85.0);
    const FractionalParams p = FractionalParams::make(s, d);
    double worst = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double rho = std::exp(std::log(1e-4) + U(rng) * std::log(10.0 / 1e-4));
      const double ref = green(p, lambda, rho).value;
      worst = std::max(worst, std::abs(table.value(rho) - ref) / std::abs(ref));
    }
    CHECK(worst <= 1e-7);
  }
  SECTION("zero-energy table is the pure power law") {
    GreenTable t0(1.8, 3, 0.0, 1e-6, 85.0);
    CHECK(t0.value(2.0) == Approx(green_zero(p18, 2.0)).epsilon(1e-14));
    CHECK(t0.smooth(2.0) == 0.0);
  }
  SECTION("radial moment integral against direct quadrature") {
    GreenTable t(1.8, 3, 1.0, 1e-6, 85.0);
    QuadResult direct = integrate_adaptive(
        [&](double rho) {
          return rho * (green(p18, 1.0, rho).value - green_zero(p18, rho));
        },
        0.3, 7.0, 1e-12, 1e-11);
    CHECK(t.smooth_moment(0.3, 7.0) == Approx(direct.value).epsilon(1e-7));
  }
}
