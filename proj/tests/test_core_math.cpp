#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "fraclab/core_math.hpp"

using namespace fraclab;

TEST_CASE("regime classification") {
  CHECK(classify_regime(1.8, 3) == Regime::ResonanceDriven);
  CHECK(classify_regime(2.0, 3) == Regime::ResonanceDriven);
  CHECK(classify_regime(2.5, 3) == Regime::Endpoint);
  CHECK(classify_regime(1.5, 3) == Regime::Unsupported);
  CHECK(classify_regime(3.0, 3) == Regime::Unsupported);
  CHECK(classify_regime(0.75, 1) == Regime::ResonanceDriven);
  CHECK(classify_regime(1.25, 1) == Regime::ResonanceIndependent);
  CHECK(classify_regime(1.0, 1) == Regime::Transition);
  CHECK(classify_regime(1.5, 1) == Regime::Endpoint);
  CHECK(classify_regime(0.5, 1) == Regime::Unsupported);
  CHECK_THROWS_AS(FractionalParams::make(1.0, 2), std::invalid_argument);
}

TEST_CASE("sin_pi argument reduction") {
  // near a zero of sin(3 pi / s) at s = 3/2 the reduced form stays accurate
  const double s = 1.5 + 1e-9;
  const double exact = std::sin(pi * (3.0 / s - 2.0));
  CHECK(sin_pi(3.0 / s) == Approx(exact).epsilon(1e-12));
  CHECK(sin_pi(0.5) == 1.0);
  CHECK(sin_pi(-0.5) == -1.0);
  CHECK(sin_pi(17.0) == Approx(0.0).margin(1e-14));
}

TEST_CASE("lambda_s constant") {
  // Gamma-quotient evaluations: Gamma(1/2) = sqrt(pi), Gamma(1) = 1
  CHECK(lambda_s_constant(2.0, 3) == Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
  // s = 1/2, d = 1: the Gamma(1/4) factors cancel
  CHECK(lambda_s_constant(0.5, 1) == Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK(lambda_s_constant(0.75, 1) > 0.0);
  CHECK_THROWS_AS(lambda_s_constant(3.0, 3), std::invalid_argument);  // Gamma pole at s = d
  CHECK_THROWS_AS(lambda_s_constant(1.25, 1), std::invalid_argument);
}

TEST_CASE("deficiency index") {
  CHECK(deficiency_index(2.0, 3) == 1);
  CHECK(deficiency_index(2.0, 1) == 2);
  CHECK(deficiency_index(2.0, 2) == 1);
  CHECK(deficiency_index(1.0, 3) == 0);  // s <= d/2 gives n = 0, C(d-1, d) = 0

  SECTION("piecewise constant with jumps exactly at s = d/2 + n") {
    for (int d : {1, 2, 3, 4}) {
      for (int n = 1; n <= 4; ++n) {
        const double edge = 0.5 * d + n;
        CHECK(deficiency_index(edge, d) == deficiency_index(edge - 1e-10, d));
        CHECK(deficiency_index(edge + 1e-10, d) > deficiency_index(edge, d));
      }
    }
  }
  SECTION("binomial rule against direct enumeration") {
    // J(s, d) = C(d+n-1, d) with n = ceil(s - d/2)
    auto binom = [](int n, int k) {
      double r = 1;
      for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
      return (std::uint64_t)std::llround(r);
    };
    CHECK(deficiency_index(4.9, 3) == binom(3 + 4 - 1, 3));
    CHECK(deficiency_index(3.2, 1) == binom(1 + 3 - 1, 1));
  }
}

TEST_CASE("theta boundary coefficient") {
  CHECK(theta(1.0, 1.0, 1) == 0.0);                       // -(1/pi) ln 1
  CHECK(theta(1.0, std::exp(-pi), 1) == Approx(1.0));     // -(1/pi)(-pi)
  // sin(3 pi/2) = -1 => Theta = -1/(4 pi), the classical 3D point interaction
  CHECK(theta(2.0, 1.0, 3) == Approx(-1.0 / (4.0 * pi)).epsilon(1e-14));
  CHECK_THROWS_AS(theta(2.0, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(theta(2.0, -1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(theta(3.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("bound state energy") {
  const FractionalParams p23 = FractionalParams::make(2.0, 3);
  SECTION("classical 3D value at alpha = -1") {
    auto E = bound_state_energy(PointInteraction::with_alpha(p23, -1.0));
    REQUIRE(E.has_value());
    CHECK(*E == Approx(-16.0 * pi * pi).epsilon(1e-14));
  }
  SECTION("no bound state for alpha >= 0 in 3D") {
    CHECK_FALSE(bound_state_energy(PointInteraction::with_alpha(p23, 1.0)).has_value());
    CHECK_FALSE(bound_state_energy(PointInteraction::with_alpha(p23, 0.0)).has_value());
  }
  SECTION("Friedrichs variant has purely essential spectrum") {
    CHECK_FALSE(bound_state_energy(PointInteraction::friedrichs(p23)).has_value());
  }
  SECTION("1D log branch") {
    const FractionalParams p11 = FractionalParams::make(1.0, 1);
    auto E = bound_state_energy(PointInteraction::with_alpha(p11, 0.0));
    REQUIRE(E.has_value());
    CHECK(*E == Approx(-1.0).epsilon(1e-15));
    // always present, any alpha
    CHECK(bound_state_energy(PointInteraction::with_alpha(p11, 5.0)).has_value());
  }
  SECTION("1D sign condition (s-1) alpha > 0") {
    const FractionalParams plo = FractionalParams::make(0.75, 1);
    const FractionalParams phi = FractionalParams::make(1.25, 1);
    CHECK(bound_state_energy(PointInteraction::with_alpha(plo, -1.0)).has_value());
    CHECK_FALSE(bound_state_energy(PointInteraction::with_alpha(plo, 1.0)).has_value());
    CHECK(bound_state_energy(PointInteraction::with_alpha(phi, 1.0)).has_value());
    CHECK_FALSE(bound_state_energy(PointInteraction::with_alpha(phi, -1.0)).has_value());
  }
}

TEST_CASE("pole consistency: theta(s, |E|, d) = alpha") {
  // the resolvent pole condition, 100 (s, alpha) pairs per regime
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto run = [&](auto draw) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      auto [s, d, alpha] = draw();
      auto E =
          bound_state_energy(PointInteraction::with_alpha(FractionalParams::make(s, d), alpha));
      REQUIRE(E.has_value());
      worst = std::max(worst,
                       std::abs(theta(s, std::abs(*E), d) - alpha) / (1.0 + std::abs(alpha)));
    }
    return worst;
  };
  const double w3 = run([&] {
    return std::tuple{1.55 + 0.9 * U(rng), 3, -5.0 * U(rng) - 1e-4};
  });
  CHECK(w3 <= 1e-12);
  const double w1lo = run([&] {
    return std::tuple{0.55 + 0.4 * U(rng), 1, -5.0 * U(rng) - 1e-4};
  });
  CHECK(w1lo <= 1e-12);
  const double w1hi = run([&] {
    return std::tuple{1.05 + 0.4 * U(rng), 1, 5.0 * U(rng) + 1e-4};
  });
  CHECK(w1hi <= 1e-12);
  const double w1log = run([&] {
    return std::tuple{1.0, 1, 6.0 * (U(rng) - 0.5)};
  });
  CHECK(w1log <= 1e-12);
}

TEST_CASE("bound state vanishes as alpha increases to 0 in 3D") {
  const FractionalParams p = FractionalParams::make(1.8, 3);
  double prev = -1e300;
  for (double a : {-1.0, -0.1, -0.01, -0.001, -1e-5}) {
    auto E = bound_state_energy(PointInteraction::with_alpha(p, a));
    REQUIRE(E.has_value());
    CHECK(*E > prev);
    CHECK(*E < 0.0);
    prev = *E;
  }
  CHECK(std::abs(prev) < 1e-6);
}
