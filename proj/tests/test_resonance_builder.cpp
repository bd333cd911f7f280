#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fraclab/resonance_builder.hpp"

using namespace fraclab;

TEST_CASE("bump specs") {
  BumpSpec gauss;
  CHECK(gauss.mass(3) == Approx(1.0));
  CHECK(gauss.mass(1) == Approx(1.0));
  CHECK(gauss.value(0.0, 3) == Approx(std::pow(2.0 * pi, -1.5)).epsilon(1e-14));

  BumpSpec bump;
  bump.kind = BumpSpec::Kind::CompactBump;
  bump.width = 2.0;
  CHECK(bump.value(2.0, 1) == 0.0);
  CHECK(bump.value(2.5, 1) == 0.0);
  CHECK(bump.value(0.0, 1) == Approx(1.0));  // exp(1 - 1) at the center
  CHECK(bump.mass(1) > 0.0);
  CHECK(bump.mass(3) > 0.0);
}

TEST_CASE("s = 2 Gaussian anchor: psi = erf(r/sqrt(2))/(4 pi r)") {
  // classical Newtonian potential of a unit-mass Gaussian
  BumpSpec th;
  for (double r = 0.1; r <= 20.0; r *= 1.7) {
    const double exact = std::erf(r / std::sqrt(2.0)) / (4.0 * pi * r);
    CHECK(resonant_psi(th, 2.0, 3, r) == Approx(exact).epsilon(1e-5));
  }
}

TEST_CASE("psi tail carries the Lambda_s * mass coefficient") {
  for (auto [s, d] : {std::pair{1.8, 3}, {2.2, 3}, {0.75, 1}}) {
    const double lam = lambda_s_constant(s, d);
    BumpSpec th;
    const double r = 34.0;
    CHECK(resonant_psi(th, s, d, r) * std::pow(r, double(d) - s) ==
          Approx(lam * th.mass(d)).epsilon(0.02));
  }
}

TEST_CASE("built potential: negativity, norms, eigenpair") {
  const double s = 1.8;
  Grid g = make_grid(3, 40.0, 160, 2.5);
  BuiltResonance br = build_resonant_potential(BumpSpec{}, s, 3, g);

  SECTION("V < 0 on the support of theta, finite norms") {
    for (int i = 0; i < g.size(); ++i) CHECK(br.V.values()[i] <= 0.0);
    CHECK(std::isfinite(br.V.norms().l1));
    CHECK(std::isfinite(br.V.norms().weighted_l1));
    REQUIRE(br.V.norms().rollnick.has_value());
    CHECK(std::isfinite(*br.V.norms().rollnick));
  }
  SECTION("V psi = -theta pointwise, so int V psi = -int theta") {
    double ivpsi = 0.0, mass = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      ivpsi += g.weights[i] * br.V.values()[i] * br.psi[i];
      mass += g.weights[i] * br.theta.value(g.nodes[i], 3);
    }
    CHECK(ivpsi == Approx(-mass).epsilon(1e-6));
    CHECK(mass == Approx(br.theta_mass).epsilon(1e-3));  // grid quadrature of theta
  }
  SECTION("B0 phi = -phi residual halves under refinement") {
    auto residual = [&](const Grid& grid) {
      BuiltResonance b = build_resonant_potential(BumpSpec{}, s, 3, grid);
      KernelMatrix B = assemble_bs_matrix(b.V, s, 0.0, grid);
      Eigen::VectorXd phi(grid.size());
      for (int i = 0; i < grid.size(); ++i)
        phi[i] = b.phi[i] * std::sqrt(grid.weights[i]);
      return (B.m * phi + phi).norm() / phi.norm();
    };
    const double r1 = residual(make_grid(3, 40.0, 100, 2.5));
    const double r2 = residual(make_grid(3, 40.0, 200, 2.5));
    CHECK(r2 <= r1 / 2.0);
  }
}

TEST_CASE("psi is not square integrable: discrete norm grows with the cutoff") {
  // || psi ||_{L^2(|x| < R)} ~ R^{s - d/2}; fitted exponent within 10%
  for (auto [s, d] : {std::pair{1.8, 3}, {0.75, 1}}) {
    BumpSpec th;
    auto norm_at = [&](double R) {
      Grid g = make_grid(d, R, 200, 2.0);
      double acc = 0.0;
      for (int i = 0; i < g.size(); ++i) {
        const double ps = resonant_psi(th, s, d, g.nodes[i]);
        acc += g.weights[i] * ps * ps;
      }
      return std::sqrt(acc);
    };
    const double n1 = norm_at(40.0), n2 = norm_at(80.0), n4 = norm_at(160.0);
    CHECK(n2 > n1);
    CHECK(n4 > n2);
    const double expo = std::log(n4 / n1) / std::log(4.0);
    CHECK(expo == Approx(s - 0.5 * d).epsilon(0.10));
  }
}

TEST_CASE("compact bump builder also lands on the resonance") {
  BumpSpec th;
  th.kind = BumpSpec::Kind::CompactBump;
  th.width = 2.0;
  Grid g = make_grid(1, 40.0, 160, 2.5);
  BuiltResonance br = build_resonant_potential(th, 0.75, 1, g);
  ResonanceReport rep = detect_resonance(br.V, 0.75, g);
  CHECK(rep.nearest_eigenvalue == Approx(-1.0).margin(1e-2));
  CHECK(rep.is_resonant);
}

TEST_CASE("regime preconditions") {
  Grid g = make_grid(1, 20.0, 60, 2.0);
  CHECK_THROWS_AS(build_resonant_potential(BumpSpec{}, 1.25, 1, g), std::invalid_argument);
  CHECK_THROWS_AS(resonant_psi(BumpSpec{}, 1.25, 1, 1.0), std::invalid_argument);
  Grid g3 = make_grid(3, 20.0, 60, 2.0);
  CHECK_THROWS_AS(build_resonant_potential(BumpSpec{}, 0.75, 3, g3), std::invalid_argument);
}
