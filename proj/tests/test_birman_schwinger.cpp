#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fraclab/birman_schwinger.hpp"
#include "fraclab/resonance_builder.hpp"

using namespace fraclab;

TEST_CASE("Rollnick-type norm") {
  SECTION("V == 0") {
    Grid g = make_grid(1, 5.0, 40, 1.5);
    Potential z = Potential::tabulate([](double) { return 0.0; }, g, 0.75);
    CHECK(rollnick_norm(z, 0.75, 1) == 0.0);
  }
  SECTION("indicator of [-1/2, 1/2] at s = 3/4 against a 2D Simpson oracle") {
    // oracle: composite Simpson on [0,1]^2 (translated square), >= 10^6 points
    const double a = 0.5;  // exponent 2(1-s) = 1/2
    const int m = 1024;    // (m+1)^2 > 10^6 evaluation points
    const double h = 1.0 / m;
    auto f = [&](double x, double y) {
      const double t = std::abs(x - y);
      return t == 0.0 ? 0.0 : std::pow(t, -a);
    };
    double total = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double wi = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      double row = 0.0;
      for (int j = 0; j <= m; ++j) {
        const double wj = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        row += wj * f(i * h, j * h);
      }
      total += wi * row;
    }
    const double oracle = std::sqrt(total * h * h / 9.0);
    // closed form for comparison: iint |x-y|^{-1/2} over the unit square = 8/3
    CHECK(oracle == Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-3));

    Grid g = make_grid(1, 0.5, 256, 1.0);
    Potential ind = Potential::tabulate([](double) { return 1.0; }, g, 0.75);
    CHECK(rollnick_norm(ind, 0.75, 1) == Approx(oracle).epsilon(1e-3));
    CHECK(rollnick_norm(ind, 0.75, 1) == Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-6));
  }
  SECTION("exact scaling ||V(./eps)||_R^2 = eps^{2s} ||V||_R^2") {
    const double s = 0.8, eps = 2.0;
    Grid g = make_grid(1, 30.0, 200, 2.0);
    auto f = [](double x) { return -std::exp(-0.5 * x * x); };
    Potential V = Potential::tabulate(f, g, s);
    Grid g2 = g.scaled(eps);
    Potential Vs = Potential::tabulate([f, eps](double x) { return f(x / eps); }, g2, s);
    const double r1 = rollnick_norm(V, s, 1);
    const double r2 = rollnick_norm(Vs, s, 1);
    CHECK(r2 * r2 == Approx(std::pow(eps, 2.0 * s) * r1 * r1).epsilon(1e-6));
  }
  SECTION("3D s = 2 log branch is finite and scales") {
    Grid g = make_grid(3, 20.0, 120, 2.0);
    Potential V = Potential::tabulate([](double r) { return -std::exp(-r * r); }, g, 2.0);
    REQUIRE(V.norms().rollnick.has_value());
    CHECK(std::isfinite(*V.norms().rollnick));
  }
  SECTION("outside (d/2, d) the class is undefined") {
    Grid g = make_grid(1, 5.0, 40, 1.5);
    Potential V = Potential::tabulate([](double x) { return -std::exp(-x * x); }, g, 1.25);
    CHECK_FALSE(V.norms().rollnick.has_value());
    CHECK_THROWS_AS(rollnick_norm(V, 1.25, 1), std::invalid_argument);
  }
}

TEST_CASE("bs_spectrum basics") {
  Grid g = make_grid(1, 25.0, 120, 2.0);
  SECTION("V == 0: all zeros") {
    Potential z = Potential::tabulate([](double) { return 0.0; }, g, 0.75);
    for (double mu : bs_spectrum(z, 0.75, 0.0, g)) CHECK(mu == 0.0);
  }
  SECTION("attractive V: most negative eigenvalue strictly negative at lambda = 0") {
    Potential V = Potential::tabulate(
        [](double x) { return -std::exp(-0.5 * x * x); }, g, 0.75);
    auto spec = bs_spectrum(V, 0.75, 0.0, g);
    CHECK(spec.front() < 0.0);
  }
}

TEST_CASE("potential norms") {
  Grid g = make_grid(1, 30.0, 200, 2.0);
  Potential V = Potential::tabulate(
      [](double x) { return -std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi); }, g, 0.75);
  CHECK(V.norms().l1 == Approx(1.0).epsilon(1e-4));
  CHECK(V.integral() == Approx(-1.0).epsilon(1e-4));
  CHECK(V.norms().weighted_l1 > V.norms().l1);  // <x>^{2s-1} >= 1
  REQUIRE(V.norms().rollnick.has_value());
}

TEST_CASE("resonance detection") {
  const double s = 0.75;
  Grid g = make_grid(1, 40.0, 160, 2.5);
  BuiltResonance br = build_resonant_potential(BumpSpec{}, s, 1, g);

  SECTION("built potential is resonant and simple") {
    ResonanceReport rep = detect_resonance(br.V, s, g);
    CHECK(rep.is_resonant);
    CHECK(rep.is_simple);
    CHECK(rep.nearest_eigenvalue == Approx(-1.0).margin(5e-3));
    CHECK(rep.coupling > 0.0);
    CHECK(rep.psi_asymptotic_coefficient ==
          Approx(lambda_s_constant(s, 1) * rep.coupling).epsilon(1e-14));
    // normalization <phi~, phi> = -1
    double q = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      const double sgn = br.V.values()[i] < 0.0 ? -1.0 : 1.0;
      q += sgn * g.weights[i] * rep.phi[i] * rep.phi[i];
    }
    CHECK(q == Approx(-1.0).epsilon(1e-12));
  }
  SECTION("half coupling: not resonant, eigenvalue near -1/2") {
    ResonanceReport rep = detect_resonance(br.V.rescaled(0.5), s, g);
    CHECK_FALSE(rep.is_resonant);
    CHECK(rep.nearest_eigenvalue == Approx(-0.5).margin(5e-2));
  }
  SECTION("V == 0") {
    Potential z = Potential::tabulate([](double) { return 0.0; }, g, s);
    ResonanceReport rep = detect_resonance(z, s, g, 1e-6);
    CHECK_FALSE(rep.is_resonant);
    CHECK(rep.nearest_eigenvalue == 0.0);
  }
  SECTION("tol must be positive") {
    CHECK_THROWS_AS(detect_resonance(br.V, s, g, -1.0), std::invalid_argument);
  }
}

TEST_CASE("zero coupling means eigenvalue, not resonance") {
  // for an even potential the odd-sector eigenvector has <v, phi> = 0;
  // rescale V so that odd eigenvalue sits at -1
  const double s = 0.75;
  Grid g = make_grid(1, 40.0, 160, 2.5);
  BuiltResonance br = build_resonant_potential(BumpSpec{}, s, 1, g);
  auto spec = bs_spectrum(br.V, s, 0.0, g);
  const double odd = spec[1];  // second-largest magnitude: odd sector
  REQUIRE(odd < 0.0);
  Potential V = br.V.rescaled(1.0 / std::abs(odd));
  ResonanceReport rep = detect_resonance(V, s, g);
  CHECK(std::abs(rep.nearest_eigenvalue + 1.0) < 5e-3);
  CHECK(std::abs(rep.coupling) <= 10.0 * rep.tol_coupling);
  CHECK_FALSE(rep.is_resonant);  // psi in L^2: zero-energy eigenvalue instead

  // the corresponding psi is square-integrable: discrete L2 norm stabilizes
  // under extension of the cutoff
  ResonanceFunction rf = resonance_function(rep, V, s, g);
  Grid g2 = make_grid(1, 80.0, 320, 2.5);
  Potential V2 = V.retabulated(g2);
  ResonanceReport rep2 = detect_resonance(V2, s, g2);
  ResonanceFunction rf2 = resonance_function(rep2, V2, s, g2);
  CHECK(rf2.psi_l2 == Approx(rf.psi_l2).epsilon(0.05));
}

TEST_CASE("resonance function identities") {
  const double s = 1.8;
  Grid g = make_grid(3, 40.0, 160, 2.5);
  BuiltResonance br = build_resonant_potential(BumpSpec{}, s, 3, g);
  // calibration puts the discrete eigenvalue exactly at -1
  EigenPair mu = eigenpair_nearest(assemble_bs_matrix(br.V, s, 0.0, g), -1.0);
  Potential V = br.V.rescaled(1.0 / std::abs(mu.value));
  ResonanceReport rep = detect_resonance(V, s, g);
  REQUIRE(rep.is_resonant);
  ResonanceFunction rf = resonance_function(rep, V, s, g);

  SECTION("<v, phi> = -int V psi") {
    double ivpsi = 0.0;
    for (int i = 0; i < g.size(); ++i) ivpsi += g.weights[i] * V.values()[i] * rf.psi[i];
    CHECK(-ivpsi == Approx(rep.coupling).epsilon(1e-3));
  }
  SECTION("distributional identity v phi + V psi = 0 to roundoff") {
    auto v = V.v_values();
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      const double t = v[i] * rep.phi[i] + V.values()[i] * rf.psi[i];
      num += g.weights[i] * t * t;
      den += g.weights[i] * v[i] * v[i] * rep.phi[i] * rep.phi[i];
    }
    CHECK(std::sqrt(num) <= 1e-6 * std::sqrt(den));
  }
  SECTION("psi matches the asymptotic coefficient at the boundary") {
    // psi(x) |x|^{d-s} -> Lambda_s <v, phi> toward the cutoff
    const int i = g.size() - 5;
    const double tail = rf.psi[i] * std::pow(g.nodes[i], 3.0 - s);
    CHECK(tail == Approx(rf.asymptotic_coefficient).epsilon(0.02));
  }
  SECTION("residual after peeling the leading decay is square integrable") {
    CHECK(rf.residual_l2 < 0.5 * rf.psi_l2);
  }
}

TEST_CASE("pure geometric scaling preserves the zero-energy BS matrix") {
  // entries of B_0(V_eps) on grid H equal those of B_0(V) on grid H/eps
  const double s = 0.75, eps = 0.35;
  Grid g = make_grid(1, 30.0, 100, 2.0);
  auto f = [](double x) { return -1.2 * std::exp(-0.5 * x * x); };
  Potential V = Potential::tabulate(f, g.scaled(1.0 / eps), s);
  Potential Veps = Potential::tabulate(
      [f, eps, s](double x) { return f(x / eps) / std::pow(eps, s); }, g, s);
  KernelMatrix inner = assemble_bs_matrix(V, s, 0.0, g.scaled(1.0 / eps));
  KernelMatrix outer = assemble_bs_matrix(Veps, s, 0.0, g);
  CHECK((inner.m - outer.m).norm() <= 1e-12 * inner.m.norm());
  auto si = real_spectrum(inner);
  auto so = real_spectrum(outer);
  for (int i = 0; i < 6; ++i) CHECK(si[i] == Approx(so[i]).epsilon(1e-10));
}
