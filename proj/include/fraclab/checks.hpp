#pragma once

// Per-module invariant suites behind the CLI's --check mode and the
// check-all subcommand. Each check is small enough to run in seconds; the
// heavyweight verification lives in the test suite.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fraclab/birman_schwinger.hpp"
#include "fraclab/core_math.hpp"
#include "fraclab/discretization.hpp"
#include "fraclab/green.hpp"
#include "fraclab/point_interaction.hpp"
#include "fraclab/resonance_builder.hpp"
#include "fraclab/shrinking_limit.hpp"

namespace fraclab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<CheckResult> core_math_checks() {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, bool ok, double worst) {
    out.push_back({name, ok, "worst = " + format_g17(worst)});
  };
  // pole consistency: theta(s, |E_alpha|, d) == alpha
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 60; ++k) {
    const int pick = k % 3;
    double s, alpha;
    int d;
    if (pick == 0) {
      d = 3;
      s = 1.55 + 0.9 * U(rng);
      alpha = -3.0 * U(rng) - 1e-3;
    } else if (pick == 1) {
      d = 1;
      s = 0.55 + 0.4 * U(rng);
      alpha = -3.0 * U(rng) - 1e-3;
    } else {
      d = 1;
      s = 1.05 + 0.4 * U(rng);
      alpha = 3.0 * U(rng) + 1e-3;
    }
    auto E = bound_state_energy(PointInteraction::with_alpha(FractionalParams::make(s, d), alpha));
    if (!E) return {{"core_math/pole-consistency", false, "missing bound state"}};
    worst = std::max(worst,
                     std::abs(theta(s, std::abs(*E), d) - alpha) / (1.0 + std::abs(alpha)));
  }
  add("core_math/pole-consistency", worst <= 1e-12, worst);
  // monotone disappearance of the 3D bound state as alpha -> 0-
  double prev = -std::numeric_limits<double>::infinity();
  bool mono = true;
  for (double a : {-1.0, -0.1, -0.01, -0.001}) {
    auto E = bound_state_energy(PointInteraction::with_alpha(FractionalParams::make(2.0, 3), a));
    mono = mono && E && *E > prev && *E < 0.0;
    prev = *E;
  }
  out.push_back({"core_math/bound-state-vanishes", mono, ""});
  // deficiency index jumps exactly at s = d/2 + n
  bool jumps = true;
  for (int d : {1, 2, 3, 5}) {
    for (int n = 1; n <= 3; ++n) {
      const double edge = 0.5 * d + n;
      jumps = jumps && deficiency_index(edge, d) == deficiency_index(edge - 1e-9, d) &&
              deficiency_index(edge + 1e-9, d) > deficiency_index(edge, d);
    }
  }
  out.push_back({"core_math/deficiency-jumps", jumps, ""});
  return out;
}

inline std::vector<CheckResult> green_checks() {
  std::vector<CheckResult> out;
  // closed forms at s = 2
  double worst = 0.0;
  for (double r = 0.05; r <= 10.0; r += 0.5) {
    const double got = green(FractionalParams::make(2.0, 3), 1.0, r).value;
    const double exact = std::exp(-r) / (4.0 * pi * r);
    worst = std::max(worst, std::abs(got - exact) / exact);
    const double got1 = green(FractionalParams::make(2.0, 1), 1.0, r).value;
    const double exact1 = 0.5 * std::exp(-r);
    worst = std::max(worst, std::abs(got1 - exact1) / exact1);
  }
  out.push_back({"green/closed-form-s2", worst <= 1e-6, "worst = " + format_g17(worst)});
  // scaling identity sample
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int d = k % 2 ? 1 : 3;
    const double s = d == 3 ? 1.6 + 0.8 * U(rng) : 0.55 + 0.4 * U(rng);
    const double lambda = 0.1 + 2.0 * U(rng);
    const double eps = 0.1 + 1.9 * U(rng);
    const double x = 0.05 + 4.0 * U(rng);
    const FractionalParams p = FractionalParams::make(s, d);
    const double lhs = green(p, lambda * std::pow(eps, s), x).value;
    const double rhs = std::pow(eps, d - s) * green(p, lambda, eps * x).value;
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  out.push_back({"green/scaling-identity", worst <= 1e-8, "worst = " + format_g17(worst)});
  // positivity in the 3D window
  bool positive = true;
  for (double s : {1.7, 2.0, 2.4})
    for (double lambda : {0.0, 0.5, 1.0, 4.0})
      for (double r : {0.05, 0.5, 2.0, 8.0})
        positive = positive && green(FractionalParams::make(s, 3), lambda, r).value > 0.0;
  out.push_back({"green/positivity-3d", positive, ""});
  // J continuous through x = 0
  worst = 0.0;
  for (double x : {1e-2, 1e-3, 1e-4}) {
    const double j = green_detail::j_value(1.8, 3, 1.0, x);
    const double j0 = green_detail::j_origin_quadrature(1.8, 3, 1.0);
    worst = std::max(worst, std::abs(j - j0));
  }
  out.push_back({"green/J-continuous-at-0", worst <= 2e-3, "worst = " + format_g17(worst)});
  return out;
}

inline std::vector<CheckResult> discretization_checks() {
  std::vector<CheckResult> out;
  Grid g3 = make_grid(3, 10.0, 120, 2.0);
  double sum = 0.0;
  for (double w : g3.weights) sum += w;
  const double vol = 4.0 / 3.0 * pi * 1000.0;
  out.push_back({"discretization/3d-weight-sum", std::abs(sum - vol) <= 1e-6 * vol,
                 format_g17(sum)});
  // angular average against the brute-force t-integral
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(0.1, 5.0);
  double worst = 0.0;
  const FractionalParams p = FractionalParams::make(1.8, 3);
  for (int k = 0; k < 10; ++k) {
    const double r = U(rng), rp = U(rng);
    QuadResult brute = integrate_adaptive(
        [&](double t) {
          const double rho = std::sqrt(r * r + rp * rp - 2.0 * r * rp * t);
          if (rho == 0.0) return 0.0;
          return 2.0 * pi * green_zero(p, rho);
        },
        -1.0, 1.0, 1e-13, 1e-12);
    const double got = angular_average_green(1.8, 0.0, r, rp);
    worst = std::max(worst, std::abs(got - brute.value) / std::abs(brute.value));
  }
  out.push_back({"discretization/angular-average", worst <= 1e-8, "worst = " + format_g17(worst)});
  // BS eigenvalue reality + exact symmetry for sign-definite V
  Grid g1 = make_grid(1, 20.0, 100, 2.0);
  Potential V = Potential::tabulate(
      [](double x) { return -std::exp(-0.5 * x * x); }, g1, 0.75);
  KernelMatrix B = assemble_bs_matrix(V, 0.75, 0.0, g1);
  bool sym = (B.m - B.m.transpose()).norm() == 0.0;
  out.push_back({"discretization/sign-definite-symmetry", sym, ""});
  bool real_ok = true;
  try {
    real_spectrum(B);
  } catch (const numeric_error&) {
    real_ok = false;
  }
  out.push_back({"discretization/eigenvalue-reality", real_ok, ""});
  return out;
}

inline std::vector<CheckResult> birman_schwinger_checks() {
  std::vector<CheckResult> out;
  Grid g = make_grid(1, 40.0, 140, 2.5);
  BuiltResonance br = build_resonant_potential(BumpSpec{}, 0.75, 1, g);
  EigenPair mu = eigenpair_nearest(assemble_bs_matrix(br.V, 0.75, 0.0, g), -1.0);
  Potential V = br.V.rescaled(1.0 / std::abs(mu.value));
  ResonanceReport rep = detect_resonance(V, 0.75, g);
  out.push_back({"birman_schwinger/detects-built-resonance", rep.is_resonant && rep.is_simple,
                 "mu* = " + format_g17(rep.nearest_eigenvalue)});
  ResonanceFunction rf = resonance_function(rep, V, 0.75, g);
  double ivpsi = 0.0;
  for (int i = 0; i < g.size(); ++i) ivpsi += g.weights[i] * V.values()[i] * rf.psi[i];
  const double rel = std::abs(rep.coupling + ivpsi) / std::abs(rep.coupling);
  out.push_back({"birman_schwinger/coupling-identity", rel <= 1e-3,
                 "relative mismatch = " + format_g17(rel)});
  // distributional identity: v phi + V psi = 0 on the calibrated grid
  double num = 0.0, den = 0.0;
  auto v = V.v_values();
  for (int i = 0; i < g.size(); ++i) {
    const double t = v[i] * rep.phi[i] + V.values()[i] * rf.psi[i];
    num += g.weights[i] * t * t;
    den += g.weights[i] * v[i] * rep.phi[i] * v[i] * rep.phi[i];
  }
  out.push_back({"birman_schwinger/distributional-identity",
                 std::sqrt(num) <= 1e-6 * std::sqrt(den),
                 "residual = " + format_g17(std::sqrt(num / std::max(den, 1e-300)))});
  return out;
}

inline std::vector<CheckResult> resonance_builder_checks() {
  std::vector<CheckResult> out;
  double worst = 0.0;
  for (double r : {0.1, 1.0, 5.0, 20.0}) {
    const double got = resonant_psi(BumpSpec{}, 2.0, 3, r);
    const double exact = std::erf(r / std::sqrt(2.0)) / (4.0 * pi * r);
    worst = std::max(worst, std::abs(got - exact) / exact);
  }
  out.push_back({"resonance_builder/gaussian-erf-anchor", worst <= 1e-5,
                 "worst = " + format_g17(worst)});
  const double lam = lambda_s_constant(1.8, 3);
  const double tail = resonant_psi(BumpSpec{}, 1.8, 3, 35.0) * std::pow(35.0, 3.0 - 1.8);
  out.push_back({"resonance_builder/psi-tail-coefficient",
                 std::abs(tail - lam) <= 0.02 * lam, format_g17(tail / lam)});
  return out;
}

inline std::vector<CheckResult> point_interaction_checks() {
  std::vector<CheckResult> out;
  Grid g = make_grid(1, 20.0, 120, 2.0);
  const FractionalParams p = FractionalParams::make(0.75, 1);
  KernelAssembler ka(0.75, 1, 1.0, g);
  ResolventMatrix free = free_resolvent(ka, 1.0);
  ResolventMatrix fried = point_resolvent(PointInteraction::friedrichs(p), 1.0, ka);
  out.push_back({"point_interaction/friedrichs-equals-free",
                 (free.matrix.m - fried.matrix.m).norm() == 0.0, ""});
  const double alpha = -0.8;
  ResolventMatrix pt = point_resolvent(PointInteraction::with_alpha(p, alpha), 1.0, ka);
  const double gap = (pt.matrix.m - free.matrix.m).norm();
  const double predicted = rank_one_gap(0.75, 1, alpha, 1.0, ka);
  out.push_back({"point_interaction/rank-one-gap",
                 std::abs(gap - predicted) <= 1e-12 * predicted,
                 "gap = " + format_g17(gap)});
  return out;
}

inline std::vector<CheckResult> shrinking_limit_checks() {
  std::vector<CheckResult> out;
  // Konno-Kuroda == direct inversion on random data
  std::mt19937 rng(5);
  std::normal_distribution<double> N(0.0, 1.0);
  const int n = 60;
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = N(rng);
  Eigen::MatrixXd A = X * X.transpose() / n + 0.1 * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd V(n);
  for (int i = 0; i < n; ++i) V[i] = N(rng);
  const double lambda = 0.9;
  Eigen::MatrixXd R = (A + lambda * Eigen::MatrixXd::Identity(n, n)).inverse();
  Eigen::VectorXd v = V.cwiseAbs().cwiseSqrt(), u(n);
  for (int i = 0; i < n; ++i) u[i] = V[i] >= 0.0 ? v[i] : -v[i];
  Eigen::MatrixXd mid = Eigen::MatrixXd::Identity(n, n) + u.asDiagonal() * R * v.asDiagonal();
  Eigen::MatrixXd kk = R - R * v.asDiagonal() * mid.inverse() * u.asDiagonal() * R;
  Eigen::MatrixXd direct =
      (A + Eigen::MatrixXd(V.asDiagonal()) + lambda * Eigen::MatrixXd::Identity(n, n)).inverse();
  const double rel = (kk - direct).norm() / direct.norm();
  out.push_back({"shrinking_limit/konno-kuroda-identity", rel <= 1e-10,
                 "rel = " + format_g17(rel)});
  // A/B/C reconstruction at one eps
  Grid outer = make_grid(1, 30.0, 140, 3.0);
  Potential W = Potential::tabulate(
      [](double x) { return -0.25 * std::exp(-0.5 * x * x / 0.0225) / std::sqrt(2.0 * pi * 0.0225); },
      outer, 4.0 / 3.0);
  ScalingScheme sch = ScalingScheme::independent(1.0);
  KernelAssembler ka(4.0 / 3.0, 1, 1.0, outer);
  Potential Veps = scale_potential(W, 0.2, sch, 4.0 / 3.0, outer);
  ResolventMatrix kk_eps = konno_kuroda_resolvent(Veps, 4.0 / 3.0, 1.0, ka);
  AbcTriple abc = abc_operators(W, 0.2, 4.0 / 3.0, 1.0, sch, ka);
  ResolventMatrix freeR = free_resolvent(ka, 1.0);
  const double res = (abc_reconstruction(abc, freeR.matrix.m) - kk_eps.matrix.m).norm() /
                     freeR.matrix.m.norm();
  out.push_back({"shrinking_limit/abc-reconstruction", res <= 1e-8,
                 "residual = " + format_g17(res)});
  // exceptional lambda == bound-state energy
  const double lstar = *exceptional_lambda(W, 1.0, 4.0 / 3.0);
  const double alpha = -1.0 / W.integral();
  const double E = *bound_state_energy(
      PointInteraction::with_alpha(FractionalParams::make(4.0 / 3.0, 1), alpha));
  out.push_back({"shrinking_limit/exceptional-lambda",
                 std::abs(lstar - std::abs(E)) <= 1e-12 * std::abs(E),
                 "lambda* = " + format_g17(lstar)});
  return out;
}

inline std::vector<CheckResult> all_checks() {
  std::vector<CheckResult> out;
  for (auto suite : {core_math_checks, green_checks, discretization_checks,
                     birman_schwinger_checks, resonance_builder_checks,
                     point_interaction_checks, shrinking_limit_checks}) {
    auto part = suite();
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace fraclab
