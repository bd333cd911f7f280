#pragma once

// Constructive zero-energy resonant potentials: pick a strictly positive,
// rapidly decaying bump theta, set
//   psi = theta * G_{s,0},   V = -theta / psi,   phi = -u psi .
// Then ((-Delta)^{s/2} + V) psi = 0 by construction, psi decays like
// Lambda_s (int theta) |x|^{-(d-s)} (so it is not square-integrable), and
// phi is the Birman-Schwinger eigenvector at eigenvalue -1. The eigensolve
// is a check of this construction, never its definition.

#include <cmath>
#include <vector>

#include "fraclab/birman_schwinger.hpp"
#include "fraclab/core_math.hpp"
#include "fraclab/discretization.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

struct BumpSpec {
  enum class Kind { Gaussian, CompactBump };
  Kind kind = Kind::Gaussian;
  double width = 1.0;
  double amplitude = 1.0;

  // theta(x); radial profile in 3D. The Gaussian is normalized so that
  // amplitude == total mass; the compact bump is the standard C_c^infty
  // plateau exp(1 - 1/(1 - (x/w)^2)) scaled by amplitude.
  double value(double x, int d) const {
    const double r = std::abs(x);
    if (kind == Kind::Gaussian) {
      const double w2 = width * width;
      return amplitude * std::pow(2.0 * pi * w2, -0.5 * d) * std::exp(-0.5 * r * r / w2);
    }
    const double t = r / width;
    if (t >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - t * t));
  }

  // radius beyond which theta vanishes (or underflows to zero)
  double support_radius() const {
    return kind == Kind::CompactBump ? width : 38.0 * width;
  }

  double mass(int d) const {
    if (kind == Kind::Gaussian) return amplitude;
    if (d == 1) {
      QuadResult q = integrate_adaptive(
          [&](double x) { return value(x, 1); }, -width, width, 1e-14, 1e-13);
      return q.value;
    }
    QuadResult q = integrate_adaptive(
        [&](double r) { return 4.0 * pi * r * r * value(r, 3); }, 0.0, width, 1e-14, 1e-13);
    return q.value;
  }
};

// psi(x) = (theta * G_{s,0})(x) by adaptive quadrature against the exact
// zero-energy kernel; in 3D the angular average is already integrated out.
inline double resonant_psi(const BumpSpec& theta, double s, int d, double x) {
  const FractionalParams p = FractionalParams::make(s, d);
  if (!p.resonance_driven())
    throw std::invalid_argument("resonant_psi: requires the resonance-driven regime");
  const double lam = lambda_s_constant(s, d);
  const double R = theta.support_radius();
  const double r = std::abs(x);
  if (d == 3) {
    auto f = [&](double rp) {
      const double hi = std::pow(r + rp, s - 1.0);
      const double lo = std::pow(std::abs(r - rp), s - 1.0);
      // 2 pi Lambda/( (s-1) r r') * (hi - lo) * theta(r') r'^2
      return 2.0 * pi * lam / (s - 1.0) * (hi - lo) / r * rp * theta.value(rp, 3);
    };
    QuadResult q = integrate_adaptive_breakpoints(f, 0.0, R, {r}, 1e-14, 1e-12, 4000);
    return q.value;
  }
  auto f = [&](double y) {
    const double t = std::abs(x - y);
    if (t == 0.0) return 0.0;  // integrable singularity; a measure-zero point
    return lam * std::pow(t, s - 1.0) * theta.value(y, 1);
  };
  QuadResult q = integrate_adaptive_breakpoints(f, -R, R, {x}, 1e-14, 1e-12, 4000);
  return q.value;
}

struct BuiltResonance {
  Potential V;              // strictly negative, rapidly decaying
  std::vector<double> psi;  // resonance function on the grid nodes
  std::vector<double> phi;  // -u psi, the predicted BS eigenvector
  double theta_mass = 0.0;
  BumpSpec theta;
};

inline BuiltResonance build_resonant_potential(const BumpSpec& theta, double s, int d,
                                               const Grid& grid) {
  if (!(theta.width > 0.0) || !(theta.amplitude > 0.0))
    throw std::invalid_argument("build_resonant_potential: bump must be positive");
  if (grid.dimension != d)
    throw std::invalid_argument("build_resonant_potential: grid dimension mismatch");
  BuiltResonance out;
  out.theta = theta;
  out.theta_mass = theta.mass(d);
  auto psi_at = [theta, s, d](double x) { return resonant_psi(theta, s, d, x); };
  auto sampler = [theta, s, d, psi_at](double x) {
    const double th = theta.value(x, d);
    if (th == 0.0) return 0.0;
    const double ps = psi_at(x);
    // psi > 0 analytically; anything else is a loud quadrature failure
    if (!(ps > 1e-300))
      throw numeric_error("build_resonant_potential: psi <= 0, convolution quadrature failed");
    return -th / ps;
  };
  out.V = Potential::tabulate(sampler, grid, s);
  const int n = grid.size();
  out.psi.resize(n);
  out.phi.resize(n);
  for (int i = 0; i < n; ++i) {
    out.psi[i] = psi_at(grid.nodes[i]);
    if (!(out.psi[i] > 0.0))
      throw numeric_error("build_resonant_potential: psi <= 0 at a grid node");
    const double th = theta.value(grid.nodes[i], d);
    out.phi[i] = std::sqrt(std::max(th * out.psi[i], 0.0));  // = -u psi for V < 0
  }
  return out;
}

}  // namespace fraclab
