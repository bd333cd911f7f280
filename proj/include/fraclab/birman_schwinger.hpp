#pragma once

// Potentials and the Birman-Schwinger operator B_lambda = u G_{s,lambda} v
// with v = |V|^{1/2}, u = |V|^{1/2} sign V. Zero-energy resonance detection:
// B_0 phi = -phi with nonzero coupling <v, phi> signals a resonance; zero
// coupling means a genuine zero-energy eigenvalue instead.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fraclab/core_math.hpp"
#include "fraclab/discretization.hpp"

namespace fraclab {

struct PotentialNorms {
  double l1 = 0.0;                    // int |V|
  double weighted_l1 = 0.0;           // int |V(x)| <x>^{2s-d} dx
  std::optional<double> rollnick;     // ||V||_{R_{s,d}}, defined for s in (d/2, d)
};

class Potential;
double rollnick_norm(const Potential& V, double s, int d);

// A tabulated real potential. The sampler (when present) lets the same
// potential be re-tabulated on other grids, which the shrinking-potential
// machinery relies on.
class Potential {
 public:
  Potential() = default;

  static Potential tabulate(std::function<double(double)> sampler, const Grid& grid, double s) {
    Potential out;
    out.sampler_ = std::move(sampler);
    out.grid_ = grid;
    out.s_ = s;
    out.values_.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) out.values_[i] = out.sampler_(grid.nodes[i]);
    out.compute_norms();
    return out;
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const PotentialNorms& norms() const { return norms_; }
  double s() const { return s_; }
  int dimension() const { return grid_.dimension; }
  bool has_sampler() const { return static_cast<bool>(sampler_); }
  double sample(double x) const { return sampler_(x); }
  const std::function<double(double)>& sampler() const { return sampler_; }

  std::vector<double> v_values() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(std::abs(values_[i]));
    return out;
  }
  std::vector<double> u_values() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double r = std::sqrt(std::abs(values_[i]));
      out[i] = values_[i] < 0.0 ? -r : (values_[i] > 0.0 ? r : 0.0);
    }
    return out;
  }

  double integral() const {  // signed int V
    double acc = 0.0;
    for (int i = 0; i < grid_.size(); ++i) acc += grid_.weights[i] * values_[i];
    return acc;
  }

  Potential rescaled(double c) const {  // c * V on the same grid
    Potential out = *this;
    if (sampler_) {
      auto f = sampler_;
      out.sampler_ = [f, c](double x) { return c * f(x); };
    }
    for (auto& v : out.values_) v *= c;
    out.compute_norms();
    return out;
  }

  Potential retabulated(const Grid& grid) const {
    if (!sampler_) throw std::invalid_argument("Potential::retabulated: no sampler available");
    return tabulate(sampler_, grid, s_);
  }

 private:
  void compute_norms() {
    norms_.l1 = 0.0;
    norms_.weighted_l1 = 0.0;
    const int d = grid_.dimension;
    for (int i = 0; i < grid_.size(); ++i) {
      const double av = std::abs(values_[i]);
      const double x = grid_.nodes[i];
      norms_.l1 += grid_.weights[i] * av;
      norms_.weighted_l1 += grid_.weights[i] * av * std::pow(1.0 + x * x, s_ - 0.5 * d);
    }
    if (s_ > 0.5 * d && s_ < double(d))
      norms_.rollnick = rollnick_norm(*this, s_, d);
    else
      norms_.rollnick = std::nullopt;
  }

  std::function<double(double)> sampler_;
  Grid grid_;
  std::vector<double> values_;
  PotentialNorms norms_;
  double s_ = 0.0;
};

// ||V||_{R_{s,d}} = ( iint |V(x)| |V(y)| / |x-y|^{2(d-s)} dx dy )^{1/2}.
// The inner variable is integrated exactly per cell (power antiderivatives;
// 3D via the radial rho-substitution), the outer by the grid rule.
inline double rollnick_norm(const Potential& V, double s, int d) {
  if (!(s > 0.5 * d && s < double(d)))
    throw std::invalid_argument("rollnick_norm: defined for s in (d/2, d)");
  const Grid& g = V.grid();
  const int n = g.size();
  const auto& vals = V.values();
  double total = 0.0;
  if (d == 1) {
    const double q = 2.0 * s - 2.0;  // exponent of |x-y|^{-2(1-s)}
    for (int i = 0; i < n; ++i) {
      if (vals[i] == 0.0) continue;
      double inner = 0.0;
      for (int j = 0; j < n; ++j) {
        if (vals[j] == 0.0) continue;
        inner += std::abs(vals[j]) * disc_detail::power_cell_integral_1d(
                                         g.nodes[i], g.boundaries[j], g.boundaries[j + 1], q);
      }
      total += g.weights[i] * std::abs(vals[i]) * inner;
    }
  } else {
    const double q = 2.0 * s - 4.0;  // reduced-kernel exponent (see below)
    for (int i = 0; i < n; ++i) {
      if (vals[i] == 0.0) continue;
      const double r = g.nodes[i];
      double inner = 0.0;
      for (int j = 0; j < n; ++j) {
        if (vals[j] == 0.0) continue;
        const double a = g.boundaries[j], b = g.boundaries[j + 1];
        double cell;
        if (s != 2.0) {
          cell = (2.0 * pi / (q * r)) * (disc_detail::moment_plus(r, a, b, q) -
                                         disc_detail::moment_minus(r, a, b, q));
        } else {
          // s = 2: int rho^{-1} drho gives logs
          auto Fp = [&](double t) {
            const double u = r + t;
            return 0.5 * (t * t - r * r) * std::log(u) - 0.25 * t * t + 0.5 * r * t;
          };
          auto Fm = [&](double t) {
            const double u = std::abs(r - t);
            if (u == 0.0) return -0.25 * t * t + 0.5 * r * t;
            return 0.5 * (t * t - r * r) * std::log(u) - 0.25 * t * t - 0.5 * r * t;
          };
          cell = (2.0 * pi / r) * ((Fp(b) - Fp(a)) - (Fm(b) - Fm(a)));
        }
        inner += std::abs(vals[j]) * cell;
      }
      total += g.weights[i] * std::abs(vals[i]) * inner;
    }
  }
  if (!std::isfinite(total) || total > 1e150)
    throw numeric_error("rollnick_norm: divergent double integral, potential not in R_{s,d}");
  return std::sqrt(total);
}

// Discretized Birman-Schwinger matrix u G_{s,lambda} v in the weight-folded
// convention: M_ij = sqrt(w_i) u_i Ktilde_ij v_j sqrt(w_j). Similar to the
// manifestly symmetric G^{1/2} V G^{1/2}, so eigenvalues are real.
inline KernelMatrix assemble_bs_matrix(const Potential& V, const KernelAssembler& ka) {
  return fold_sandwich(ka, V.u_values(), V.v_values());
}

inline KernelMatrix assemble_bs_matrix(const Potential& V, double s, double lambda,
                                       const Grid& grid) {
  if (lambda < 0.0) throw std::invalid_argument("assemble_bs_matrix: lambda must be >= 0");
  if (lambda == 0.0) {
    if (!(s > 0.5 * grid.dimension && s < double(grid.dimension)) || !V.norms().rollnick)
      throw numeric_error(
          "assemble_bs_matrix: zero-energy kernel is not square-integrable against V "
          "(potential must lie in the Rollnick-type class R_{s,d})");
  }
  KernelAssembler ka(s, grid.dimension, lambda, grid);
  return assemble_bs_matrix(V, ka);
}

// Real eigenvalues of the BS matrix, descending by magnitude.
inline std::vector<double> bs_spectrum(const Potential& V, double s, double lambda,
                                       const Grid& grid) {
  return real_spectrum(assemble_bs_matrix(V, s, lambda, grid));
}

struct ResonanceReport {
  double nearest_eigenvalue = 0.0;  // eigenvalue of B_0 closest to -1
  double second_eigenvalue = 0.0;   // next closest to -1
  Eigen::VectorXd phi;              // node values, normalized <phi~, phi> = -1
  double coupling = 0.0;            // <v, phi>
  bool is_resonant = false;
  bool is_simple = false;
  double psi_asymptotic_coefficient = 0.0;  // Lambda_s <v, phi>
  double grid_error = 0.0;                  // refinement estimate of the eigenvalue error
  double tol_eigenvalue = 0.0;
  double tol_coupling = 0.0;
};

// Zero-energy resonance detection on a grid. The eigenvalue tolerance
// defaults to 10x the observed one-step grid-refinement error: the resonance
// is a codimension-one condition and a fixed tolerance misclassifies on
// coarse grids.
inline ResonanceReport detect_resonance(const Potential& V, double s, const Grid& grid,
                                        std::optional<double> tol = std::nullopt) {
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("detect_resonance: tol must be > 0");
  ResonanceReport rep;
  KernelMatrix b0 = assemble_bs_matrix(V, s, 0.0, grid);
  if (hs_norm(b0) == 0.0) {  // V == 0: spectrum {0}, nothing to normalize
    rep.phi = Eigen::VectorXd::Zero(grid.size());
    rep.tol_eigenvalue = tol.value_or(0.0);
    return rep;
  }
  double second = 0.0;
  EigenPair pair = eigenpair_nearest(b0, -1.0, &second);
  rep.nearest_eigenvalue = pair.value;
  rep.second_eigenvalue = second;

  double grid_err = 0.0;
  if (!tol) {
    if (!V.has_sampler())
      throw std::invalid_argument(
          "detect_resonance: refinement-based tolerance needs a resampleable potential; "
          "pass tol explicitly");
    Grid fine = make_grid(grid.dimension, grid.cutoff, 2 * grid.size(), grid.grading);
    Potential Vf = V.retabulated(fine);
    EigenPair fine_pair = eigenpair_nearest(assemble_bs_matrix(Vf, s, 0.0, fine), -1.0);
    grid_err = std::abs(fine_pair.value - pair.value);
  }
  rep.grid_error = grid_err;
  rep.tol_eigenvalue = tol ? *tol : std::max(10.0 * grid_err, 1e-12);

  // unfold, normalize <phi~, phi> = -1
  const auto& vals = V.values();
  Eigen::VectorXd phi(grid.size());
  double q = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    phi[i] = pair.vector[i] / std::sqrt(grid.weights[i]);
    const double sgn = vals[i] < 0.0 ? -1.0 : (vals[i] > 0.0 ? 1.0 : 0.0);
    q += sgn * pair.vector[i] * pair.vector[i];  // sum sign(V) w phi^2
  }
  if (!(q < 0.0))
    throw numeric_error("detect_resonance: <phi~, phi> is not negative; cannot normalize");
  phi /= std::sqrt(-q);

  auto v = V.v_values();
  double coupling = 0.0, v_l2sq = 0.0, phi_l2sq = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    coupling += grid.weights[i] * v[i] * phi[i];
    v_l2sq += grid.weights[i] * v[i] * v[i];
    phi_l2sq += grid.weights[i] * phi[i] * phi[i];
  }
  if (coupling < 0.0) {  // fix the overall sign of the eigenvector
    phi = -phi;
    coupling = -coupling;
  }
  rep.phi = phi;
  rep.coupling = coupling;
  rep.tol_coupling = 1e-6 * std::sqrt(v_l2sq * phi_l2sq);
  rep.is_resonant =
      std::abs(pair.value + 1.0) <= rep.tol_eigenvalue && coupling > rep.tol_coupling;
  rep.is_simple = std::abs(second - pair.value) > 100.0 * std::max(grid_err, 1e-14);
  rep.psi_asymptotic_coefficient = lambda_s_constant(s, grid.dimension) * coupling;
  return rep;
}

struct ResonanceFunction {
  Eigen::VectorXd psi;              // psi(x_i) = ((-Delta)^{-s/2} v phi)(x_i)
  double asymptotic_coefficient;    // c = Lambda_s <v, phi>
  Eigen::VectorXd residual;         // psi - c |x|^{s-d}
  double residual_l2;               // discrete L2 norm of the residual
  double psi_l2;                    // discrete L2 norm of psi on the grid
};

// psi = (-Delta)^{-s/2} v phi, tabulated on the grid, together with the
// square-integrable remainder after the c |x|^{-(d-s)} leading decay is
// peeled off.
inline ResonanceFunction resonance_function(const ResonanceReport& rep, const Potential& V,
                                            double s, const Grid& grid) {
  KernelAssembler ka(s, grid.dimension, 0.0, grid);
  const Eigen::MatrixXd& eff = ka.effective_matrix();
  auto v = V.v_values();
  const int n = grid.size();
  Eigen::VectorXd src(n);
  for (int i = 0; i < n; ++i) src[i] = grid.weights[i] * v[i] * rep.phi[i];
  ResonanceFunction out;
  out.psi = eff * src;
  out.asymptotic_coefficient = lambda_s_constant(s, grid.dimension) * rep.coupling;
  out.residual.resize(n);
  double rl2 = 0.0, pl2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tail = out.asymptotic_coefficient *
                        std::pow(std::abs(grid.nodes[i]), s - grid.dimension);
    out.residual[i] = out.psi[i] - tail;
    rl2 += grid.weights[i] * out.residual[i] * out.residual[i];
    pl2 += grid.weights[i] * out.psi[i] * out.psi[i];
  }
  out.residual_l2 = std::sqrt(rl2);
  out.psi_l2 = std::sqrt(pl2);
  return out;
}

}  // namespace fraclab
