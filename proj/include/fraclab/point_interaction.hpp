#pragma once

// Discretized resolvents of the limit objects: the free fractional resolvent
// ((-Delta)^{s/2} + lambda)^{-1} and the point-interaction resolvent
//   free + (alpha - Theta(s, lambda))^{-1} |G_{s,lambda}><G_{s,lambda}| .
// The Theta coefficient is core_math::theta, bit for bit; nothing here
// re-derives it.

#include <Eigen/Dense>
#include <optional>

#include "fraclab/core_math.hpp"
#include "fraclab/discretization.hpp"

namespace fraclab {

enum class ResolventKind { Free, PointInteraction, KonnoKuroda };

struct ResolventMatrix {
  KernelMatrix matrix;
  double lambda = 0.0;
  ResolventKind kind = ResolventKind::Free;
  std::optional<double> alpha;  // PointInteraction only; empty = Friedrichs
};

// folded samples of the Green function: g_i = sqrt(w_i) G_{s,lambda}(x_i)
inline Eigen::VectorXd green_vector(const KernelAssembler& ka) {
  const Grid& g = ka.grid();
  Eigen::VectorXd out(g.size());
  for (int i = 0; i < g.size(); ++i)
    out[i] = std::sqrt(g.weights[i]) * ka.table().value(std::abs(g.nodes[i]));
  return out;
}

inline ResolventMatrix free_resolvent(const KernelAssembler& ka, double lambda) {
  ResolventMatrix out;
  out.matrix = fold_plain(ka);
  out.lambda = lambda;
  out.kind = ResolventKind::Free;
  return out;
}

inline ResolventMatrix free_resolvent(double s, double lambda, int d, const Grid& grid) {
  if (!(lambda > 0.0)) throw std::invalid_argument("free_resolvent: lambda must be > 0");
  KernelAssembler ka(s, d, lambda, grid);
  return free_resolvent(ka, lambda);
}

inline ResolventMatrix point_resolvent(const PointInteraction& k, double lambda,
                                       const KernelAssembler& ka) {
  if (!(lambda > 0.0)) throw std::invalid_argument("point_resolvent: lambda must be > 0");
  ResolventMatrix out = free_resolvent(ka, lambda);
  out.kind = ResolventKind::PointInteraction;
  out.alpha = k.alpha;
  if (k.is_friedrichs()) return out;  // no rank-one correction at all
  const double th = theta(k.params.s, lambda, k.params.d);
  const double denom = *k.alpha - th;
  if (std::abs(denom) < 1e-12)
    throw numeric_error("point_resolvent: spectral parameter at the bound state "
                        "(alpha - Theta vanishes)");
  const Eigen::VectorXd g = green_vector(ka);
  out.matrix.m += (g * g.transpose()) / denom;
  return out;
}

inline ResolventMatrix point_resolvent(const PointInteraction& k, double lambda,
                                       const Grid& grid) {
  KernelAssembler ka(k.params.s, k.params.d, lambda, grid);
  return point_resolvent(k, lambda, ka);
}

// HS distance between the point and free resolvents: |alpha - Theta|^{-1}
// ||g||^2, exact by construction. This is the yardstick every convergence
// verdict is measured against.
inline double rank_one_gap(double s, int d, std::optional<double> alpha, double lambda,
                           const KernelAssembler& ka) {
  if (!alpha) return 0.0;
  const double denom = *alpha - theta(s, lambda, d);
  return green_vector(ka).squaredNorm() / std::abs(denom);
}

}  // namespace fraclab
