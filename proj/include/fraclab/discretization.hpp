#pragma once

// Grids, quadrature weights, and dense discretizations of the integral
// operators built from G_{s,lambda}.
//
// Conventions, fixed once for the whole library:
//  * 1D grids live on [-R, R] (signed coordinates); 3D grids hold radii in
//    (0, R] and their weights already contain the 4 pi r^2 factor, so a grid
//    weight is always the measure of its cell.
//  * Matrices are stored weight-folded: an operator with kernel K(x, y)
//    becomes M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j). In this convention the
//    Frobenius norm approximates the Hilbert-Schmidt norm, matrix products
//    compose like operator products, and eigenvalues match the Nystrom ones.
//  * 3D operators are restricted to the radial (l = 0) sector: the reduced
//    kernel k0(r, r') = (2 pi/(4 pi r r')) int_{|r-r'|}^{r+r'} rho G(rho) drho
//    acts against the 4 pi r'^2 dr' measure carried by the weights.
//  * Entries are cell integrals, not point values: the Lambda_s |x-y|^{s-d}
//    part of the kernel is integrated exactly over the column cell
//    (power-law antiderivatives) and the smooth remainder is taken at the
//    midpoint. Dropping or point-sampling the diagonal degrades exactly the
//    eigenvalues near -1 that the resonance analysis lives on.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclab/core_math.hpp"
#include "fraclab/green.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

struct Grid {
  int dimension = 1;
  std::vector<double> nodes;       // strictly increasing
  std::vector<double> weights;     // cell measures (3D: include 4 pi r^2)
  std::vector<double> boundaries;  // n+1 cell edges
  double cutoff = 0.0;
  double grading = 1.0;            // construction parameter, kept for refinement

  int size() const { return static_cast<int>(nodes.size()); }

  double cell_width(int j) const { return boundaries[j + 1] - boundaries[j]; }

  // Geometrically rescaled grid (nodes*c); weights scale with c^d.
  Grid scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("Grid::scaled: factor must be > 0");
    Grid g = *this;
    const double wf = dimension == 3 ? c * c * c : c;
    for (auto& x : g.nodes) x *= c;
    for (auto& b : g.boundaries) b *= c;
    for (auto& w : g.weights) w *= wf;
    g.cutoff *= c;
    return g;
  }
};

// Graded composite-midpoint grid. Nodes cluster at the origin like
// (k/n)^grading to resolve the |x|^{-(d-s)} kernel singularity; weights are
// exact cell measures, so they sum to the truncated-domain measure exactly.
inline Grid make_grid(int dimension, double R, int n, double grading = 2.0) {
  if (dimension != 1 && dimension != 3)
    throw std::invalid_argument("make_grid: dimension must be 1 or 3");
  if (!(R > 0.0)) throw std::invalid_argument("make_grid: cutoff must be > 0");
  if (n < 8) throw std::invalid_argument("make_grid: need at least 8 points");
  if (!(grading >= 1.0)) throw std::invalid_argument("make_grid: grading must be >= 1");

  Grid g;
  g.dimension = dimension;
  g.cutoff = R;
  g.grading = grading;
  g.nodes.resize(n);
  g.weights.resize(n);
  g.boundaries.resize(n + 1);

  if (dimension == 3) {
    for (int k = 0; k <= n; ++k) g.boundaries[k] = R * std::pow(double(k) / n, grading);
    for (int k = 0; k < n; ++k) {
      g.nodes[k] = R * std::pow((k + 0.5) / n, grading);
      const double b0 = g.boundaries[k], b1 = g.boundaries[k + 1];
      g.weights[k] = 4.0 * pi / 3.0 * (b1 * b1 * b1 - b0 * b0 * b0);
    }
    return g;
  }
  auto map = [&](double t) { return R * (t < 0 ? -1.0 : 1.0) * std::pow(std::abs(t), grading); };
  for (int k = 0; k <= n; ++k) g.boundaries[k] = map(-1.0 + 2.0 * double(k) / n);
  for (int k = 0; k < n; ++k) {
    g.nodes[k] = map(-1.0 + (2.0 * k + 1.0) / n);
    g.weights[k] = g.boundaries[k + 1] - g.boundaries[k];
  }
  return g;
}

// Dense square matrix in the weight-folded convention.
struct KernelMatrix {
  Eigen::MatrixXd m;
  bool symmetric_similar = true;  // eigenvalues provably real

  int n() const { return static_cast<int>(m.rows()); }
};

// Frobenius norm == discrete Hilbert-Schmidt norm (weights folded in).
inline double hs_norm(const KernelMatrix& k) { return k.m.norm(); }
inline double hs_norm(const Eigen::MatrixXd& m) { return m.norm(); }

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // folded components sqrt(w_i) f(x_i)
};

namespace disc_detail {

inline void check_reality(const Eigen::VectorXcd& ev, bool symmetric_similar) {
  if (!symmetric_similar) return;
  double max_abs = 0.0, max_im = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(ev[i]));
    max_im = std::max(max_im, std::abs(ev[i].imag()));
  }
  if (max_abs > 0.0 && max_im > 1e-8 * max_abs)
    throw numeric_error("spectrum: complex eigenvalues on a symmetric-similar matrix "
                        "(max |Im| = " + std::to_string(max_im) + ")");
}

}  // namespace disc_detail

// All eigenvalues, descending by magnitude. A general real eigensolver is
// used on purpose and reality is asserted afterwards; the assertion doubles
// as a correctness probe of the assembly.
inline std::vector<double> real_spectrum(const KernelMatrix& k) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(k.m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw numeric_error("real_spectrum: eigensolver failed");
  disc_detail::check_reality(es.eigenvalues(), k.symmetric_similar);
  std::vector<double> out(k.n());
  for (int i = 0; i < k.n(); ++i) out[i] = es.eigenvalues()[i].real();
  std::sort(out.begin(), out.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  return out;
}

// Eigenpair closest to `target`, plus the next-closest eigenvalue (for
// simplicity gaps).
inline EigenPair eigenpair_nearest(const KernelMatrix& k, double target,
                                   double* second_nearest = nullptr) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(k.m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw numeric_error("eigenpair_nearest: eigensolver failed");
  disc_detail::check_reality(es.eigenvalues(), k.symmetric_similar);
  int best = 0, second = -1;
  for (int i = 1; i < k.n(); ++i) {
    if (std::abs(es.eigenvalues()[i].real() - target) <
        std::abs(es.eigenvalues()[best].real() - target))
      best = i;
  }
  for (int i = 0; i < k.n(); ++i) {
    if (i == best) continue;
    if (second < 0 || std::abs(es.eigenvalues()[i].real() - target) <
                          std::abs(es.eigenvalues()[second].real() - target))
      second = i;
  }
  if (second_nearest)
    *second_nearest = second >= 0 ? es.eigenvalues()[second].real()
                                  : std::numeric_limits<double>::infinity();
  EigenPair out;
  out.value = es.eigenvalues()[best].real();
  Eigen::VectorXcd vc = es.eigenvectors().col(best);
  // rotate away the arbitrary complex phase, then drop the imaginary part
  Eigen::Index imax = 0;
  vc.cwiseAbs().maxCoeff(&imax);
  std::complex<double> phase = vc[imax] / std::abs(vc[imax]);
  vc /= phase;
  out.vector = vc.real();
  const double imag_norm = vc.imag().norm();
  if (imag_norm > 1e-8 * vc.real().norm())
    throw numeric_error("eigenpair_nearest: eigenvector has a non-negligible imaginary part");
  return out;
}

namespace disc_detail {

// exact integral of |x0 - y|^q over y in [a, b], q > -1
inline double power_cell_integral_1d(double x0, double a, double b, double q) {
  const double q1 = q + 1.0;
  auto pos = [&](double t) { return std::pow(t, q1) / q1; };  // antiderivative of t^q, t>0
  if (x0 <= a) return pos(b - x0) - pos(a - x0);
  if (x0 >= b) return pos(x0 - a) - pos(x0 - b);
  return pos(x0 - a) + pos(b - x0);
}

// exact integral of r' (A + r')^q over r' in [a, b], A > 0
inline double moment_plus(double A, double a, double b, double q) {
  auto F = [&](double r) {
    const double t = A + r;
    return std::pow(t, q + 2.0) / (q + 2.0) - A * std::pow(t, q + 1.0) / (q + 1.0);
  };
  return F(b) - F(a);
}

// exact integral of r' |A - r'|^q over r' in [a, b], A > 0, q > -1
inline double moment_minus(double A, double a, double b, double q) {
  auto Fleft = [&](double r) {  // r' < A branch
    const double t = A - r;
    return std::pow(t, q + 2.0) / (q + 2.0) - A * std::pow(t, q + 1.0) / (q + 1.0);
  };
  auto Fright = [&](double r) {  // r' > A branch
    const double t = r - A;
    return std::pow(t, q + 2.0) / (q + 2.0) + A * std::pow(t, q + 1.0) / (q + 1.0);
  };
  if (b <= A) return Fleft(b) - Fleft(a);
  if (a >= A) return Fright(b) - Fright(a);
  return (0.0 - Fleft(a)) + (Fright(b) - 0.0);  // both branches vanish at r' = A
}

}  // namespace disc_detail

// Radial (l = 0) angular average of G_{s,lambda} in 3D:
//   a0(r, r') = (2 pi/(r r')) int_{|r-r'|}^{r+r'} rho G_{s,lambda}(rho) drho,
// so that (G * f)(r) = int_0^inf a0(r, r') f(r') r'^2 dr' for radial f.
// The 4 pi of the volume measure stays inside the Grid weights; assemblies
// therefore use a0 / (4 pi) against those weights. At lambda = 0 the
// rho-integral is exact.
inline double angular_average_green(double s, double lambda, double r, double rp) {
  if (!(r > 0.0) || !(rp > 0.0))
    throw std::invalid_argument("angular_average_green: radii must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("angular_average_green: lambda must be >= 0");
  if (!(s > 1.5 && s < 3.0))
    throw std::invalid_argument("angular_average_green: requires s in (3/2, 3)");
  const double lam = lambda_s_constant(s, 3);
  const double lo = std::abs(r - rp), hi = r + rp;
  const double power_part =
      lam * (std::pow(hi, s - 1.0) - std::pow(lo, s - 1.0)) / (s - 1.0);
  if (lambda == 0.0) return 2.0 * pi * power_part / (r * rp);
  QuadResult smooth = integrate_adaptive(
      [&](double rho) {
        if (rho <= 0.0) return 0.0;
        return rho * green_detail::j_value(s, 3, lambda, rho);
      },
      lo, hi, 1e-13, 1e-10, 600);
  return 2.0 * pi * (power_part + smooth.value) / (r * rp);
}

// Cell-integrated symmetric effective kernel of G_{s,lambda} on a grid.
// effective(i, j) approximates K(x_i, x_j) of the kernel acting against the
// grid's weighted quadrature; it is symmetrized so that sign-definite
// sandwiches come out bitwise symmetric.
class KernelAssembler {
 public:
  KernelAssembler(double s, int d, double lambda, const Grid& grid)
      : s_(s), d_(d), lambda_(lambda), grid_(grid) {
    if (grid.dimension != d)
      throw std::invalid_argument("KernelAssembler: grid dimension mismatch");
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid.size(); ++i)
      min_gap = std::min(min_gap, grid.nodes[i] - grid.nodes[i - 1]);
    const double rho_hi =
        d == 3 ? 2.02 * grid.cutoff
               : 1.01 * (grid.nodes.back() - grid.nodes.front());
    table_ = std::make_shared<GreenTable>(s, d, lambda, 0.125 * min_gap, rho_hi);
  }

  KernelAssembler(double s, int d, double lambda, const Grid& grid,
                  std::shared_ptr<GreenTable> table)
      : s_(s), d_(d), lambda_(lambda), grid_(grid), table_(std::move(table)) {}

  const GreenTable& table() const { return *table_; }
  const Grid& grid() const { return grid_; }

  // integral of the kernel over cell j against the row point x_i
  double cell_integral(int i, int j) const {
    const double a = grid_.boundaries[j], b = grid_.boundaries[j + 1];
    const double wj = grid_.weights[j];
    const double lam = table_->power_coefficient();
    if (d_ == 1) {
      const double x0 = grid_.nodes[i];
      const double rho = std::abs(x0 - grid_.nodes[j]);
      if (s_ < 1.0 || lambda_ == 0.0) {  // singular split: exact power + midpoint smooth
        return lam * disc_detail::power_cell_integral_1d(x0, a, b, s_ - 1.0) +
               table_->smooth(rho) * wj;
      }
      // continuous kernel (s > 1): subtract the kink only near the diagonal
      const double near = 3.0 * (grid_.cell_width(i) + grid_.cell_width(j));
      if (rho <= near)
        return lam * disc_detail::power_cell_integral_1d(x0, a, b, s_ - 1.0) +
               (table_->value(rho) - lam * std::pow(std::max(rho, 1e-300), s_ - 1.0)) * wj;
      return table_->value(rho) * wj;
    }
    // d == 3, radial reduction; integrate a0(r_i, r') r'^2 over the cell
    const double r = grid_.nodes[i];
    const double q = s_ - 1.0;
    const double power = (2.0 * pi * lam / (q * r)) *
                         (disc_detail::moment_plus(r, a, b, q) -
                          disc_detail::moment_minus(r, a, b, q));
    double smooth = 0.0;
    if (lambda_ != 0.0) {
      const double rp = grid_.nodes[j];
      smooth = (2.0 * pi * rp / r) * table_->smooth_moment(std::abs(r - rp), r + rp) *
               grid_.cell_width(j);
    }
    return power + smooth;
  }

  // symmetrized effective kernel value
  double effective(int i, int j) const {
    if (i == j) return cell_integral(i, i) / grid_.weights[i];
    return 0.5 * (cell_integral(i, j) / grid_.weights[j] +
                  cell_integral(j, i) / grid_.weights[i]);
  }

  // full effective-kernel matrix (row-parallel, deterministic)
  const Eigen::MatrixXd& effective_matrix() const {
    if (eff_.size() == 0) {
      const int n = grid_.size();
      eff_.resize(n, n);
      if (d_ == 3 && lambda_ != 0.0) table_->smooth_moment(0.0, 0.0);  // warm the cache
      auto* self = this;
      parallel_for(n, [self, n](int i) {
        for (int j = i; j < n; ++j) {
          const double v = self->effective(i, j);
          self->eff_(i, j) = v;
          self->eff_(j, i) = v;
        }
      });
    }
    return eff_;
  }

 private:
  double s_;
  int d_;
  double lambda_;
  Grid grid_;
  std::shared_ptr<GreenTable> table_;
  mutable Eigen::MatrixXd eff_;
};

// Weight-folded sandwich  M_ij = left_i * Ktilde_ij * right_j  with
// left_i = sqrt(w_i) u(x_i), right_j = v(x_j) sqrt(w_j). For u = +-v this is
// bitwise symmetric because the effective kernel is.
inline KernelMatrix fold_sandwich(const KernelAssembler& ka, const std::vector<double>& u,
                                  const std::vector<double>& v) {
  const Grid& g = ka.grid();
  const int n = g.size();
  const Eigen::MatrixXd& eff = ka.effective_matrix();
  Eigen::VectorXd left(n), right(n);
  for (int i = 0; i < n; ++i) {
    const double sw = std::sqrt(g.weights[i]);
    left[i] = sw * u[i];
    right[i] = v[i] * sw;
  }
  KernelMatrix out;
  out.m = Eigen::MatrixXd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.m(i, j) = (left[i] * right[j]) * eff(i, j);
  out.symmetric_similar = true;
  return out;
}

// Free-kernel fold (u = v = 1) in the same convention.
inline KernelMatrix fold_plain(const KernelAssembler& ka) {
  const int n = ka.grid().size();
  return fold_sandwich(ka, std::vector<double>(n, 1.0), std::vector<double>(n, 1.0));
}

// Row-major binary dump of a kernel matrix for debugging:
// header {magic "FRLB", n, s, lambda, d} then n*n little-endian doubles.
inline void write_matrix_binary(const KernelMatrix& k, double s, double lambda, int d,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_matrix_binary: cannot open " + path);
  const char magic[4] = {'F', 'R', 'L', 'B'};
  out.write(magic, 4);
  const std::int64_t n = k.n(), dd = d;
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&s), sizeof s);
  out.write(reinterpret_cast<const char*>(&lambda), sizeof lambda);
  out.write(reinterpret_cast<const char*>(&dd), sizeof dd);
  for (int i = 0; i < k.n(); ++i)
    for (int j = 0; j < k.n(); ++j) {
      const double v = k.m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

}  // namespace fraclab
