#pragma once

// Pointwise evaluation of the fractional Green function G_{s,lambda}, i.e.
// the convolution kernel of ((-Delta)^{s/2} + lambda)^{-1} under the
// (2 pi)^{-d} total-prefactor convention
//
//   G_{s,lambda}(x) = (2 pi)^{-d} \int e^{i p.x} / (|p|^s + lambda) d^d p .
//
// For s < d the kernel splits as Lambda_s |x|^{s-d} + J_{s,lambda}(x) with a
// bounded continuous correction J given by an absolutely convergent Fourier
// integral; that split is how every singular-regime evaluation is organised
// here (the direct integral converges only conditionally). For d = 1 < s the
// kernel is continuous and is evaluated by direct cosine-transform
// quadrature, with the value at the origin
//   G_{s,lambda}(0) = (lambda^{1-1/s} s sin(pi/s))^{-1}.
//
// GreenTable is the bulk-evaluation companion: it tabulates the smooth part
// on a log-spaced grid once per (s, d, lambda) and serves kernel values and
// radial moment integrals to the matrix assembly at spline cost.

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "fraclab/core_math.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

enum class GreenMethod { ClosedForm, SplitQuadrature, SeriesNearZero };

struct GreenEval {
  double x = 0.0;
  double lambda = 0.0;
  double value = 0.0;
  double abs_err = 0.0;
  GreenMethod method = GreenMethod::ClosedForm;
};

namespace green_detail {

// Riesz coefficient of FT[|p|^{-a}] continued past a = d; finite for
// 0 < a < d + 2 away from the Gamma poles.
inline double riesz_coefficient(double a, int d) {
  return std::tgamma(0.5 * (d - a)) /
         (std::pow(2.0, a) * std::pow(pi, 0.5 * d) * std::tgamma(0.5 * a));
}

// Lambda_s without the s < d guard (negative continuation for d < s < d+2).
inline double lambda_s_any(double s, int d) { return riesz_coefficient(s, d); }

// Small-lambda / small-x expansion coefficient of the smooth part:
//   J_{s,lambda}(x) = J_{s,lambda}(0) - lambda K1 |x|^{2s-d} + higher order
// with K1 the continued Riesz coefficient at exponent 2s.
inline double k1_coefficient(double s, int d) { return riesz_coefficient(2.0 * s, d); }

// J(0) closed form, s < d:  c_d(s) lambda^{d/s - 1} with
// c_3 = (2 pi s sin(3 pi/s))^{-1}, c_1 = (s sin(pi/s))^{-1}.
inline double small_lambda_coefficient(double s, int d) {
  if (d == 3) return 1.0 / (2.0 * pi * s * sin_pi(3.0 / s));
  return 1.0 / (s * sin_pi(1.0 / s));
}

inline double j_origin_closed(double s, int d, double lambda) {
  return small_lambda_coefficient(s, d) * std::pow(lambda, double(d) / s - 1.0);
}

// J(0) by honest quadrature (desingularised Mellin pieces), s < d.
inline double j_origin_quadrature(double s, int d, double lambda, double* abs_err = nullptr) {
  QuadResult m = mellin_plus_integral(double(d) - s, s);
  double pref;
  if (d == 3)
    pref = -std::pow(lambda, 3.0 / s - 1.0) / (2.0 * pi * pi);
  else
    pref = -std::pow(lambda, 1.0 / s - 1.0) / pi;
  if (abs_err) *abs_err = std::abs(pref) * m.abs_err;
  return pref * m.value;
}

// G_{s,lambda}(0) by quadrature for d = 1 < s.
inline double g_origin_1d_quadrature(double s, double lambda, double* abs_err = nullptr) {
  QuadResult m = mellin_plus_integral(1.0, s);
  const double pref = std::pow(lambda, 1.0 / s - 1.0) / pi;
  if (abs_err) *abs_err = pref * m.abs_err;
  return pref * m.value;
}

// J_{s,lambda}(x), s < d, lambda > 0, x > 0:
//   d = 3: -(lambda/(2 pi^2 r)) int_0^inf p^{1-s}/(p^s+lambda) sin(p r) dp
//   d = 1: -(lambda/pi)        int_0^inf p^{-s}/(p^s+lambda) cos(p x) dp
inline double j_value(double s, int d, double lambda, double x, double* abs_err = nullptr) {
  const double knee = std::pow(lambda, 1.0 / s);
  std::vector<double> bp = {0.1 * knee, knee, 10.0 * knee};
  if (d == 3) {
    auto h = [=](double p) { return std::pow(p, 1.0 - s) / (std::pow(p, s) + lambda); };
    QuadResult q = oscillatory_integral(h, Trig::Sin, x, 0.0, bp, 1e-300, 5e-13);
    const double pref = -lambda / (2.0 * pi * pi * x);
    if (abs_err) *abs_err = std::abs(pref) * q.abs_err;
    return pref * q.value;
  }
  auto h = [=](double p) { return std::pow(p, -s) / (std::pow(p, s) + lambda); };
  QuadResult q = oscillatory_integral(h, Trig::Cos, x, 0.0, bp, 1e-300, 5e-13);
  const double pref = -lambda / pi;
  if (abs_err) *abs_err = std::abs(pref) * q.abs_err;
  return pref * q.value;
}

// Direct cosine-transform evaluation for d = 1 < s, x > 0.
inline double g_direct_1d(double s, double lambda, double x, double* abs_err = nullptr) {
  const double knee = std::pow(lambda, 1.0 / s);
  std::vector<double> bp = {0.1 * knee, knee, 10.0 * knee};
  auto f = [=](double p) { return 1.0 / (std::pow(p, s) + lambda); };
  QuadResult q = oscillatory_integral(f, Trig::Cos, x, 0.0, bp, 1e-300, 5e-13);
  if (abs_err) *abs_err = q.abs_err / pi;
  return q.value / pi;
}

}  // namespace green_detail

// Zero-energy kernel Lambda_s |x|^{-(d-s)}; exact, no quadrature.
inline double green_zero(const FractionalParams& p, double x) {
  const double lam = lambda_s_constant(p.s, p.d);  // rejects s >= d
  if (x == 0.0) throw std::invalid_argument("green_zero: pointwise singular at x = 0");
  return lam * std::pow(std::abs(x), p.s - p.d);
}

inline GreenEval green(const FractionalParams& p, double lambda, double x) {
  if (lambda < 0.0) throw std::invalid_argument("green: lambda must be >= 0");
  const double s = p.s;
  const int d = p.d;
  const double r = std::abs(x);
  GreenEval out;
  out.x = x;
  out.lambda = lambda;

  if (d == 3) {
    if (!(s > 1.5 && s < 3.0))
      throw std::invalid_argument("green: d = 3 supports s in (3/2, 3)");
  } else if (d == 1) {
    if (s == 1.0)
      throw std::invalid_argument("green: transition value s = d is not supported");
    if (!(s > 0.5 && s < 3.0))
      throw std::invalid_argument("green: d = 1 supports s in (1/2, 3), s != 1");
  } else {
    throw std::invalid_argument("green: dimension must be 1 or 3");
  }

  if (s < double(d)) {
    if (r == 0.0) throw std::invalid_argument("green: pointwise singular at x = 0 for s < d");
    const double lam = lambda_s_constant(s, d);
    const double power = lam * std::pow(r, s - d);
    if (lambda == 0.0) {
      out.value = power;
      out.abs_err = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(power);
      out.method = GreenMethod::ClosedForm;
      return out;
    }
    // series shortcut once the x-variation of J drops below resolution
    const double j0 = green_detail::j_origin_closed(s, d, lambda);
    const double k1 = green_detail::k1_coefficient(s, d);
    const double corr = -lambda * k1 * std::pow(r, 2.0 * s - d);
    if (std::abs(corr) < 1e-11 * std::abs(j0)) {
      out.value = power + j0 + corr;
      out.abs_err = std::abs(corr) + 1e-14 * std::abs(j0);
      out.method = GreenMethod::SeriesNearZero;
      return out;
    }
    double jerr = 0.0;
    const double j = green_detail::j_value(s, d, lambda, r, &jerr);
    out.value = power + j;
    out.abs_err = jerr + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(power);
    out.method = GreenMethod::SplitQuadrature;
    return out;
  }

  // d = 1 < s: continuous kernel
  if (lambda == 0.0)
    throw numeric_error(
        "green: zero-energy kernel unbounded for s > d (diverges as lambda -> 0)");
  double gerr = 0.0;
  if (r == 0.0) {
    out.value = green_detail::g_origin_1d_quadrature(s, lambda, &gerr);
    out.abs_err = gerr;
    out.method = GreenMethod::SplitQuadrature;
    return out;
  }
  const double lam = green_detail::lambda_s_any(s, 1);
  const double kink = lam * std::pow(r, s - 1.0);
  const double g0 = green_detail::g_origin_1d_quadrature(s, lambda, &gerr);
  if (std::abs(kink) < 1e-11 * std::abs(g0)) {
    out.value = g0 + kink;
    out.abs_err = gerr + std::abs(kink);
    out.method = GreenMethod::SeriesNearZero;
    return out;
  }
  double derr = 0.0;
  out.value = green_detail::g_direct_1d(s, lambda, r, &derr);
  out.abs_err = derr;
  out.method = GreenMethod::SplitQuadrature;
  return out;
}

// (G_{s,lambda}(x) - G_{s,0}(x)) / (c_d(s) lambda^{d/s-1}); tends to 1 as
// lambda drops to 0. Evaluated directly from the smooth part, so no
// subtractive cancellation enters.
inline double small_lambda_ratio(const FractionalParams& p, double lambda, double x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("small_lambda_ratio: lambda must be > 0");
  if (!p.resonance_driven())
    throw std::invalid_argument("small_lambda_ratio: requires the resonance-driven regime");
  if (x == 0.0) throw std::invalid_argument("small_lambda_ratio: x must be nonzero");
  const double j = green_detail::j_value(p.s, p.d, lambda, std::abs(x));
  return j / green_detail::j_origin_closed(p.s, p.d, lambda);
}

namespace green_detail {

// Natural cubic spline on a strictly increasing knot set.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 3) return;
    std::vector<double> a(n, 0.0), b(n, 2.0), c(n, 0.0), r(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
      a[i] = hl / (hl + hr);
      c[i] = hr / (hl + hr);
      r[i] = 6.0 / (hl + hr) * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    // Thomas algorithm, natural boundary (m_0 = m_{n-1} = 0)
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      r[i] -= w * r[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
      if (i == 1) break;
    }
  }

  double operator()(double xq) const {
    const std::size_t n = x_.size();
    if (n == 0) return 0.0;
    if (xq <= x_.front()) return y_.front();
    if (xq >= x_.back()) return y_.back();
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= xq ? lo : hi) = mid;
    }
    const double h = x_[hi] - x_[lo];
    const double t = (xq - x_[lo]) / h;
    const double u = 1.0 - t;
    return u * y_[lo] + t * y_[hi] +
           h * h / 6.0 * (m_[lo] * (u * u * u - u) + m_[hi] * (t * t * t - t));
  }

  bool empty() const { return x_.empty(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace green_detail

// Tabulated kernel for one (s, d, lambda) on distances [rho_lo, rho_hi].
// Everything any matrix assembly needs:
//   value(rho)            full kernel G_{s,lambda}(rho)
//   smooth(rho)           G minus the Lambda_s rho^{s-d} power term
//   smooth_moment(a, b)   int_a^b rho * smooth(rho) drho   (3D reduction)
// The smooth part is splined in log(rho), where the power-law kinks at the
// origin become exponentials; below the table range the two-term series
// around rho = 0 takes over.
class GreenTable {
 public:
  GreenTable(double s, int d, double lambda, double rho_lo, double rho_hi,
             double knot_spacing = 0.008)
      : s_(s), d_(d), lambda_(lambda) {
    power_coeff_ = green_detail::lambda_s_any(s, d);
    if (lambda == 0.0) {
      if (!(s < double(d)))
        throw numeric_error("GreenTable: zero-energy kernel requires s < d");
      c0_ = 0.0;
      k1_ = 0.0;
      return;
    }
    c0_ = s < double(d) ? green_detail::j_origin_closed(s, d, lambda)
                        : green_detail::g_origin_1d_quadrature(s, lambda);
    k1_ = -lambda * green_detail::k1_coefficient(s, d);
    // The two-term series c0 + k1 rho^{2s-d} takes over below the handoff
    // radius, chosen where the k1 term is already 1e-6 of c0; the neglected
    // next order is smaller by another factor lambda rho^s, so the series is
    // good to well below 1e-10 relative there. The table itself only needs
    // to reach down to the smaller of that handoff and the finest distance
    // the caller will query.
    rho_series_ = std::pow(1e-6 * std::abs(c0_) / std::max(std::abs(k1_), 1e-300),
                           1.0 / (2.0 * s - d));
    rho_lo = std::max(std::min(rho_lo, rho_series_), 1e-280);
    const double t0 = std::log(std::max(rho_lo, 1e-300));
    const double t1 = std::log(rho_hi * 1.001);
    const int n_knots = std::max(16, int(std::ceil((t1 - t0) / knot_spacing)) + 1);
    std::vector<double> t(n_knots), w(n_knots);
    const double dt = (t1 - t0) / (n_knots - 1);
    for (int i = 0; i < n_knots; ++i) {
      t[i] = t0 + dt * i;
      const double rho = std::exp(t[i]);
      w[i] = s < double(d) ? green_detail::j_value(s, d, lambda, rho)
                           : green_detail::g_direct_1d(s, lambda, rho);
    }
    spline_ = green_detail::CubicSpline(std::move(t), std::move(w));
    table_lo_ = std::exp(t0);
    table_hi_ = rho_hi;
  }

  double s() const { return s_; }
  int dimension() const { return d_; }
  double lambda() const { return lambda_; }
  bool singular() const { return s_ < double(d_); }
  double power_coefficient() const { return power_coeff_; }
  double origin_smooth() const { return c0_; }

  // G minus the power term  (for s < d this is J; for s > d it is the
  // continuous remainder after the |x|^{s-1} kink).
  double smooth(double rho) const {
    rho = std::abs(rho);
    if (lambda_ == 0.0) return 0.0;
    if (rho < table_lo_) return c0_ + k1_ * std::pow(rho, 2.0 * s_ - d_);
    const double w = spline_(std::log(rho));
    if (singular()) return w;
    return w - power_coeff_ * std::pow(rho, s_ - d_);
  }

  double value(double rho) const {
    rho = std::abs(rho);
    if (singular()) {
      if (rho == 0.0) throw numeric_error("GreenTable: kernel singular at rho = 0");
      const double power = power_coeff_ * std::pow(rho, s_ - d_);
      if (lambda_ == 0.0) return power;
      if (rho < table_lo_) return power + c0_ + k1_ * std::pow(rho, 2.0 * s_ - d_);
      return power + spline_(std::log(rho));
    }
    if (rho < table_lo_)
      return c0_ + power_coeff_ * std::pow(rho, s_ - d_) + k1_ * std::pow(rho, 2.0 * s_ - d_);
    return spline_(std::log(rho));
  }

  // int_a^b rho * smooth(rho) drho, 0 <= a <= b; used by the 3D radial
  // reduction. Backed by a cumulative table built on first use.
  double smooth_moment(double a, double b) const {
    if (lambda_ == 0.0) return 0.0;
    ensure_moment_table();
    return moment_cumulative(b) - moment_cumulative(a);
  }

 private:
  void ensure_moment_table() const {
    if (!q_spline_.empty() || lambda_ == 0.0) return;
    const auto& t = spline_.knots();
    std::vector<double> q(t.size(), 0.0);
    // series piece below the table start
    const double rho0 = std::exp(t.front());
    q_below_ = 0.5 * c0_ * rho0 * rho0 +
               k1_ * std::pow(rho0, 2.0 * s_ - d_ + 2.0) / (2.0 * s_ - d_ + 2.0);
    double acc = 0.0;
    auto integrand = [&](double tt) {
      const double rho = std::exp(tt);
      return rho * rho * this->smooth(rho);  // rho*S drho = rho^2 S dt
    };
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      double val, err;
      quad_detail::gk15_panel(integrand, t[i], t[i + 1], val, err);
      acc += val;
      q[i + 1] = acc;
    }
    q_spline_ = green_detail::CubicSpline(t, std::move(q));
  }

  double moment_cumulative(double rho) const {
    if (rho <= 0.0) return 0.0;
    const double rho0 = std::exp(spline_.knots().front());
    if (rho <= rho0)
      return 0.5 * c0_ * rho * rho +
             k1_ * std::pow(rho, 2.0 * s_ - d_ + 2.0) / (2.0 * s_ - d_ + 2.0);
    return q_below_ + q_spline_(std::log(rho));
  }

  double s_ = 0.0;
  int d_ = 0;
  double lambda_ = 0.0;
  double power_coeff_ = 0.0;
  double c0_ = 0.0;
  double k1_ = 0.0;
  double rho_series_ = 0.0;
  double table_lo_ = 0.0;
  double table_hi_ = 0.0;
  green_detail::CubicSpline spline_;
  mutable green_detail::CubicSpline q_spline_;
  mutable double q_below_ = 0.0;
};

}  // namespace fraclab
