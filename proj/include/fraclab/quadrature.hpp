#pragma once

// Quadrature engine used throughout: adaptive Gauss-Kronrod 7/15 panels on
// finite intervals, a mapped rule for [0, inf) tails with algebraic decay,
// and an oscillatory driver that integrates between consecutive zeros of the
// trigonometric factor and accelerates the resulting alternating series by
// iterated (Euler) averaging of its partial sums. The Fourier-type integrals
// behind the fractional Green functions decay only algebraically, so plain
// panel refinement would never terminate on the tail; the Euler transform is
// what makes those tails cheap.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "fraclab/core_math.hpp"

namespace fraclab {

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  long evaluations = 0;
};

namespace quad_detail {

// 15-point Kronrod abscissae on [0,1] side and weights; embedded 7-point
// Gauss weights sit at the odd-index abscissae.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(F&& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int k = 0; k < 7; ++k) {
    fv[k] = f(c - h * kXgk[k]);
    fv[14 - k] = f(c + h * kXgk[k]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  double resabs = kWgk[7] * std::abs(fv[7]);
  for (int k = 0; k < 7; ++k) {
    resk += kWgk[k] * (fv[k] + fv[14 - k]);
    resabs += kWgk[k] * (std::abs(fv[k]) + std::abs(fv[14 - k]));
    if (k % 2 == 1) resg += kWg[k / 2] * (fv[k] + fv[14 - k]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int k = 0; k < 7; ++k)
    resasc += kWgk[k] * (std::abs(fv[k] - mean) + std::abs(fv[14 - k] - mean));
  result = resk * h;
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  double e = std::abs((resk - resg) * h);
  if (resasc != 0.0 && e != 0.0)
    e = resasc * std::min(1.0, std::pow(200.0 * e / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  err = std::max(e, eps50);
}

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace quad_detail

// Adaptive Gauss-Kronrod on [a, b]. Splits the worst panel until the summed
// error estimate meets max(abs_tol, rel_tol*|I|) or the panel budget runs
// out; the budget case is reported through abs_err, never silently.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                              double rel_tol = 1e-12, int max_panels = 4000) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<quad_detail::Panel> heap;
  double total = 0.0, total_err = 0.0;
  auto push = [&](double lo, double hi) {
    quad_detail::Panel p{lo, hi, 0.0, 0.0};
    quad_detail::gk15_panel(f, lo, hi, p.value, p.err);
    out.evaluations += 15;
    total += p.value;
    total_err += p.err;
    heap.push(p);
  };
  push(a, b);
  int panels = 1;
  while (panels < max_panels) {
    if (total_err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
    quad_detail::Panel worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at double precision
      total += worst.value;
      total_err += worst.err;
      break;
    }
    push(worst.a, mid);
    push(mid, worst.b);
    ++panels;
  }
  out.value = total;
  out.abs_err = total_err;
  return out;
}

// Same, with interior breakpoints (feature scales the caller knows about).
template <class F>
QuadResult integrate_adaptive_breakpoints(F&& f, double a, double b, std::vector<double> pts,
                                          double abs_tol = 1e-12, double rel_tol = 1e-12,
                                          int max_panels = 4000) {
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double x) { return x < a || x > b; }),
            pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  QuadResult out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    QuadResult piece = integrate_adaptive(f, pts[i], pts[i + 1], abs_tol / double(pts.size()),
                                          rel_tol, max_panels);
    out.value += piece.value;
    out.abs_err += piece.abs_err;
    out.evaluations += piece.evaluations;
  }
  return out;
}

// Integral over [lo, inf) via the map p = lo + scale*t/(1-t). Intended for
// smooth integrands with integrable algebraic decay; endpoint behaviour at
// t -> 1 is handled by the adaptive bisection.
template <class F>
QuadResult integrate_to_infinity(F&& f, double lo, double scale, double abs_tol = 1e-12,
                                 double rel_tol = 1e-12, int max_panels = 4000) {
  auto g = [&](double t) {
    const double om = 1.0 - t;
    const double p = lo + scale * t / om;
    return f(p) * scale / (om * om);
  };
  return integrate_adaptive(g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
}

namespace quad_detail {

// Iterated averaging of the partial sums s_0..s_{m-1} of an alternating
// series; returns the accelerated limit and the size of the last averaging
// correction as an error estimate.
inline double euler_accelerate(std::vector<double> s, double* err_out) {
  double estimate = s.back();
  double prev = estimate;
  while (s.size() > 1) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    s.pop_back();
    prev = estimate;
    estimate = s.back();
  }
  if (err_out) *err_out = std::abs(estimate - prev);
  return estimate;
}

}  // namespace quad_detail

enum class Trig { Sin, Cos };

// integral_{a}^{inf} f(p) * trig(w p) dp for smooth one-signed f with
// algebraic decay. The range [a, z0] up to the first zero of the trig factor
// is integrated adaptively, the rest in half-period panels whose alternating
// sums are Euler-accelerated.
template <class F>
QuadResult oscillatory_integral(F&& f, Trig trig, double w, double a,
                                std::vector<double> breakpoints = {}, double abs_tol = 1e-13,
                                double rel_tol = 1e-12, int max_half_periods = 80) {
  QuadResult out;
  const double half_period = pi / w;
  auto g = [&](double p) { return f(p) * (trig == Trig::Sin ? std::sin(w * p) : std::cos(w * p)); };

  // first zero of the trig factor at or beyond a (plus a short head run)
  double k0;
  if (trig == Trig::Sin)
    k0 = std::ceil(a * w / pi);
  else
    k0 = std::ceil(a * w / pi - 0.5) + 0.5;
  double z = k0 * half_period;
  if (z <= a) z += half_period;
  const int head_periods = 4;
  z += head_periods * half_period;

  QuadResult head = integrate_adaptive_breakpoints(g, a, z, breakpoints, abs_tol, rel_tol, 6000);
  out.value = head.value;
  out.abs_err = head.abs_err;
  out.evaluations = head.evaluations;

  // alternating half-period terms
  std::vector<double> partial;
  double sum = 0.0;
  double tail_value = 0.0, tail_err = std::numeric_limits<double>::infinity();
  double prev_estimate = 0.0;
  bool have_prev = false;
  for (int k = 0; k < max_half_periods; ++k) {
    double val, err;
    quad_detail::gk15_panel(g, z, z + half_period, val, err);
    out.evaluations += 15;
    z += half_period;
    sum += val;
    partial.push_back(sum);
    if (partial.size() >= 6) {
      double e;
      const double est = quad_detail::euler_accelerate(partial, &e);
      if (have_prev) {
        tail_err = std::abs(est - prev_estimate);
        tail_value = est;
        if (tail_err <= std::max(abs_tol, rel_tol * std::abs(out.value + est))) {
          prev_estimate = est;
          break;
        }
      }
      prev_estimate = est;
      have_prev = true;
      tail_value = est;
    }
  }
  if (!partial.empty()) {
    if (partial.size() < 6) {  // too few terms to accelerate; use the raw sum
      tail_value = sum;
      tail_err = std::abs(sum - (partial.size() > 1 ? partial[partial.size() - 2] : 0.0));
    }
    out.value += tail_value;
    out.abs_err += std::isfinite(tail_err) ? tail_err : std::abs(tail_value);
  }
  return out;
}

// integral_0^inf w^{a-1} / (1 + w^s) dw for 0 < a < s, evaluated by genuine
// quadrature: both endpoint pieces are desingularised by power substitutions
// that turn them into smooth integrals over [0, 1]. Closed form (for
// cross-checks): (pi/s) / sin(pi a / s).
inline QuadResult mellin_plus_integral(double a, double s, double tol = 1e-14) {
  if (!(a > 0.0 && a < s))
    throw std::invalid_argument("mellin_plus_integral: need 0 < a < s");
  // [0,1]: substitute sigma = w^a  ->  (1/a) int_0^1 (1 + sigma^{s/a})^{-1} dsigma
  const double ea = s / a;
  QuadResult low = integrate_adaptive([&](double t) { return 1.0 / (1.0 + std::pow(t, ea)); },
                                      0.0, 1.0, tol, tol);
  // [1,inf): z = 1/w then tau = z^{s-a}
  //   -> (1/(s-a)) int_0^1 (1 + tau^{s/(s-a)})^{-1} dtau
  const double eb = s / (s - a);
  QuadResult high = integrate_adaptive([&](double t) { return 1.0 / (1.0 + std::pow(t, eb)); },
                                       0.0, 1.0, tol, tol);
  QuadResult out;
  out.value = low.value / a + high.value / (s - a);
  out.abs_err = low.abs_err / a + high.abs_err / (s - a);
  out.evaluations = low.evaluations + high.evaluations;
  return out;
}

}  // namespace fraclab
