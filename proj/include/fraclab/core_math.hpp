#pragma once

// Closed-form scalar quantities for point-like perturbations of the
// fractional Laplacian (-Delta)^{s/2} in d = 1 and d = 3: regime
// classification of the pair (s, d), deficiency indices of the symmetric
// restriction, the singular-kernel constant Lambda_s, the boundary
// coefficient Theta(s, lambda) and the point-interaction eigenvalues.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fraclab {

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Numerical failures (as opposed to bad configuration) throw this.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sin(pi*x) with the argument reduced into [-1/2, 1/2] before the sine is
// taken. Near x = integer the reduction is exact, so no accuracy is lost
// when pi*x sits close to a multiple of pi (e.g. 3*pi/s near s = 3/2).
inline double sin_pi(double x) {
  double r = std::remainder(x, 2.0);  // r in [-1, 1], exact
  if (r > 0.5)
    r = 1.0 - r;
  else if (r < -0.5)
    r = -1.0 - r;
  return std::sin(pi * r);
}

enum class Regime {
  ResonanceDriven,       // locally singular zero-energy kernel: s < d
  ResonanceIndependent,  // locally regular: d = 1, s in (1, 3/2)
  Transition,            // d = 1, s = 1 (logarithmic kernel)
  Endpoint,              // s = d/2 + 1
  Unsupported,
};

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::ResonanceDriven: return "resonance-driven";
    case Regime::ResonanceIndependent: return "resonance-independent";
    case Regime::Transition: return "transition";
    case Regime::Endpoint: return "endpoint";
    default: return "unsupported";
  }
}

inline Regime classify_regime(double s, int d) {
  if (d == 3) {
    if (s == 2.5) return Regime::Endpoint;
    if (s > 1.5 && s < 2.5) return Regime::ResonanceDriven;
    return Regime::Unsupported;
  }
  if (d == 1) {
    if (s == 1.5) return Regime::Endpoint;
    if (s == 1.0) return Regime::Transition;
    if (s > 0.5 && s < 1.0) return Regime::ResonanceDriven;
    if (s > 1.0 && s < 1.5) return Regime::ResonanceIndependent;
    return Regime::Unsupported;
  }
  return Regime::Unsupported;
}

// The pair (s, d) together with its regime. Only d = 1 and d = 3 are
// admitted; everything else about validity is carried by the regime tag.
struct FractionalParams {
  double s = 0.0;
  int d = 0;
  Regime regime = Regime::Unsupported;

  static FractionalParams make(double s, int d) {
    if (d != 1 && d != 3)
      throw std::invalid_argument("FractionalParams: dimension must be 1 or 3, got " +
                                  std::to_string(d));
    if (!(s > 0.0))
      throw std::invalid_argument("FractionalParams: s must be positive");
    return FractionalParams{s, d, classify_regime(s, d)};
  }

  bool resonance_driven() const { return regime == Regime::ResonanceDriven; }
};

// Throws with the violated interval spelled out; used by operations that
// only make sense inside the deficiency-one windows.
inline void require_regime_supported(const FractionalParams& p) {
  if (p.regime == Regime::ResonanceDriven || p.regime == Regime::ResonanceIndependent ||
      p.regime == Regime::Transition)
    return;
  if (p.d == 3)
    throw std::invalid_argument("3D requires s in (3/2, 5/2), s != 5/2; got s = " +
                                std::to_string(p.s));
  throw std::invalid_argument("1D requires s in (1/2, 3/2), s != 3/2; got s = " +
                              std::to_string(p.s));
}

// Coefficient of the |x|^{-(d-s)} singularity of the zero-energy kernel,
//   Lambda_s = Gamma((d-s)/2) / ((2 pi)^{d/2} 2^{s-d/2} Gamma(s/2)).
// Only meaningful for 0 < s < d; at s = d the Gamma factor has a pole.
inline double lambda_s_constant(double s, int d) {
  if (!(s > 0.0)) throw std::invalid_argument("lambda_s_constant: s must be positive");
  if (!(s < static_cast<double>(d)))
    throw std::invalid_argument(
        "lambda_s_constant: no power-law singularity in this regime (s >= d)");
  return std::tgamma(0.5 * (d - s)) /
         (std::pow(2.0 * pi, 0.5 * d) * std::pow(2.0, s - 0.5 * d) * std::tgamma(0.5 * s));
}

inline double lambda_s_constant(const FractionalParams& p) { return lambda_s_constant(p.s, p.d); }

namespace detail {
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace detail

// Deficiency index of (-Delta)^{s/2} restricted to functions vanishing near
// the origin: with n the unique index such that s lies in (d/2+n-1, d/2+n]
// (n = 0 covering (0, d/2]), the index equals C(d+n-1, d). Total on s > 0,
// d >= 1.
inline std::uint64_t deficiency_index(double s, int d) {
  if (!(s > 0.0) || d < 1)
    throw std::invalid_argument("deficiency_index: need s > 0 and d >= 1");
  const double excess = s - 0.5 * d;
  const std::uint64_t n = excess <= 0.0 ? 0 : static_cast<std::uint64_t>(std::ceil(excess));
  return detail::binomial(static_cast<std::uint64_t>(d) + n - 1, static_cast<std::uint64_t>(d));
}

// Boundary coefficient Theta(s, lambda):
//   d = 3:          lambda^{3/s-1} / (2 pi s sin(3 pi/s)),
//   d = 1, s != 1:  lambda^{1/s-1} / (s sin(pi/s)),
//   d = 1, s  = 1:  -(1/pi) * ln(lambda).
// The proper point interactions have resolvent poles exactly where
// Theta(s, lambda) equals the extension parameter alpha.
inline double theta(double s, double lambda, int d) {
  if (!(lambda > 0.0)) throw std::invalid_argument("theta: lambda must be > 0");
  if (d == 3) {
    if (!(s > 1.5 && s < 2.5))
      throw std::invalid_argument("theta: 3D requires s in (3/2, 5/2)");
    return std::pow(lambda, 3.0 / s - 1.0) / (2.0 * pi * s * sin_pi(3.0 / s));
  }
  if (d == 1) {
    if (!(s > 0.5 && s < 1.5))
      throw std::invalid_argument("theta: 1D requires s in (1/2, 3/2)");
    if (s == 1.0) return -std::log(lambda) / pi;
    return std::pow(lambda, 1.0 / s - 1.0) / (s * sin_pi(1.0 / s));
  }
  throw std::invalid_argument("theta: dimension must be 1 or 3");
}

// A self-adjoint point-like perturbation of (-Delta)^{s/2}. The Friedrichs
// extension (no perturbation) is the tagged empty-alpha variant, never a
// sentinel float.
struct PointInteraction {
  FractionalParams params;
  std::optional<double> alpha;

  static PointInteraction friedrichs(const FractionalParams& p) { return {p, std::nullopt}; }
  static PointInteraction with_alpha(const FractionalParams& p, double a) { return {p, a}; }
  bool is_friedrichs() const { return !alpha.has_value(); }
};

// Negative eigenvalue of the point interaction, when present:
//   d = 3:          empty for alpha >= 0, else -(2 pi |alpha| s sin(-3pi/s))^{s/(3-s)};
//   d = 1, s != 1:  empty for (s-1) alpha <= 0, else -(alpha s sin(pi/s))^{s/(1-s)};
//   d = 1, s  = 1:  always -exp(-pi alpha).
// The Friedrichs extension has purely essential spectrum. Whenever a value E
// is returned, theta(s, |E|, d) == alpha up to roundoff.
inline std::optional<double> bound_state_energy(const PointInteraction& k) {
  require_regime_supported(k.params);
  if (k.is_friedrichs()) return std::nullopt;
  const double s = k.params.s;
  const double a = *k.alpha;
  if (k.params.d == 3) {
    if (a >= 0.0) return std::nullopt;
    const double base = 2.0 * pi * std::abs(a) * s * sin_pi(-3.0 / s);
    return -std::pow(base, s / (3.0 - s));
  }
  if (s == 1.0) return -std::exp(-pi * a);
  if ((s - 1.0) * a <= 0.0) return std::nullopt;
  const double base = a * s * sin_pi(1.0 / s);  // positive iff (s-1) alpha > 0
  return -std::pow(base, s / (1.0 - s));
}

}  // namespace fraclab
