#pragma once

// Einstein-Hilbert action and the three-point quantum-gravity moments <rho^m>.

#include "curvature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qrg {

/// S[h] = sum_i mu_i S(i).
template <class F>
F eh_action(const std::vector<F>& scalar, const std::vector<F>& mu) {
  if (scalar.size() != mu.size()) throw std::invalid_argument("eh_action: one weight per vertex");
  F s = ratio<F>(0);
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu[i] * scalar[i];
  return s;
}

template <class F>
F eh_action(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c, const std::vector<F>& mu) {
  return eh_action(ricci_scalar_local(lat, g, c), mu);
}

/// Weight exp((c/rho - rho)/G) on [cutoff, inf), or [cutoff, 1) when truncated.
struct GravityModel {
  double c;
  double G;
  double cutoff_eps = 0;
  bool truncate_rho_lt_1 = false;

  void validate() const {
    if (!(G > 0)) throw std::invalid_argument("gravity model needs G > 0");
    if (cutoff_eps < 0) throw std::invalid_argument("cutoff must be non-negative");
    if (truncate_rho_lt_1 && cutoff_eps >= 1) throw std::invalid_argument("cutoff must lie below 1");
  }
};

struct DivergentMoment : std::domain_error {
  using std::domain_error::domain_error;
};

inline constexpr double kQuadTol = 1e-9;

namespace detail {

/// Adaptive G7-K15 piecewise over the cut points. Pieces whose endpoints both
/// sit far below the peak are skipped: log_w is unimodal, so they hold nothing.
template <class Fn, class LogFn>
double integrate_pieces(Fn f, LogFn log_w, const std::vector<double>& cuts, double floor, double tol) {
  double sum = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (!(cuts[k + 1] > cuts[k])) continue;
    if (log_w(cuts[k]) < floor && log_w(cuts[k + 1]) < floor) continue;
    sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, cuts[k], cuts[k + 1], 15, tol);
  }
  return sum;
}

/// Breakpoints a, ..., b: powers of two around the peak down to the lower
/// limit and up to where the integrand is below 1e-16 of its maximum. A
/// boundary layer of width `layer` at a gets its own geometric ladder.
template <class Fn>
std::vector<double> breakpoints(Fn log_w, double a, double peak, double b_max, double layer = 0) {
  std::vector<double> cuts;
  if (layer > 0 && peak == a) {
    for (double d = layer; a + d < 2 * a && a + d < b_max; d *= 2) cuts.push_back(a + d);
  }
  const double lw_peak = log_w(peak);
  const double floor = lw_peak + std::log(1e-16);
  double lo = peak;
  std::vector<double> below;
  while (lo / 2 > a && lo > 1e-300) {
    lo /= 2;
    below.push_back(lo);
    if (log_w(lo) < floor - 50) break;
  }
  cuts.insert(cuts.begin(), a);
  for (auto it = below.rbegin(); it != below.rend(); ++it) cuts.push_back(*it);
  if (peak > a) cuts.push_back(peak);
  double hi = cuts.back() > peak ? cuts.back() : peak;
  if (hi <= 0) hi = 1;
  while (hi < b_max) {
    hi = std::min(hi * 2, b_max);
    cuts.push_back(hi);
    if (log_w(hi) < floor) break;
  }
  return cuts;
}

}  // namespace detail

/// Normalisation-free integral of rho^m exp((c/rho - rho)/G) over the model's
/// domain, scaled by exp(-max exponent). Only ratios are meaningful.
inline double scaled_moment_integral(const GravityModel& M, int m, double tol = kQuadTol) {
  M.validate();
  if (M.c > 0 && M.cutoff_eps <= 0) throw DivergentMoment("c > 0 needs a cutoff at small rho");
  const double a = M.cutoff_eps;
  const double b = M.truncate_rho_lt_1 ? 1.0 : std::numeric_limits<double>::infinity();
  auto expo = [&](double r) { return (M.c / r - r) / M.G; };
  // exponent maximum: at sqrt(-c) for c < 0, otherwise at the lower limit
  double peak = M.c < 0 ? std::sqrt(-M.c) : a;
  peak = std::clamp(peak, a, std::isfinite(b) ? b : peak);
  if (peak <= 0) peak = std::min(1.0, b);
  const double shift = expo(std::max(peak, std::numeric_limits<double>::min()));
  auto log_w = [&](double r) { return r > 0 ? expo(r) - shift + m * std::log(r) : -1e300; };
  auto w = [&](double r) { return r > 0 ? std::exp(log_w(r)) : 0.0; };
  // decay length of the weight at the lower limit, from d/drho log w
  const double slope = a > 0 ? std::abs((-M.c / (a * a) - 1) / M.G + m / a) : 0;
  auto cuts = detail::breakpoints(log_w, a, std::max(peak, a), b, slope > 0 ? 1 / slope : 0);
  if (std::isfinite(b) && cuts.back() < b) cuts.push_back(b);
  const double floor = log_w(std::max(peak, a)) + std::log(1e-16) - 10;
  return detail::integrate_pieces(w, log_w, cuts, floor, tol);
}

/// K_nu(z) e^z from the representation int_0^inf exp(-z (cosh t - 1)) cosh(nu t) dt.
inline double bessel_k_scaled(double nu, double z, double tol = kQuadTol) {
  if (!(z > 0)) throw std::invalid_argument("bessel_k_scaled: z > 0");
  auto f = [&](double t) { return std::exp(-z * (std::cosh(t) - 1)) * std::cosh(nu * t); };
  // cutoff where z (cosh t - 1) - |nu| t exceeds 40
  double t_max = 1;
  while (z * (std::cosh(t_max) - 1) - std::abs(nu) * t_max < 40) t_max *= 1.5;
  std::vector<double> cuts{0};
  for (double t = t_max / 64; t < t_max; t *= 2) cuts.push_back(t);
  cuts.push_back(t_max);
  auto log_f = [&](double t) { return -z * (std::cosh(t) - 1) + std::abs(nu) * t; };
  return detail::integrate_pieces(f, log_f, cuts, -60.0, tol);
}

struct MomentResult {
  double value;                   // quadrature ratio
  std::optional<double> bessel;   // closed form through K_nu, when the domain is (0, inf) and c < 0
};

/// <rho^m> = int w rho^m / int w.
inline MomentResult rho_moment(const GravityModel& M, int m, double tol = kQuadTol) {
  double num = scaled_moment_integral(M, m, tol);
  double den = m == 0 ? num : scaled_moment_integral(M, 0, tol);
  MomentResult r{num / den, std::nullopt};
  if (M.c < 0 && M.cutoff_eps == 0 && !M.truncate_rho_lt_1) {
    // int rho^m e^{-(a/rho + b rho)} = 2 (a/b)^{(m+1)/2} K_{m+1}(2 sqrt(ab}), a = -c/G, b = 1/G
    double z = 2 * std::sqrt(-M.c) / M.G;
    r.bessel = std::pow(-M.c, m / 2.0) * bessel_k_scaled(m + 1, z, tol) / bessel_k_scaled(1, z, tol);
  }
  return r;
}

struct UncertaintyRow {
  double G;
  double mean;      // <rho>
  double second;    // <rho^2>
  double ratio;     // <rho^2>/<rho>^2
  double relative;  // sqrt(<rho^2> - <rho>^2)/<rho>
};

inline std::vector<UncertaintyRow> relative_uncertainty(GravityModel M, const std::vector<double>& Gs,
                                                        double tol = kQuadTol) {
  std::vector<UncertaintyRow> rows;
  for (double G : Gs) {
    M.G = G;
    double m1 = rho_moment(M, 1, tol).value, m2 = rho_moment(M, 2, tol).value;
    rows.push_back({G, m1, m2, m2 / (m1 * m1), std::sqrt(std::max(m2 - m1 * m1, 0.0)) / m1});
  }
  return rows;
}

/// The positive kernel constant 24 + 17 sqrt 2.
inline double kernel_constant_positive() { return 24 + 17 * std::sqrt(2.0); }

}  // namespace qrg
