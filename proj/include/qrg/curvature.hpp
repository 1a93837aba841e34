#pragma once

// Riemann and Ricci curvature of a bimodule connection, the Ricci scalar, and
// the metrics that make it vanish.

#include "solver.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace qrg {

/// xi1 ^ (rest): wedge the first two arrows of a 3-tensor, keep the third.
template <class F>
TensorElement<F> wedge12(const Lattice& lat, const TensorElement<F>& x) {
  if (x.degree() != Degree::ThreeTensor) throw std::invalid_argument("wedge12 needs a 3-tensor");
  TensorElement<F> r(Degree::TwoFormOne);
  for (const auto& [p, c] : x.terms()) {
    auto [sign, v] = reduce_two_path(lat, p.slice(0, 3));
    if (sign != 0) r.add({v, v - 1, v, p[3]}, sign > 0 ? c : -c);
  }
  return r;
}

/// R(xi) = (d (x) id - id ^ nabla) nabla xi, for a 1-form xi.
template <class F>
TensorElement<F> riemann(const Lattice& lat, const ConnectionCoeffs<F>& c, const TensorElement<F>& xi) {
  TensorElement<F> r(Degree::TwoFormOne);
  auto nx = nabla(lat, c, xi);
  for (const auto& [p, k] : nx.terms()) {
    auto x1 = TensorElement<F>::basis(Degree::One, p.slice(0, 2));
    auto x2 = TensorElement<F>::basis(Degree::One, p.slice(1, 2));
    r += k * tensor(d(lat, x1), x2);
    r -= k * wedge12(lat, tensor(x1, nabla(lat, c, x2)));
  }
  return r;
}

/// R on every arrow.
template <class F>
std::map<Path, TensorElement<F>> riemann_all(const Lattice& lat, const ConnectionCoeffs<F>& c) {
  std::map<Path, TensorElement<F>> out;
  for (const auto& a : arrows(lat)) out.emplace(a, riemann(lat, c, TensorElement<F>::basis(Degree::One, a)));
  return out;
}

/// The two coefficients of R(a_i) on a_i^a'_i (x) a_i and a_i^a'_i (x) a'_{i-1}.
template <class F>
std::pair<F, F> riemann_coeffs_up(const ConnectionCoeffs<F>& c, int i) {
  const F one = ratio<F>(1);
  F c1 = c.tau_at(i) * (c.sigma_at(i - 1) - c.taup_at(i)) + c.sigma_at(i - 1) - c.sigma_at(i) * (c.tau_at(i + 1) + one);
  F c2 = c.tau_at(i) * (c.tau_at(i - 1) - c.sigmap_at(i)) + c.tau_at(i - 1);
  return {c1, c2};
}

/// The two coefficients of R(a'_i) on a'_i^a_i (x) a'_i and a'_i^a_i (x) a_{i+1}.
template <class F>
std::pair<F, F> riemann_coeffs_down(const ConnectionCoeffs<F>& c, int i) {
  const F one = ratio<F>(1);
  F c1 = c.taup_at(i) * (c.sigmap_at(i + 1) - c.tau_at(i)) + c.sigmap_at(i + 1) - c.sigmap_at(i) * (c.taup_at(i - 1) + one);
  F c2 = c.taup_at(i) * (c.taup_at(i + 1) - c.sigma_at(i)) + c.taup_at(i + 1);
  return {c1, c2};
}

/// Closed form of R for arbitrary coefficients.
template <class F>
std::map<Path, TensorElement<F>> riemann_closed_form(const Lattice& lat, const ConnectionCoeffs<F>& c) {
  std::map<Path, TensorElement<F>> out;
  const int N = lat.N;
  for (int i = 1; i <= N - 1; ++i) {
    TensorElement<F> up(Degree::TwoFormOne), down(Degree::TwoFormOne);
    if (i >= 2) {  // a_i ^ a'_i = -b at vertex i
      auto [c1, c2] = riemann_coeffs_up(c, i);
      up.add({i, i - 1, i, i + 1}, -c1);
      up.add({i, i - 1, i, i - 1}, -c2);
    }
    if (i <= N - 2) {  // a'_i ^ a_i = +b at vertex i+1
      auto [c1, c2] = riemann_coeffs_down(c, i);
      down.add({i + 1, i, i + 1, i}, c1);
      down.add({i + 1, i, i + 1, i + 2}, c2);
    }
    out.emplace(Path{i, i + 1}, up);
    out.emplace(Path{i + 1, i}, down);
  }
  return out;
}

/// Ricci = -(( , ) (x) id)(id (x) lift (x) id)(id (x) R) g.
template <class F>
TensorElement<F> ricci(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c,
                       PairingConvention conv = PairingConvention::Direct) {
  TensorElement<F> out(Degree::TwoTensor);
  auto gm = metric_element(g);
  for (const auto& [gp, gc] : gm.terms()) {
    const int x = gp[0], y = gp[1];
    auto R = lift_first(lat, riemann(lat, c, TensorElement<F>::basis(Degree::One, {y, x})));
    for (const auto& [p, k] : R.terms()) {
      if (p[1] != x) continue;  // pair (x->y) with (y->p1) needs p1 = x
      out.add({x, p[2], p[3]}, -(gc * k * pairing_value(g, x, y, conv)));
    }
  }
  return out;
}

/// S = ( , ) Ricci as a vector over vertices 1..N.
template <class F>
std::vector<F> ricci_scalar(const Lattice& lat, const QuantumMetric<F>& g, const TensorElement<F>& ric,
                            PairingConvention conv = PairingConvention::Direct) {
  auto f = contract_first(g, ric, conv);
  std::vector<F> out;
  for (int v = 1; v <= lat.N; ++v) out.push_back(f.coeff({v}));
  return out;
}

template <class F>
std::vector<F> ricci_scalar(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c,
                            PairingConvention conv = PairingConvention::Direct) {
  return ricci_scalar(lat, g, ricci(lat, g, c, conv), conv);
}

/// S(v) = -1/2 [ c1(a'_v)/(h_v phi_v) + c1(a_{v-1})/(eps h_{v-1}) ] (pairing of
/// the Direct convention), read off the closed-form Riemann tensor.
template <class F>
F ricci_scalar_at(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c, int v) {
  F s = ratio<F>(0);
  if (v <= lat.N - 2) s += riemann_coeffs_down(c, v).first / g.f(v);
  if (v - 1 >= 2) s += riemann_coeffs_up(c, v - 1).first / g.fp(v - 1);
  return ratio<F>(-1, 2) * s;
}

template <class F>
std::vector<F> ricci_scalar_local(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c) {
  std::vector<F> out;
  for (int v = 1; v <= lat.N; ++v) out.push_back(ricci_scalar_at(lat, g, c, v));
  return out;
}

// ---------------------------------------------------------------------------
// flat metrics

struct NonSolvable : std::domain_error {
  int vertex;
  explicit NonSolvable(int v)
      : std::domain_error("no edge weight makes the Ricci scalar vanish at vertex " + std::to_string(v)), vertex(v) {}
};

template <class F>
struct FlatMetric {
  std::vector<F> h;
  std::vector<F> scalar;  // S on the solved metric
  double residual = 0;    // max |S| over non-truncated vertices
};

/// Solves S(v) = 0 for h_{v+1}, v = 1..N-2, in turn. S(v) is affine in
/// 1/h_{v+1}, so two evaluations fix it.
template <class F>
FlatMetric<F> flat_metric(const Lattice& lat, int s, const F& h1, double tol = kDefaultTol) {
  const int N = lat.N;
  std::vector<F> h(N - 1, h1);
  auto S_at = [&](int v) {
    auto [g, c] = canonical_connection(lat, h, s);
    return ricci_scalar_at(lat, g, c, v);
  };
  for (int v = 1; v <= N - 2; ++v) {
    h[v] = ratio<F>(1);
    F s1 = S_at(v);  // u = 1
    h[v] = ratio<F>(1, 2);
    F s2 = S_at(v);  // u = 2
    F B = s2 - s1;
    F A = s1 - B;
    if (negligible(A, tol) || negligible(B, tol)) throw NonSolvable(v);
    h[v] = -B / A;
  }
  FlatMetric<F> out;
  out.h = h;
  auto [g, c] = canonical_connection(lat, h, s);
  out.scalar = ricci_scalar_local(lat, g, c);
  for (int v = 1; v <= N; ++v)
    if (!lat.truncated(v)) out.residual = std::max(out.residual, std::abs(to_double(out.scalar[v - 1])));
  return out;
}

/// Half-line flat metrics in closed form. s = 1: h_i = 2(i+1) h_1 for even i,
/// 2 i^2/(i+1) h_1 for odd i. s = -1: (i+1)/2 h_1 for odd i, i^2/(2(i+1)) h_1 for even i.
template <class F>
std::vector<F> flat_metric_closed_form(int N, int s, const F& h1) {
  std::vector<F> h;
  for (int i = 1; i <= N - 1; ++i) {
    bool even = (i % 2 == 0);
    if (s == 1)
      h.push_back(h1 * (even ? ratio<F>(2 * (i + 1)) : ratio<F>(2 * i * i, i + 1)));
    else
      h.push_back(h1 * (even ? ratio<F>(i * i, 2 * (i + 1)) : ratio<F>(i + 1, 2)));
  }
  return h;
}

// ---------------------------------------------------------------------------
// conformal scan

struct ConformalRow {
  int i;
  double x;
  double discrete;   // S(i) on h = h^flat e^psi
  double continuum;  // (3 eps / 8x) e^{-psi} (psi'^2)'
  double observed;   // e^{-psi} psi'' / (2x), the limit the lattice actually approaches
};

/// Conformally rescaled flat half-line metric, h_1 = eps^3, compared with two
/// continuum expressions. psi and its derivatives are supplied by the caller.
inline std::vector<ConformalRow> conformal_scalar_scan(const std::function<double(double)>& psi,
                                                       const std::function<double(double)>& dpsi,
                                                       const std::function<double(double)>& ddpsi, double eps,
                                                       double x_max, int s = 1) {
  if (!(eps > 0) || !(x_max > eps)) throw std::invalid_argument("conformal scan needs 0 < eps < x_max");
  const int N = static_cast<int>(x_max / eps) + 3;
  auto lat = Lattice::HalfLine(N);
  auto h = flat_metric_closed_form<double>(N, s, eps * eps * eps);
  for (int i = 1; i <= N - 1; ++i) h[i - 1] *= std::exp(psi(eps * i));
  auto [g, c] = canonical_connection(lat, h, s);
  auto S = ricci_scalar_local(lat, g, c);
  std::vector<ConformalRow> rows;
  for (int i = 1; i <= N && eps * i <= x_max; ++i) {
    if (lat.truncated(i)) break;
    double x = eps * i;
    double p1 = dpsi(x), p2 = ddpsi(x), w = std::exp(-psi(x));
    rows.push_back({i, x, S[i - 1], 3 * eps / (8 * x) * w * 2 * p1 * p2, w * p2 / (2 * x)});
  }
  return rows;
}

}  // namespace qrg
