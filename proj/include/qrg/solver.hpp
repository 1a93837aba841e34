#pragma once

// Quantum metrics and quantum Levi-Civita connections on A_n and the truncated half-line.

#include "calculus.hpp"
#include "qint.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qrg {

// ---------------------------------------------------------------------------
// metric

/// g = sum_i h_i (phi_i a_i (x) a'_i + eps a'_i (x) a_i). Vectors are 0-based
/// storage for the 1-based edge index i = 1..N-1.
template <class F>
struct QuantumMetric {
  std::vector<F> h;
  std::vector<F> phi;
  int eps = 1;

  int edges() const { return static_cast<int>(h.size()); }
  const F& h_at(int i) const { return h.at(i - 1); }
  const F& phi_at(int i) const { return phi.at(i - 1); }
  F f(int i) const { return h_at(i) * phi_at(i); }             // weight of i -> i+1
  F fp(int i) const { return eps > 0 ? h_at(i) : -h_at(i); }  // weight of i+1 -> i

  bool physical() const {
    if (eps != 1) return false;
    for (int i = 1; i <= edges(); ++i)
      if (!(to_double(h_at(i)) > 0) || !(to_double(phi_at(i)) > 0)) return false;
    return true;
  }
};

template <class F>
TensorElement<F> metric_element(const QuantumMetric<F>& g) {
  TensorElement<F> t(Degree::TwoTensor);
  for (int i = 1; i <= g.edges(); ++i) {
    t.add({i, i + 1, i}, g.f(i));
    t.add({i + 1, i, i + 1}, g.fp(i));
  }
  return t;
}

/// Direct: (a_i, a'_i) = 1/(h_i phi_i), (a'_i, a_i) = 1/(eps h_i); this is the
/// pairing behind the Laplacian and Ricci-scalar formulas.
/// Strict: the two values swapped, which is the bimodule inverse of g.
enum class PairingConvention { Direct, Strict };

/// (w, eta) for the 2-step path w (x) eta = x -> y -> x, as a value at x.
template <class F>
F pairing_value(const QuantumMetric<F>& g, int x, int y, PairingConvention conv = PairingConvention::Direct) {
  bool up = (y == x + 1);
  int i = up ? x : y;
  bool use_f = (conv == PairingConvention::Direct) ? up : !up;
  return ratio<F>(1) / (use_f ? g.f(i) : g.fp(i));
}

/// Contracts the first two arrows of every path with the pairing.
template <class F>
TensorElement<F> contract_first(const QuantumMetric<F>& g, const TensorElement<F>& x,
                                PairingConvention conv = PairingConvention::Direct) {
  Degree out;
  switch (x.degree()) {
    case Degree::TwoTensor: out = Degree::Fn; break;
    case Degree::ThreeTensor: out = Degree::One; break;
    default: throw std::invalid_argument("contract_first: needs a 2- or 3-tensor");
  }
  TensorElement<F> r(out);
  for (const auto& [p, c] : x.terms()) {
    if (p[0] != p[2]) continue;
    r.add(p.slice(2, p.size() - 2), c * pairing_value(g, p[0], p[1], conv));
  }
  return r;
}

/// Contracts the last two arrows: (id (x) ( , )).
template <class F>
TensorElement<F> contract_last(const QuantumMetric<F>& g, const TensorElement<F>& x,
                               PairingConvention conv = PairingConvention::Direct) {
  if (x.degree() != Degree::ThreeTensor) throw std::invalid_argument("contract_last: needs a 3-tensor");
  TensorElement<F> r(Degree::One);
  for (const auto& [p, c] : x.terms()) {
    if (p[1] != p[3]) continue;
    r.add(p.slice(0, 2), c * pairing_value(g, p[1], p[2], conv));
  }
  return r;
}

// ---------------------------------------------------------------------------
// connection coefficients

template <class F>
struct ConnectionCoeffs {
  F s;
  std::vector<F> tau;      // tau_i,   i = 1..N-1
  std::vector<F> tau_p;    // tau'_i,  i = 1..N-1
  std::vector<F> sigma;    // sigma_i, i = 1..N-2
  std::vector<F> sigma_p;  // sigma'_i, i = 2..N-1

  // out-of-range indices read as 0, which is how boundary terms drop out
  F tau_at(int i) const { return get(tau, i - 1); }
  F taup_at(int i) const { return get(tau_p, i - 1); }
  F sigma_at(int i) const { return get(sigma, i - 1); }
  F sigmap_at(int i) const { return get(sigma_p, i - 2); }

 private:
  static F get(const std::vector<F>& v, int k) {
    return (k >= 0 && k < static_cast<int>(v.size())) ? v[k] : ratio<F>(0);
  }
};

struct SingularRecursion : std::domain_error {
  int index;
  std::string which;
  SingularRecursion(int i, std::string w)
      : std::domain_error("singular recursion at i=" + std::to_string(i) + " (" + w + " vanishes)"),
        index(i),
        which(std::move(w)) {}
};

/// phi_{i+1} = phi_1 - 1/phi_i. A zero at the final index is allowed (it is the
/// A_n admissibility signal); earlier zeros throw.
template <class F>
std::vector<F> phi_sequence(const F& phi1, int len, double tol = kDefaultTol) {
  if (negligible(phi1, tol)) throw DegenerateSequence(1);
  std::vector<F> out{phi1};
  for (int i = 1; i < len; ++i) {
    if (negligible(out.back(), tol)) throw DegenerateSequence(i);
    out.push_back(phi1 - ratio<F>(1) / out.back());
  }
  return out;
}

struct AdmissiblePhi {
  int j;                  // phi_1 = 2 cos(j pi/(n+1))
  double phi1;
  std::vector<double> phi;  // phi_1..phi_{n-1}
  bool canonical;         // the all-positive solution
};

/// Initial values 2cos(j pi/(n+1)), j = 1..n, whose iteration reaches
/// phi_n = 0 with no earlier zero. j and n+1-j give the sign-alternate pair.
inline std::vector<AdmissiblePhi> admissible_phi1(int n, double tol = 1e-9) {
  if (n < 2) throw std::invalid_argument("admissible_phi1: n >= 2");
  std::vector<AdmissiblePhi> out;
  for (int j = 1; j <= n; ++j) {
    double x = 2 * std::cos(j * std::numbers::pi / (n + 1));
    try {
      auto seq = phi_sequence(x, n, tol);
      if (std::abs(seq.back()) > tol) continue;
      seq.pop_back();
      bool all_pos = std::all_of(seq.begin(), seq.end(), [](double v) { return v > 0; });
      out.push_back({j, x, seq, all_pos});
    } catch (const DegenerateSequence&) {
    }
  }
  return out;
}

/// Solves the recursions for a given metric and tau_1 = s.
template <class F>
ConnectionCoeffs<F> solve_connection(const Lattice& lat, const QuantumMetric<F>& g, const F& s,
                                     double tol = kDefaultTol) {
  const int N = lat.N;
  if (g.edges() != N - 1 || static_cast<int>(g.phi.size()) != N - 1)
    throw std::invalid_argument("metric size does not match lattice");
  if (negligible(s, tol)) throw SingularRecursion(1, "tau_1");
  const F one = ratio<F>(1);
  const F e = ratio<F>(g.eps);

  for (int i = 1; i + 1 <= N - 1; ++i) {
    F expect = g.phi_at(1) - one / g.phi_at(i);
    if (!negligible(F(expect - g.phi_at(i + 1)), tol))
      throw std::invalid_argument("direction coefficients violate the recursion at i=" + std::to_string(i));
  }
  // phi_N: zero on A_n, the next term of the iteration on the half-line
  F phiN = lat.half_line() ? F(g.phi_at(1) - one / g.phi_at(N - 1)) : ratio<F>(0);
  auto phi = [&](int i) -> F { return i == N ? phiN : g.phi_at(i); };

  ConnectionCoeffs<F> c;
  c.s = s;
  c.tau.push_back(s);
  for (int i = 1; i + 1 <= N - 1; ++i) {
    F den = phi(i) + e * c.tau.back();
    if (negligible(den, tol)) throw SingularRecursion(i, "phi_i + eps tau_i");
    c.tau.push_back(-one + phi(i + 1) / den);
  }
  for (int i = 1; i <= N - 1; ++i) {
    if (negligible(c.tau[i - 1], tol)) throw SingularRecursion(i, "tau_i");
    c.tau_p.push_back(e * (phi(i) - phi(i + 1)) / c.tau[i - 1]);
  }
  for (int i = 1; i <= N - 2; ++i) {
    F den = g.h_at(i) * phi(i) * (one + c.tau_p[i - 1]);
    if (negligible(den, tol)) throw SingularRecursion(i, "1 + tau'_i");
    c.sigma.push_back(g.h_at(i + 1) * phi(i + 1) / den);
  }
  for (int i = 2; i <= N - 1; ++i)
    c.sigma_p.push_back(g.h_at(i - 1) * (phi(i - 1) + e * c.tau[i - 2]) / (g.h_at(i) * phi(i)));
  return c;
}

namespace detail {

/// (i)_q in the field F; rational where the value is forced (i = 0, 1, n, n+1).
template <class F>
F qint_in(const Lattice& lat, int i) {
  if (lat.half_line()) return ratio<F>(i);  // q -> 1 limit
  const int n = lat.N;
  if (i == 1 || i == n) return ratio<F>(1);
  if (i == 0 || i == n + 1) return ratio<F>(0);
  return field<F>::from_double(qint(QContext(n), i));
}

}  // namespace detail

/// Canonical geometry: phi_i = (i+1)_q/(i)_q, tau_i = s(-1)^{i-1}/(i)_q,
/// tau'_i = -tau_{i+1}, sigma_i = (h_{i+1}/h_i)(1+tau_{i+1}),
/// sigma'_i = (h_{i-1}/h_i)/(1+tau_i). On the half-line (i)_q = i.
template <class F>
std::pair<QuantumMetric<F>, ConnectionCoeffs<F>> canonical_connection(const Lattice& lat, const std::vector<F>& h,
                                                                        int s) {
  const int N = lat.N;
  if (s != 1 && s != -1) throw std::invalid_argument("canonical connection needs s = +-1");
  if (static_cast<int>(h.size()) != N - 1) throw std::invalid_argument("need N-1 edge weights");
  for (const auto& x : h)
    if (is_zero(x)) throw std::invalid_argument("edge weights must be nonzero");
  const F one = ratio<F>(1);

  std::vector<F> qi(N + 2);
  for (int i = 0; i <= N + 1; ++i) qi[i] = detail::qint_in<F>(lat, i);

  QuantumMetric<F> g;
  g.h = h;
  g.eps = 1;
  for (int i = 1; i <= N - 1; ++i) g.phi.push_back(qi[i + 1] / qi[i]);

  auto tau = [&](int i) { return ratio<F>(((i - 1) % 2 == 0) ? s : -s) / qi[i]; };
  ConnectionCoeffs<F> c;
  c.s = ratio<F>(s);
  for (int i = 1; i <= N - 1; ++i) {
    c.tau.push_back(tau(i));
    c.tau_p.push_back(-tau(i + 1));
  }
  for (int i = 1; i <= N - 2; ++i) c.sigma.push_back(h[i] / h[i - 1] * (one + tau(i + 1)));
  for (int i = 2; i <= N - 1; ++i) c.sigma_p.push_back(h[i - 2] / h[i - 1] / (one + tau(i)));
  return {g, c};
}

// ---------------------------------------------------------------------------
// braiding and connection

/// sigma on one composable 2-step path.
template <class F>
TensorElement<F> braid_path(const Lattice& lat, const ConnectionCoeffs<F>& c, const Path& p) {
  const int x = p[0], y = p[1], z = p[2];
  const F one = ratio<F>(1);
  TensorElement<F> r(Degree::TwoTensor);
  if (y == x + 1 && z == y + 1) {
    r.add(p, c.sigma_at(x));
  } else if (y == x - 1 && z == y - 1) {
    r.add(p, c.sigmap_at(x - 1));
  } else if (y == x + 1 && z == x) {  // a_x (x) a'_x
    r.add(p, c.tau_at(x));
    if (x >= 2) r.add({x, x - 1, x}, one + c.tau_at(x));
  } else if (y == x - 1 && z == x) {  // a'_{x-1} (x) a_{x-1}
    r.add(p, c.taup_at(x - 1));
    if (x <= lat.N - 1) r.add({x, x + 1, x}, one + c.taup_at(x - 1));
  } else {
    throw std::invalid_argument("braid_path: not a composable 2-step path");
  }
  return r;
}

template <class F>
TensorElement<F> braiding(const Lattice& lat, const ConnectionCoeffs<F>& c, const TensorElement<F>& x) {
  if (x.degree() != Degree::TwoTensor) throw std::invalid_argument("braiding acts on 2-tensors");
  TensorElement<F> r(Degree::TwoTensor);
  for (const auto& [p, k] : x.terms()) r += k * braid_path(lat, c, p);
  return r;
}

/// sigma on the first two factors of a 3-tensor.
template <class F>
TensorElement<F> braiding12(const Lattice& lat, const ConnectionCoeffs<F>& c, const TensorElement<F>& x) {
  if (x.degree() != Degree::ThreeTensor) throw std::invalid_argument("braiding12 acts on 3-tensors");
  TensorElement<F> r(Degree::ThreeTensor);
  for (const auto& [p, k] : x.terms()) {
    auto b = braid_path(lat, c, p.slice(0, 3));
    for (const auto& [q, v] : b.terms()) r.add(q.join(p.slice(2, 2)), k * v);
  }
  return r;
}

/// Inner form of the connection: nabla w = theta (x) w - sigma(w (x) theta).
template <class F>
TensorElement<F> nabla(const Lattice& lat, const ConnectionCoeffs<F>& c, const TensorElement<F>& w) {
  if (w.degree() != Degree::One) throw std::invalid_argument("nabla acts on 1-forms");
  auto th = theta<F>(lat);
  return tensor(th, w) - braiding(lat, c, tensor(w, th));
}

/// nabla(w (x) eta) = nabla w (x) eta + sigma_12 (w (x) nabla eta).
template <class F>
TensorElement<F> nabla2(const Lattice& lat, const ConnectionCoeffs<F>& c, const TensorElement<F>& x) {
  if (x.degree() != Degree::TwoTensor) throw std::invalid_argument("nabla2 acts on 2-tensors");
  TensorElement<F> r(Degree::ThreeTensor);
  for (const auto& [p, k] : x.terms()) {
    auto w = TensorElement<F>::basis(Degree::One, p.slice(0, 2));
    auto eta = TensorElement<F>::basis(Degree::One, p.slice(1, 2));
    r += k * tensor(nabla(lat, c, w), eta);
    r += k * braiding12(lat, c, tensor(w, nabla(lat, c, eta)));
  }
  return r;
}

// ---------------------------------------------------------------------------
// verifiers

/// Norm of a residual, leaving out terms that touch the cut end of a truncated half-line.
template <class F>
double bulk_norm(const Lattice& lat, const TensorElement<F>& x) {
  if (!lat.half_line()) return x.max_abs();
  return x.max_abs_if([&](const Path& p) { return !p.visits(lat.N); });
}

/// The residual nabla g (zero for a metric-compatible connection).
template <class F>
TensorElement<F> check_metric_compat(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c) {
  return nabla2(lat, c, metric_element(g));
}

/// wedge(nabla a) - d a for every arrow.
template <class F>
std::vector<std::pair<Path, TensorElement<F>>> check_torsion(const Lattice& lat, const ConnectionCoeffs<F>& c) {
  std::vector<std::pair<Path, TensorElement<F>>> out;
  for (const auto& a : arrows(lat)) {
    auto w = TensorElement<F>::basis(Degree::One, a);
    out.emplace_back(a, wedge_reduce(lat, nabla(lat, c, w)) - d(lat, w));
  }
  return out;
}

template <class F>
double torsion_norm(const Lattice& lat, const ConnectionCoeffs<F>& c) {
  double m = 0;
  for (const auto& [a, r] : check_torsion(lat, c)) m = std::max(m, bulk_norm(lat, r));
  return m;
}

struct StarCheck {
  bool preserving;
  double residual;
};

/// nabla(w*) - sigma((nabla w)^dagger) over all arrows; real coefficients.
template <class F>
StarCheck check_star_preserving(const Lattice& lat, const ConnectionCoeffs<F>& c, double tol = kDefaultTol) {
  double m = 0;
  for (const auto& a : arrows(lat)) {
    auto w = TensorElement<F>::basis(Degree::One, a);
    auto lhs = nabla(lat, c, star(w));
    auto rhs = braiding(lat, c, star(nabla(lat, c, w)));
    m = std::max(m, bulk_norm(lat, TensorElement<F>(lhs - rhs)));
  }
  return {m < tol, m};
}

/// ((w, .) (x) id) g - w and (id (x) (., w)) g - w over all arrows.
template <class F>
double metric_inverse_residual(const Lattice& lat, const QuantumMetric<F>& g, PairingConvention conv) {
  auto gm = metric_element(g);
  double m = 0;
  for (const auto& a : arrows(lat)) {
    auto w = TensorElement<F>::basis(Degree::One, a);
    m = std::max(m, TensorElement<F>(contract_first(g, tensor(w, gm), conv) - w).max_abs());
    m = std::max(m, TensorElement<F>(contract_last(g, tensor(gm, w), conv) - w).max_abs());
  }
  return m;
}

struct Residuals {
  double metric = 0;
  double torsion = 0;
  double star = 0;
};

template <class F>
Residuals residuals(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c) {
  Residuals r;
  r.metric = bulk_norm(lat, check_metric_compat(lat, g, c));
  r.torsion = torsion_norm(lat, c);
  r.star = check_star_preserving(lat, c).residual;
  return r;
}

}  // namespace qrg
