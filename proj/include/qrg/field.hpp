#pragma once

// Scalar fields: the Laplacian, its determinant, the Schroedinger march with
// its continuum reference, and Gaussian field theory on A_n.

#include "curvature.hpp"
#include "solver.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrg {

// ---------------------------------------------------------------------------
// dense matrices

template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, ratio<F>(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = ratio<F>(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  F& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const F& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  /// Drops the last row and column.
  Matrix leading(int k) const {
    Matrix m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& x : a_) m = std::max(m, std::abs(to_double(x)));
    return m;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
    return r;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<F> a_;
};

namespace detail {

template <class F>
bool all_exact(const Matrix<F>& m) {
  if constexpr (std::is_same_v<F, Rational>) {
    return true;
  } else if constexpr (std::is_same_v<F, Scalar>) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (m(i, j).mode() != Mode::Exact) return false;
    return true;
  } else {
    return false;
  }
}

/// Fraction-free (Bareiss) elimination.
template <class F>
F det_bareiss(Matrix<F> m) {
  const int n = m.rows();
  F prev = ratio<F>(1);
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (is_zero(m(k, k))) {
      int p = k + 1;
      while (p < n && is_zero(m(p, k))) ++p;
      if (p == n) return ratio<F>(0);
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

template <class F>
F det_pivot(Matrix<F> m) {
  const int n = m.rows();
  F det = ratio<F>(1);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(to_double(m(i, k))) > std::abs(to_double(m(p, k)))) p = i;
    if (is_zero(m(p, k))) return ratio<F>(0);
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      det = -det;
    }
    det = det * m(k, k);
    for (int i = k + 1; i < n; ++i) {
      F f = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) = m(i, j) - f * m(k, j);
    }
  }
  return det;
}

}  // namespace detail

/// Fraction-free elimination for exact entries, partial pivoting otherwise.
template <class F>
F determinant(const Matrix<F>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() == 0) return ratio<F>(1);
  return detail::all_exact(m) ? detail::det_bareiss(m) : detail::det_pivot(m);
}

struct SingularAction : std::domain_error {
  using std::domain_error::domain_error;
};

/// Gauss-Jordan inverse with partial pivoting (exact pivots for exact entries).
template <class F>
Matrix<F> inverse(Matrix<F> m, double tol = kDefaultTol) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  auto inv = Matrix<F>::identity(n);
  const double scale = std::max(m.max_abs(), 1.0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(to_double(m(i, k))) > std::abs(to_double(m(p, k)))) p = i;
    if (negligible(m(p, k), tol * scale)) throw SingularAction("singular action matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(m(k, j), m(p, j));
      std::swap(inv(k, j), inv(p, j));
    }
    F piv = m(k, k);
    for (int j = 0; j < n; ++j) {
      m(k, j) = m(k, j) / piv;
      inv(k, j) = inv(k, j) / piv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || is_zero(m(i, k))) continue;
      F f = m(i, k);
      for (int j = 0; j < n; ++j) {
        m(i, j) = m(i, j) - f * m(k, j);
        inv(i, j) = inv(i, j) - f * inv(k, j);
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Laplacian

template <class F>
struct LaplacianData {
  Matrix<F> L;             // box f = (L f) beta^{-1}
  std::vector<F> beta_inv;
  Matrix<F> composite;     // box itself
};

/// Box f = ( , ) nabla d f assembled row by row: boundary rows carry
/// (tau_1 + 1)/(h_1 phi_1) and (tau'_{N-1} + 1)/h_{N-1}, interior rows
/// (tau'_{i-1} + 1, tau_i + 1) times 1/h_{i-1} + 1/(h_i phi_i).
template <class F>
LaplacianData<F> laplacian(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c) {
  const int N = lat.N;
  const F one = ratio<F>(1);
  LaplacianData<F> out{Matrix<F>(N, N), {}, Matrix<F>(N, N)};
  auto& L = out.L;
  for (int i = 1; i <= N; ++i) {
    const int r = i - 1;
    if (i == 1) {
      F a = (c.tau_at(1) + one) / g.phi_at(1);
      L(r, 0) = a;
      if (N > 1) L(r, 1) = -a;
      out.beta_inv.push_back(one / g.h_at(1));
    } else if (i == N) {
      F a = c.taup_at(N - 1) + one;
      L(r, N - 1) = a;
      L(r, N - 2) = -a;
      out.beta_inv.push_back(one / g.h_at(N - 1));
    } else {
      F lo = c.taup_at(i - 1) + one, hi = c.tau_at(i) + one;
      L(r, i - 2) = -lo;
      L(r, i - 1) = lo + hi;
      L(r, i) = -hi;
      out.beta_inv.push_back(one / g.h_at(i - 1) + one / g.f(i));
    }
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out.composite(i, j) = L(i, j) * out.beta_inv[i];
  return out;
}

/// ( , ) nabla d f evaluated through the tensor calculus, as a matrix acting on f.
template <class F>
Matrix<F> laplacian_oracle(const Lattice& lat, const QuantumMetric<F>& g, const ConnectionCoeffs<F>& c,
                           PairingConvention conv = PairingConvention::Direct) {
  const int N = lat.N;
  Matrix<F> m(N, N);
  for (int j = 1; j <= N; ++j) {
    auto box = contract_first(g, nabla(lat, c, d(lat, delta<F>(j))), conv);
    for (int i = 1; i <= N; ++i) m(i - 1, j - 1) = box.coeff({i});
  }
  return m;
}

template <class F>
std::vector<F> apply(const Matrix<F>& m, const std::vector<F>& f) {
  std::vector<F> r(m.rows(), ratio<F>(0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i] += m(i, j) * f[j];
  return r;
}

// ---------------------------------------------------------------------------
// det(L)

struct DetL {
  double closed_form;  // 4/((2)_q (n-1)_q!) prod_{i=1}^{n-2} ((i+1)_q + (-1)^i), or 0 for s = -1
  double direct;       // determinant of the assembled L
  double minor2;       // twice the leading (n-1)x(n-1) principal minor of L
};

inline double det_L_closed_form(int n, int s) {
  if (s == -1) return 0.0;
  QContext q(n);
  double p = 1;
  for (int i = 1; i <= n - 2; ++i) p *= qint(q, i + 1) + ((i % 2) ? -1.0 : 1.0);
  return 4.0 / (qint(q, 2) * qfactorial(q, n - 1)) * p;
}

inline DetL det_L(int n, int s) {
  if (n < 2) throw std::invalid_argument("det_L needs n >= 2");
  auto lat = Lattice::An(n);
  auto [g, c] = canonical_connection<double>(lat, std::vector<double>(n - 1, 1.0), s);
  auto L = laplacian(lat, g, c).L;
  return {det_L_closed_form(n, s), determinant(L), 2 * determinant(L.leading(n - 1))};
}

// ---------------------------------------------------------------------------
// Schroedinger march on the half-line

enum class MarchMetric { Constant, Flat };

inline const char* to_string(MarchMetric m) { return m == MarchMetric::Constant ? "constant" : "flat"; }

struct ZeroPivot : std::domain_error {
  int index;
  explicit ZeroPivot(int i)
      : std::domain_error("forward coefficient vanishes at i=" + std::to_string(i)), index(i) {}
};

/// h_i = eps^2 (constant) or the s = 1 flat metric with h_1 = eps^3.
inline std::vector<double> march_metric(MarchMetric kind, double eps, int N) {
  if (kind == MarchMetric::Constant) return std::vector<double>(N - 1, eps * eps);
  return flat_metric_closed_form<double>(N, 1, eps * eps * eps);
}

struct MarchResult {
  std::vector<double> x;  // eps i
  std::vector<double> f;
  std::vector<double> h;
};

/// Solves box f = 4mE f forward from f(1) = 1 - alpha, f(2) = 1 - 2 alpha with
/// alpha = 4mE h_1/(1 + 4mE h_1); row i fixes f(i+1).
inline MarchResult schrodinger_march(double mE, double eps, int N, MarchMetric kind, int s = 1) {
  if (N < 3) throw std::invalid_argument("march needs N >= 3");
  auto lat = Lattice::HalfLine(N + 1);
  auto h = march_metric(kind, eps, N + 1);
  auto [g, c] = canonical_connection<double>(lat, h, s);
  const double k = 4 * mE;
  MarchResult out;
  out.h = h;
  double alpha = k * h[0] / (1 + k * h[0]);
  std::vector<double> f{1 - alpha, 1 - 2 * alpha};
  for (int i = 2; i < N; ++i) {
    double fwd = c.tau_at(i) + 1;
    if (std::abs(fwd) < 1e-300) throw ZeroPivot(i);
    double beta_inv = 1 / g.h_at(i - 1) + 1 / g.f(i);
    double fi = f[i - 1], fm = f[i - 2];
    f.push_back(fi + ((fi - fm) * (c.taup_at(i - 1) + 1) - k * fi / beta_inv) / fwd);
  }
  for (int i = 1; i <= N; ++i) out.x.push_back(eps * i);
  out.f = std::move(f);
  return out;
}

enum class ReferenceEquation {
  Airy,      // f'' = -4mE x f
  ConstantH  // f'' = -2mE (1 + eps/(2x)) f
};

/// Integrates the continuum reference from (x0, f0, f0p) and samples it on an
/// ascending grid (all points >= x0).
inline std::vector<double> airy_reference(ReferenceEquation eq, double mE, const std::vector<double>& grid, double f0,
                                          double f0p, double eps = 0.0, double x0 = 0.0, double tol = 1e-12) {
  using State = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  if (eq == ReferenceEquation::ConstantH && eps > 0 && !(x0 > 0))
    throw std::invalid_argument("constant-h reference with eps > 0 must start at x0 > 0");
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (grid[k] < x0 || (k && grid[k] < grid[k - 1])) throw std::invalid_argument("grid must be ascending and >= x0");
  auto rhs = [&](const State& y, State& dy, double x) {
    double w = eq == ReferenceEquation::Airy ? 4 * mE * x : 2 * mE * (1 + (eps > 0 ? eps / (2 * x) : 0.0));
    dy[0] = y[1];
    dy[1] = -w * y[0];
  };
  std::vector<double> times{x0};
  times.insert(times.end(), grid.begin(), grid.end());
  std::vector<double> out;
  State y{f0, f0p};
  auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), 1e-3,
                       [&](const State& s, double) { out.push_back(s[0]); });
  out.erase(out.begin());  // the x0 sample
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian field theory

template <class F>
struct ActionSpec {
  std::vector<F> mu;  // per vertex
  F m2;
  F alpha = ratio<F>(1);
};

/// mu_i = h_i on vertices 1..n-1 and mu_n = h_{n-1}.
template <class F>
std::vector<F> default_mu(const QuantumMetric<F>& g) {
  std::vector<F> mu(g.h);
  mu.push_back(g.h.back());
  return mu;
}

/// B_ij = mu_i (box - m^2)_ij.
template <class F>
Matrix<F> action_matrix(const LaplacianData<F>& lap, const ActionSpec<F>& spec) {
  const int N = lap.composite.rows();
  if (static_cast<int>(spec.mu.size()) != N) throw std::invalid_argument("mu needs one weight per vertex");
  Matrix<F> B(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) B(i, j) = spec.mu[i] * (lap.composite(i, j) - (i == j ? spec.m2 : ratio<F>(0)));
  return B;
}

/// <psi_i psibar_j> := (B^{-1})_{ij}, coupling and factors of i absorbed. 1-based.
template <class F>
F gaussian_correlator(const Matrix<F>& B, int i, int j, double tol = kDefaultTol) {
  return inverse(B, tol)(i - 1, j - 1);
}

inline constexpr const char* kCorrelatorNormalization = "(B^-1)_ij, alpha and factors of i absorbed";

}  // namespace qrg
