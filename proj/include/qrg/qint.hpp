#pragma once

#include "scalar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qrg {

/// q = exp(i pi/(n+1)); only the real sine ratios are ever needed.
struct QContext {
  int n;

  explicit QContext(int n_) : n(n_) {
    if (n < 1) throw std::invalid_argument("QContext: n must be positive");
  }
  double angle() const { return std::numbers::pi / (n + 1); }
};

/// Symmetric q-integer (i)_q = sin(i pi/(n+1)) / sin(pi/(n+1)).
inline double qint(const QContext& ctx, int i) {
  if (i < 0 || i > ctx.n + 1) throw std::out_of_range("qint: index " + std::to_string(i) + " outside [0, n+1]");
  if (i == 1 || i == ctx.n) return 1.0;  // exact by symmetry of the sine
  if (i == 0 || i == ctx.n + 1) return 0.0;
  return std::sin(i * ctx.angle()) / std::sin(ctx.angle());
}

/// (1)_q (2)_q ... (i)_q, empty product 1.
inline double qfactorial(const QContext& ctx, int i) {
  if (i < 0 || i > ctx.n) throw std::out_of_range("qfactorial: index " + std::to_string(i) + " outside [0, n]");
  double p = 1.0;
  for (int k = 1; k <= i; ++k) p *= qint(ctx, k);
  return p;
}

struct DegenerateSequence : std::domain_error {
  int index;
  explicit DegenerateSequence(int i)
      : std::domain_error("degenerate direction-coefficient sequence at index " + std::to_string(i)), index(i) {}
};

/// phi_i for phi_1 = x as a ratio of Chebyshev-U values: U_i(x/2) / U_{i-1}(x/2).
template <class F>
F phi_closed_form(const F& x, int i, double tol = kDefaultTol) {
  if (i < 1) throw std::out_of_range("phi_closed_form: i must be >= 1");
  F prev = ratio<F>(1);  // U_0
  F cur = x;             // U_1
  for (int k = 1; k < i; ++k) {
    if (negligible(cur, tol)) throw DegenerateSequence(k);
    F next = x * cur - prev;
    prev = cur;
    cur = next;
  }
  if (negligible(prev, tol)) throw DegenerateSequence(i - 1);
  return cur / prev;
}

}  // namespace qrg
