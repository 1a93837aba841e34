#pragma once

// Published closed forms and tables, kept verbatim as regression references.
// Computed values are compared against these; nothing in the library uses them.

#include "field.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace qrg::reference {

inline const double kSqrt2 = std::sqrt(2.0);
inline const double kSqrt3 = std::sqrt(3.0);
inline const double kSqrt5 = std::sqrt(5.0);

inline double c(double num, double den) { return 2 * std::cos(num * std::numbers::pi / den); }
inline double sn(double num, double den) { return 2 * std::sin(num * std::numbers::pi / den); }

// ---------------------------------------------------------------------------
// direction coefficients phi_i, listed entries only

struct PhiRow {
  std::string label;
  int n;
  std::vector<double> phi;
  bool regular;  // expected to come out of the recursion
};

inline std::vector<PhiRow> phi_table() {
  const double r7a = c(1, 7), r7b = c(2, 7);
  const double s7p = std::sqrt(2 + kSqrt2), s7q = std::sqrt(1 + 1 / kSqrt2), s7r = std::sqrt(4 - 2 * kSqrt2);
  const double e1 = c(1, 9), e2 = 1 + c(4, 9), e3 = sn(4, 9) / kSqrt3;
  return {
      {"2", 2, {1}, true},
      {"3", 3, {kSqrt2, 1 / kSqrt2}, true},
      {"4+", 4, {(1 + kSqrt5) / 2, 1, (-1 + kSqrt5) / 2}, true},
      {"4-", 4, {(1 - kSqrt5) / 2, 1, (-1 - kSqrt5) / 2}, true},
      {"5", 5, {kSqrt3, 2 / kSqrt3, kSqrt3 / 2, 1 / kSqrt3}, true},
      {"6+", 6, {r7a, r7b, 1, 1 / r7b, 1 / r7a}, true},
      {"6o", 6, {c(3, 7), -c(1, 7), 1}, true},
      {"6-", 6, {-c(2, 7), -c(3, 7), 1}, true},
      {"7+", 7, {s7p, s7q, s7r, 1 / s7r, 1 / s7q, 1 / s7p}, true},
      {"7-", 7, {std::sqrt(2 - kSqrt2), -std::sqrt(1 - 1 / kSqrt2), std::sqrt(4 + 2 * kSqrt2)}, true},
      {"8(1)", 8, {e1, e2, e3, 1, 1 / e3, 1 / e2, 1 / e1}, true},
      {"8(2)", 8, {-c(4, 9), 1 + c(2, 9), sn(2, 9) / kSqrt3, 1}, false},
      {"8(3)", 8, {-c(4, 9), 1 + c(2, 9), -sn(2, 9) / kSqrt3, 1}, false},
      {"8(4)", 8, {-c(2, 9), 1 - c(1, 9), -sn(1, 9) / kSqrt3, 1}, true},
  };
}

// ---------------------------------------------------------------------------
// canonical tau_i at s = 1, tau_n adjoined

struct TauRow {
  int n;
  std::vector<double> tau;
};

inline std::vector<TauRow> tau_table() {
  const double t42 = (1 - kSqrt5) / 2;
  const double t52 = -1 / kSqrt3;
  const double t62 = -1 / c(1, 7);
  const double t63 = (c(3, 7) - c(4, 7)) / 2;  // (-1)^{3/7} - (-1)^{4/7}, which is real
  const double t72 = -std::sqrt(1 - 1 / kSqrt2), t73 = kSqrt2 - 1, t74 = -std::sqrt(1 - 1 / kSqrt2) / kSqrt2;
  const double t82 = -1 / c(1, 9), t83 = 1 / (1 + c(2, 9)), t84 = -1 / (c(1, 9) * c(2, 9));
  return {
      {2, {1, -1}},
      {3, {1, -1 / kSqrt2, 1}},
      {4, {1, t42, -t42, -1}},
      {5, {1, t52, 0.5, t52, 1}},
      {6, {1, t62, t63, -t63, -t62, -1}},
      {7, {1, t72, t73, t74, t73, t72, 1}},
      {8, {1, t82, t83, t84, -t84, -t83, -t82, -1}},
  };
}

// ---------------------------------------------------------------------------
// A_3 at s = 1

inline std::array<double, 3> a3_scalar(double h1, double h2) {
  return {0.25 * (1 / h1 - (3 * kSqrt2 + 4) / h2), 0.0, 0.25 * ((3 - 2 * kSqrt2) / h1 - kSqrt2 / h2)};
}

inline const double kA3FlatRatio = 4 + 3 * kSqrt2;

/// The printed action matrix.
inline Matrix<double> a3_action_matrix(double h1, double h2, double m, const std::array<double, 3>& mu) {
  const double m2 = m * m, k = kSqrt2 / h2 + 1 / h1;
  Matrix<double> B(3, 3);
  B(0, 0) = mu[0] * (kSqrt2 / h1 - m2);
  B(0, 1) = -mu[0] * kSqrt2 / h1;
  B(1, 0) = -mu[1] * (1 + 1 / kSqrt2) * k;
  B(1, 1) = mu[1] * (k - m2);
  B(1, 2) = mu[1] * (1 / kSqrt2 - 1) * k;
  B(2, 1) = 2 * mu[2] / h2;
  B(2, 2) = -mu[2] * m2;
  return B;
}

inline double a3_det_general(double h1, double h2, double m, const std::array<double, 3>& mu) {
  const double m2 = m * m, m4 = m2 * m2;
  const double bracket = h1 * h1 * m2 * (-h2 * h2 * m4 + 2 * kSqrt2 * h2 * m2 - 2 * kSqrt2 + 2) +
                         h1 * ((kSqrt2 + 2) * h2 * h2 * m4 + 2 * (kSqrt2 - 2) * h2 * m2 - 2 * kSqrt2 + 4) -
                         h2 * (kSqrt2 - 1) * (h2 * m2 - 2);
  return mu[0] * mu[1] * mu[2] / (h1 * h1 * h2 * h2) * bracket;
}

inline double a3_det_constant(double h1, double m, const std::array<double, 3>& mu) {
  const double x = h1 * m * m;
  return -mu[0] * mu[1] * mu[2] / (h1 * h1 * h1) * (x * (x * (x - 3 * kSqrt2 - 2) + kSqrt2 + 1) - 2);
}

inline double a3_det_flat(double h1, double m, const std::array<double, 3>& mu) {
  const double x = h1 * m * m;
  return -mu[0] * mu[1] * mu[2] / (h1 * h1 * h1) *
         (x * (x * (x + 3 * kSqrt2 - 8) + 8 * (5 * kSqrt2 - 7)) + 48 * kSqrt2 - 68);
}

/// Einstein-Hilbert action with mu_1 = h_1, mu_3 = h_2, as a function of rho = h_2/h_1.
inline double a3_eh_action(double rho) { return 0.25 * ((3 - 2 * kSqrt2) * rho - (3 * kSqrt2 + 4) / rho - kSqrt2 + 1); }

/// The same with mu_1 = h_1 - h_2, mu_3 = h_1 + h_2.
inline double a3_eh_action_mixed(double rho) { return 8 - 2 * (kSqrt2 - 1) * (2 / rho + rho); }

// ---------------------------------------------------------------------------
// half-line

/// beta^{-1}(i) for constant h (in units of 1/eps^2).
inline double beta_inv_constant(int i) { return (2.0 * i + 1) / (i + 1); }

/// beta^{-1}(i) on the flat metric (in units of 1/eps^3).
inline double beta_inv_flat(int i) {
  const double x = i;
  return i % 2 == 0 ? x * (x * x + 1) / ((x * x - 1) * (x * x - 1)) : 1 / x;
}

}  // namespace qrg::reference
