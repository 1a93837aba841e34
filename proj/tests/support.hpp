#pragma once

#include "qrg/qrg.hpp"

#include <random>
#include <vector>

namespace qrg::testing {

/// Positive edge weights p/q with p, q in [1, 1000].
inline std::vector<Rational> random_rational_h(int count, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(1, 1000);
  std::vector<Rational> h;
  for (int i = 0; i < count; ++i) h.emplace_back(d(rng), d(rng));
  return h;
}

inline std::vector<double> random_h(int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.2, 5.0);
  std::vector<double> h;
  for (int i = 0; i < count; ++i) h.push_back(d(rng));
  return h;
}

inline std::vector<Scalar> as_exact_scalars(const std::vector<Rational>& h) {
  std::vector<Scalar> out;
  for (const auto& x : h) out.push_back(Scalar::exact(x));
  return out;
}

/// Largest |a_i - b_i|.
inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <class F>
double max_abs(const std::vector<F>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(to_double(x)));
  return m;
}

}  // namespace qrg::testing
