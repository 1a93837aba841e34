#pragma once

// JSON views of the library types (nlohmann::json).

#include "field.hpp"
#include "solver.hpp"

#include <json.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace qrg::io {

using json = nlohmann::ordered_json;

/// Scalars serialise as {"rat": "p/q"} or {"float": x}.
template <class F>
json value(const F& x) {
  if constexpr (std::is_same_v<F, Rational>) {
    return {{"rat", to_scalar(x).str()}};
  } else if constexpr (std::is_same_v<F, Scalar>) {
    if (x.mode() == Mode::Exact) return {{"rat", x.str()}};
    return {{"float", x.to_double()}};
  } else {
    return {{"float", x}};
  }
}

template <class F>
json values(const std::vector<F>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(value(x));
  return a;
}

template <class F>
json tensor(const TensorElement<F>& t) {
  json o = json::object();
  o["degree"] = to_string(t.degree());
  json terms = json::array();
  for (const auto& [p, c] : t.terms()) terms.push_back({{"path", p.nodes()}, {"coeff", value(c)}});
  o["terms"] = terms;
  return o;
}

template <class F>
json matrix(const Matrix<F>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(value(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

template <class F>
json metric(const QuantumMetric<F>& g) {
  return {{"h", values(g.h)}, {"phi", values(g.phi)}, {"eps", g.eps}};
}

template <class F>
json connection(const ConnectionCoeffs<F>& c) {
  return {{"s", value(c.s)},
          {"tau", values(c.tau)},
          {"tau_prime", values(c.tau_p)},
          {"sigma", values(c.sigma)},
          {"sigma_prime", values(c.sigma_p)}};
}

/// Per-arrow map keyed by the arrow's path string.
template <class F>
json per_arrow(const std::map<Path, TensorElement<F>>& m) {
  json o = json::object();
  for (const auto& [a, t] : m) o[a.str()] = tensor(t);
  return o;
}

inline std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace qrg::io
