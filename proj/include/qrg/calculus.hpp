#pragma once

// Exterior calculus Omega_min on the line graph A_N (and the truncated half-line).
// Tensors live in the path basis: a k-step path x0 -> x1 -> ... -> xk stands for
// the product of its arrows over the vertex algebra.

#include "scalar.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrg {

// ---------------------------------------------------------------------------
// lattice

struct Lattice {
  enum class Kind { An, HalfLine };
  Kind kind;
  int N;

  static Lattice An(int n) { return Lattice(Kind::An, n); }
  static Lattice HalfLine(int n_max) { return Lattice(Kind::HalfLine, n_max); }

  bool half_line() const { return kind == Kind::HalfLine; }

  /// Vertices whose values depend on the artificial right end of a truncated half-line.
  bool truncated(int v) const { return half_line() && v >= N - 1; }

  std::string name() const { return (half_line() ? "N_trunc(" : "A(") + std::to_string(N) + ")"; }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  Lattice(Kind k, int n) : kind(k), N(n) {
    if (n < 2) throw std::invalid_argument("lattice needs at least 2 nodes");
  }
};

// ---------------------------------------------------------------------------
// paths

class Path {
 public:
  static constexpr int kMax = 6;

  Path() = default;
  Path(std::initializer_list<int> nodes) {
    if (nodes.size() > kMax) throw std::length_error("path too long");
    for (int v : nodes) v_[len_++] = v;
  }

  int size() const { return len_; }
  int steps() const { return len_ - 1; }
  int operator[](int k) const { return v_[k]; }
  int front() const { return v_[0]; }
  int back() const { return v_[len_ - 1]; }

  void push_back(int v) {
    if (len_ >= kMax) throw std::length_error("path too long");
    v_[len_++] = v;
  }

  /// Sub-path of nodes [from, from+count).
  Path slice(int from, int count) const {
    Path p;
    for (int k = 0; k < count; ++k) p.push_back(v_[from + k]);
    return p;
  }

  /// Concatenation sharing the joint node; caller checks composability.
  Path join(const Path& o) const {
    Path p = *this;
    for (int k = 1; k < o.len_; ++k) p.push_back(o.v_[k]);
    return p;
  }

  Path reversed() const {
    Path p;
    for (int k = len_ - 1; k >= 0; --k) p.push_back(v_[k]);
    return p;
  }

  bool visits(int v) const {
    for (int k = 0; k < len_; ++k)
      if (v_[k] == v) return true;
    return false;
  }

  std::vector<int> nodes() const { return {v_.begin(), v_.begin() + len_}; }

  friend bool operator==(const Path& a, const Path& b) {
    return a.len_ == b.len_ && std::equal(a.v_.begin(), a.v_.begin() + a.len_, b.v_.begin());
  }
  friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (a.len_ != b.len_) return a.len_ <=> b.len_;
    for (int k = 0; k < a.len_; ++k)
      if (a.v_[k] != b.v_[k]) return a.v_[k] <=> b.v_[k];
    return std::strong_ordering::equal;
  }

  std::string str() const {
    std::string s;
    for (int k = 0; k < len_; ++k) s += (k ? "->" : "") + std::to_string(v_[k]);
    return s;
  }

 private:
  std::array<int, kMax> v_{};
  int len_ = 0;
};

// ---------------------------------------------------------------------------
// tensor elements

/// TwoForm labels are the canonical loop v -> v-1 -> v (= b at vertex v);
/// TwoFormOne appends one further arrow leaving v.
enum class Degree { Fn, One, TwoTensor, ThreeTensor, TwoForm, TwoFormOne, ThreeForm };

inline int path_length(Degree d) {
  switch (d) {
    case Degree::Fn: return 1;
    case Degree::One: return 2;
    case Degree::TwoTensor: return 3;
    case Degree::ThreeTensor: return 4;
    case Degree::TwoForm: return 3;
    case Degree::TwoFormOne: return 4;
    case Degree::ThreeForm: return 4;
  }
  return 0;
}

inline const char* to_string(Degree d) {
  switch (d) {
    case Degree::Fn: return "fn";
    case Degree::One: return "one";
    case Degree::TwoTensor: return "two_tensor";
    case Degree::ThreeTensor: return "three_tensor";
    case Degree::TwoForm: return "two_form";
    case Degree::TwoFormOne: return "two_form_one";
    case Degree::ThreeForm: return "three_form";
  }
  return "?";
}

template <class F>
class TensorElement {
 public:
  using Terms = std::map<Path, F>;

  explicit TensorElement(Degree d = Degree::Fn) : degree_(d) {}

  static TensorElement basis(Degree d, const Path& p, F c = ratio<F>(1)) {
    TensorElement t(d);
    t.add(p, std::move(c));
    return t;
  }

  Degree degree() const { return degree_; }
  const Terms& terms() const& { return terms_; }
  Terms terms() && { return std::move(terms_); }  // safe in range-for over a temporary
  bool empty() const { return terms_.empty(); }

  void add(const Path& p, const F& c) {
    if (p.size() != path_length(degree_))
      throw std::invalid_argument("path " + p.str() + " has wrong length for degree " + to_string(degree_));
    auto it = terms_.find(p);
    if (it == terms_.end()) {
      if (!qrg::is_zero(c)) terms_.emplace(p, c);
      return;
    }
    it->second = it->second + c;
    if (qrg::is_zero(it->second)) terms_.erase(it);
  }

  F coeff(const Path& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? ratio<F>(0) : it->second;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& [p, c] : terms_) m = std::max(m, std::abs(to_double(c)));
    return m;
  }

  /// Largest coefficient among paths that avoid the given node set.
  template <class Pred>
  double max_abs_if(Pred keep) const {
    double m = 0;
    for (const auto& [p, c] : terms_)
      if (keep(p)) m = std::max(m, std::abs(to_double(c)));
    return m;
  }

  TensorElement& operator+=(const TensorElement& o) {
    check_same(o);
    for (const auto& [p, c] : o.terms_) add(p, c);
    return *this;
  }
  TensorElement& operator-=(const TensorElement& o) {
    check_same(o);
    for (const auto& [p, c] : o.terms_) add(p, -c);
    return *this;
  }
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator*(const F& k, const TensorElement& x) {
    TensorElement r(x.degree_);
    for (const auto& [p, c] : x.terms_) r.add(p, k * c);
    return r;
  }
  TensorElement operator-() const { return ratio<F>(-1) * *this; }

  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    if (a.degree_ != b.degree_ || a.terms_.size() != b.terms_.size()) return false;
    auto it = b.terms_.begin();
    for (const auto& [p, c] : a.terms_) {
      if (!(p == it->first) || !(c == it->second)) return false;
      ++it;
    }
    return true;
  }

 private:
  void check_same(const TensorElement& o) const {
    if (o.degree_ != degree_ && !o.empty() && !empty())
      throw std::invalid_argument("adding tensors of different degree");
  }

  Degree degree_;
  Terms terms_;
};

// ---------------------------------------------------------------------------
// basis elements

template <class F>
TensorElement<F> delta(int i) {
  return TensorElement<F>::basis(Degree::Fn, {i});
}

/// a_i : i -> i+1
template <class F>
TensorElement<F> arrow(int i) {
  return TensorElement<F>::basis(Degree::One, {i, i + 1});
}

/// a'_i : i+1 -> i
template <class F>
TensorElement<F> arrow_back(int i) {
  return TensorElement<F>::basis(Degree::One, {i + 1, i});
}

/// b_i = a'_i ^ a_i for i = 1..N-2, the loop at vertex i+1.
template <class F>
TensorElement<F> two_form_basis(const Lattice& lat, int i) {
  if (i < 1 || i > lat.N - 2) throw std::out_of_range("two-form basis index out of range");
  return TensorElement<F>::basis(Degree::TwoForm, {i + 1, i, i + 1});
}

template <class F>
TensorElement<F> function(const std::vector<F>& values) {
  TensorElement<F> f(Degree::Fn);
  for (std::size_t i = 0; i < values.size(); ++i) f.add({static_cast<int>(i) + 1}, values[i]);
  return f;
}

template <class F>
TensorElement<F> theta(const Lattice& lat) {
  TensorElement<F> t(Degree::One);
  for (int i = 1; i < lat.N; ++i) {
    t.add({i, i + 1}, ratio<F>(1));
    t.add({i + 1, i}, ratio<F>(1));
  }
  return t;
}

inline std::vector<Path> arrows(const Lattice& lat) {
  std::vector<Path> out;
  for (int i = 1; i < lat.N; ++i) {
    out.push_back({i, i + 1});
    out.push_back({i + 1, i});
  }
  return out;
}

/// All composable k-step paths.
inline std::vector<Path> paths(const Lattice& lat, int steps) {
  std::vector<Path> cur;
  for (int v = 1; v <= lat.N; ++v) cur.push_back({v});
  for (int s = 0; s < steps; ++s) {
    std::vector<Path> next;
    for (const auto& p : cur)
      for (int w : {p.back() - 1, p.back() + 1})
        if (w >= 1 && w <= lat.N) {
          Path q = p;
          q.push_back(w);
          next.push_back(q);
        }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// bimodule structure and products

enum class Side { Left, Right };

/// f.x scales each path by f(tail); x.f by f(head).
template <class F>
TensorElement<F> act(const TensorElement<F>& f, const TensorElement<F>& x, Side side) {
  if (f.degree() != Degree::Fn) throw std::invalid_argument("act: first argument must be a function");
  TensorElement<F> r(x.degree());
  for (const auto& [p, c] : x.terms()) {
    int v = side == Side::Left ? p.front() : p.back();
    r.add(p, f.coeff({v}) * c);
  }
  return r;
}

inline Degree tensor_degree(Degree a, Degree b) {
  auto rank = [](Degree d) {
    switch (d) {
      case Degree::One: return 1;
      case Degree::TwoTensor: return 2;
      case Degree::ThreeTensor: return 3;
      default: return -1;
    }
  };
  if (a == Degree::TwoForm && b == Degree::One) return Degree::TwoFormOne;
  int ra = rank(a), rb = rank(b);
  if (ra < 0 || rb < 0) throw std::invalid_argument("tensor: unsupported degrees");
  switch (ra + rb) {
    case 2: return Degree::TwoTensor;
    case 3: return Degree::ThreeTensor;
    default: throw std::invalid_argument("tensor: degree overflow");
  }
}

/// Tensor product over the vertex algebra: concatenation of composable paths.
template <class F>
TensorElement<F> tensor(const TensorElement<F>& x, const TensorElement<F>& y) {
  if (x.degree() == Degree::Fn) return act(x, y, Side::Left);
  if (y.degree() == Degree::Fn) return act(y, x, Side::Right);
  TensorElement<F> r(tensor_degree(x.degree(), y.degree()));
  for (const auto& [p, a] : x.terms())
    for (const auto& [q, b] : y.terms())
      if (p.back() == q.front()) r.add(p.join(q), a * b);
  return r;
}

/// Reduce a 2-step path to the canonical Omega^2_min basis. Returns the sign
/// (0, +1, -1) and the vertex of the loop.
inline std::pair<int, int> reduce_two_path(const Lattice& lat, const Path& p) {
  if (p[0] != p[2]) return {0, 0};  // same-direction steps vanish
  int v = p[0];
  if (v == 1 || v == lat.N) return {0, 0};
  return {p[1] == v - 1 ? 1 : -1, v};
}

template <class F>
TensorElement<F> wedge_reduce(const Lattice& lat, const TensorElement<F>& x) {
  if (x.degree() != Degree::TwoTensor) throw std::invalid_argument("wedge_reduce needs a 2-tensor");
  TensorElement<F> r(Degree::TwoForm);
  for (const auto& [p, c] : x.terms()) {
    auto [sign, v] = reduce_two_path(lat, p);
    if (sign != 0) r.add({v, v - 1, v}, sign > 0 ? c : -c);
  }
  return r;
}

/// Wedge product on Omega_min; anything of total form degree 3 is zero.
template <class F>
TensorElement<F> wedge(const Lattice& lat, const TensorElement<F>& x, const TensorElement<F>& y) {
  if (x.degree() == Degree::Fn) return act(x, y, Side::Left);
  if (y.degree() == Degree::Fn) return act(y, x, Side::Right);
  if (x.degree() == Degree::One && y.degree() == Degree::One) return wedge_reduce(lat, tensor(x, y));
  auto is_form = [](Degree d) { return d == Degree::One || d == Degree::TwoForm || d == Degree::ThreeForm; };
  if (is_form(x.degree()) && is_form(y.degree())) return TensorElement<F>(Degree::ThreeForm);
  throw std::invalid_argument("wedge: arguments must be forms");
}

/// Exterior derivative: edge differences on functions, [theta, . } on 1-forms.
template <class F>
TensorElement<F> d(const Lattice& lat, const TensorElement<F>& x) {
  if (x.degree() == Degree::Fn) {
    TensorElement<F> r(Degree::One);
    for (const auto& a : arrows(lat)) r.add(a, x.coeff({a.back()}) - x.coeff({a.front()}));
    return r;
  }
  if (x.degree() == Degree::One) {
    auto th = theta<F>(lat);
    return wedge_reduce(lat, tensor(th, x) + tensor(x, th));
  }
  if (x.degree() == Degree::TwoForm) return TensorElement<F>(Degree::ThreeForm);
  throw std::invalid_argument("d: unsupported degree");
}

/// Bimodule section of the wedge: b_v -> 1/2 (v->v-1->v) - 1/2 (v->v+1->v).
template <class F>
TensorElement<F> lift(const Lattice& lat, const TensorElement<F>& x) {
  if (x.degree() != Degree::TwoForm) throw std::invalid_argument("lift needs a 2-form");
  TensorElement<F> r(Degree::TwoTensor);
  const F half = ratio<F>(1, 2);
  for (const auto& [p, c] : x.terms()) {
    int v = p[0];
    r.add({v, v - 1, v}, half * c);
    if (v < lat.N) r.add({v, v + 1, v}, -(half * c));
  }
  return r;
}

/// lift applied to the 2-form factor of an Omega^2 (x) Omega^1 element.
template <class F>
TensorElement<F> lift_first(const Lattice& lat, const TensorElement<F>& x) {
  if (x.degree() != Degree::TwoFormOne) throw std::invalid_argument("lift_first needs a 2-form (x) 1-form");
  TensorElement<F> r(Degree::ThreeTensor);
  const F half = ratio<F>(1, 2);
  for (const auto& [p, c] : x.terms()) {
    int v = p[0], w = p[3];
    r.add({v, v - 1, v, w}, half * c);
    if (v < lat.N) r.add({v, v + 1, v, w}, -(half * c));
  }
  return r;
}

/// The *-operation (real coefficients): a k-step path is reversed with sign
/// (-1)^k; on 2-forms the graded anti-involution adds one more sign.
template <class F>
TensorElement<F> star(const TensorElement<F>& x) {
  TensorElement<F> r(x.degree());
  int k = path_length(x.degree()) - 1;
  bool neg = (k % 2 == 1);
  if (x.degree() == Degree::TwoForm) neg = !neg;
  if (x.degree() == Degree::TwoFormOne || x.degree() == Degree::ThreeForm)
    throw std::invalid_argument("star: unsupported degree");
  for (const auto& [p, c] : x.terms()) r.add(p.reversed(), neg ? -c : c);
  return r;
}

// ---------------------------------------------------------------------------
// the complex and its dimensions

enum class Relations { Min, Max };

struct ExteriorComplex {
  Lattice lattice;
  Relations relations;
  std::vector<int> dims;  // dim Omega^k for k = 0..3
};

namespace detail {

/// Rank of a small integer matrix by exact elimination.
inline int rank(std::vector<std::vector<Rational>> m) {
  int r = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Quadratic relations of the chosen calculus as combinations of 2-step paths.
inline std::vector<std::map<Path, int>> quadratic_relations(const Lattice& lat, Relations rel) {
  std::vector<std::map<Path, int>> out;
  for (const auto& p : paths(lat, 2))
    if (p[0] != p[2]) out.push_back({{p, 1}});
  if (rel == Relations::Max) return out;
  out.push_back({{Path{1, 2, 1}, 1}});
  out.push_back({{Path{lat.N, lat.N - 1, lat.N}, 1}});
  for (int v = 2; v < lat.N; ++v) out.push_back({{Path{v, v + 1, v}, 1}, {Path{v, v - 1, v}, 1}});
  return out;
}

}  // namespace detail

/// Builds the graded algebra and computes dim Omega^k (k <= 3) as the number of
/// k-step paths minus the rank of the two-sided relation ideal in degree k.
inline ExteriorComplex build_complex(const Lattice& lat, Relations rel = Relations::Min) {
  ExteriorComplex cx{lat, rel, {lat.N, 2 * (lat.N - 1)}};
  auto gens = detail::quadratic_relations(lat, rel);
  for (int k = 2; k <= 3; ++k) {
    // ideal elements in degree k: prefix . r . suffix; relations preserve
    // endpoints, so rank is additive over (start, end) blocks.
    std::map<std::pair<int, int>, std::vector<std::map<Path, int>>> blocks;
    for (int pre = 0; pre <= k - 2; ++pre) {
      int post = k - 2 - pre;
      for (const auto& g : gens) {
        const Path& any = g.begin()->first;
        for (const auto& left : paths(lat, pre)) {
          if (left.back() != any.front()) continue;
          for (const auto& right : paths(lat, post)) {
            if (right.front() != any.back()) continue;
            std::map<Path, int> elt;
            for (const auto& [p, c] : g) elt[left.join(p).join(right)] += c;
            blocks[{left.front(), right.back()}].push_back(elt);
          }
        }
      }
    }
    std::map<std::pair<int, int>, std::vector<Path>> cols;
    for (const auto& p : paths(lat, k)) cols[{p.front(), p.back()}].push_back(p);
    int dim = 0;
    for (const auto& [key, ps] : cols) {
      int r = 0;
      if (auto it = blocks.find(key); it != blocks.end()) {
        std::vector<std::vector<Rational>> m;
        for (const auto& elt : it->second) {
          std::vector<Rational> row(ps.size());
          for (std::size_t j = 0; j < ps.size(); ++j)
            if (auto e = elt.find(ps[j]); e != elt.end()) row[j] = e->second;
          m.push_back(std::move(row));
        }
        r = detail::rank(std::move(m));
      }
      dim += static_cast<int>(ps.size()) - r;
    }
    cx.dims.push_back(dim);
  }
  return cx;
}

}  // namespace qrg
