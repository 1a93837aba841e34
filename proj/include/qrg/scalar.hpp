#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace qrg {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kDefaultTol = 1e-10;

enum class Mode { Exact, Float };

inline const char* to_string(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

struct ModeMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

/// Raised when an exact computation would need an irrational constant.
struct ExactUnavailable : std::domain_error {
  using std::domain_error::domain_error;
};

/// Dual-mode number. Values built from integer literals (or via constant())
/// are untyped and take on the mode of whatever they are combined with.
class Scalar {
 public:
  Scalar() : v_(Rational(0)), literal_(true) {}
  Scalar(int v) : v_(Rational(v)), literal_(true) {}          // NOLINT
  Scalar(long long v) : v_(Rational(v)), literal_(true) {}    // NOLINT

  static Scalar exact(Rational r) { return Scalar(std::move(r), false); }
  static Scalar real(double x) { return Scalar(x); }
  static Scalar constant(Rational r) { return Scalar(std::move(r), true); }

  Mode mode() const { return std::holds_alternative<double>(v_) ? Mode::Float : Mode::Exact; }
  bool is_literal() const { return literal_; }

  const Rational& rational() const {
    if (auto* r = std::get_if<Rational>(&v_)) return *r;
    throw ModeMismatch("rational() on a float scalar");
  }

  double to_double() const {
    if (auto* d = std::get_if<double>(&v_)) return *d;
    return static_cast<double>(std::get<Rational>(v_));
  }

  bool is_zero() const {
    if (auto* d = std::get_if<double>(&v_)) return *d == 0.0;
    return std::get<Rational>(v_) == 0;
  }

  /// "p/q" (or "p") for exact values, shortest round-trip decimal for floats.
  std::string str() const {
    if (auto* r = std::get_if<Rational>(&v_)) {
      std::ostringstream os;
      os << numerator(*r);
      if (denominator(*r) != 1) os << '/' << denominator(*r);
      return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << std::get<double>(v_);
    return os.str();
  }

  /// Integers and p/q parse as exact, anything with '.', 'e', "inf" or "nan" as float.
  static Scalar parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty scalar");
    if (s.find_first_of(".eEnN") != std::string::npos) return real(std::stod(s));
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return exact(Rational(boost::multiprecision::cpp_int(s)));
      boost::multiprecision::cpp_int p(s.substr(0, slash)), q(s.substr(slash + 1));
      if (q == 0) throw std::domain_error("zero denominator in " + s);
      return exact(Rational(p, q));
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("cannot parse scalar '" + s + "'");
    }
  }

  Scalar operator-() const {
    if (auto* d = std::get_if<double>(&v_)) return Scalar(-*d);
    return Scalar(Rational(-std::get<Rational>(v_)), literal_);
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw std::domain_error("division by zero scalar");
    return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    bool r = false;
    visit_pair(a, b, [&](const auto& x, const auto& y) { r = (x == y); });
    return r;
  }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    bool r = false;
    visit_pair(a, b, [&](const auto& x, const auto& y) { r = (x < y); });
    return r;
  }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  explicit Scalar(double x) : v_(x), literal_(false) {}
  Scalar(Rational r, bool lit) : v_(std::move(r)), literal_(lit) {}

  template <class Fn>
  static void visit_pair(const Scalar& a, const Scalar& b, Fn&& fn) {
    const auto* ra = std::get_if<Rational>(&a.v_);
    const auto* rb = std::get_if<Rational>(&b.v_);
    if (ra && rb) {
      fn(*ra, *rb);
      return;
    }
    if (!ra && !rb) {
      fn(std::get<double>(a.v_), std::get<double>(b.v_));
      return;
    }
    // one exact, one float: only allowed if the exact side is an untyped literal
    const Scalar& ex = ra ? a : b;
    if (!ex.literal_) throw ModeMismatch("mixing exact and float scalars");
    double e = static_cast<double>(ra ? *ra : *rb);
    if (ra)
      fn(e, std::get<double>(b.v_));
    else
      fn(std::get<double>(a.v_), e);
  }

  template <class Op>
  static Scalar combine(const Scalar& a, const Scalar& b, Op op) {
    const auto* ra = std::get_if<Rational>(&a.v_);
    const auto* rb = std::get_if<Rational>(&b.v_);
    if (ra && rb) return Scalar(Rational(op(*ra, *rb)), a.literal_ && b.literal_);
    Scalar out;
    visit_pair(a, b, [&](const auto& x, const auto& y) {
      if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>)
        out = Scalar(static_cast<double>(op(x, y)));
    });
    return out;
  }

  std::variant<Rational, double> v_;
  bool literal_;
};

// ---------------------------------------------------------------------------
// field traits: the three supported coefficient types

template <class F>
struct field;

template <>
struct field<double> {
  static constexpr bool exact = false;
  static double ratio(long long p, long long q) { return static_cast<double>(p) / static_cast<double>(q); }
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static bool is_zero(double x) { return x == 0.0; }
  static Mode mode(double) { return Mode::Float; }
};

template <>
struct field<Rational> {
  static constexpr bool exact = true;
  static Rational ratio(long long p, long long q) { return Rational(p, q); }
  static Rational from_double(double) {
    throw ExactUnavailable("exact mode cannot represent an irrational constant");
  }
  static double to_double(const Rational& x) { return static_cast<double>(x); }
  static bool is_zero(const Rational& x) { return x == 0; }
  static Mode mode(const Rational&) { return Mode::Exact; }
};

template <>
struct field<Scalar> {
  static constexpr bool exact = false;  // decided per value
  static Scalar ratio(long long p, long long q) { return Scalar::constant(Rational(p, q)); }
  static Scalar from_double(double x) { return Scalar::real(x); }
  static double to_double(const Scalar& x) { return x.to_double(); }
  static bool is_zero(const Scalar& x) { return x.is_zero(); }
  static Mode mode(const Scalar& x) { return x.mode(); }
};

template <class F>
F ratio(long long p, long long q = 1) {
  return field<F>::ratio(p, q);
}

template <class F>
double to_double(const F& x) {
  return field<F>::to_double(x);
}

template <class F>
bool is_zero(const F& x) {
  return field<F>::is_zero(x);
}

/// Zero test used for pivots and denominators: exact for exact values, |x| <= tol otherwise.
template <class F>
bool negligible(const F& x, double tol) {
  if constexpr (std::is_same_v<F, Rational>) {
    return x == 0;
  } else if constexpr (std::is_same_v<F, Scalar>) {
    return x.mode() == Mode::Exact ? x.is_zero() : std::abs(x.to_double()) <= tol;
  } else {
    return std::abs(to_double(x)) <= tol;
  }
}

inline bool near(double a, double b, double tol = kDefaultTol) { return std::abs(a - b) <= tol; }

inline Scalar to_scalar(double x) { return Scalar::real(x); }
inline Scalar to_scalar(const Rational& r) { return Scalar::exact(r); }
inline Scalar to_scalar(const Scalar& s) { return s; }

}  // namespace qrg
