#include "qrg/qint.hpp"
#include "qrg/scalar.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace qrg;

TEST(Scalar, ExactArithmeticStaysExact) {
  auto a = Scalar::exact(Rational(1, 3));
  auto b = Scalar::exact(Rational(5, 7));
  auto r = (a + b) * a / b - a;
  EXPECT_EQ(r.mode(), Mode::Exact);
  EXPECT_EQ(r.rational(), Rational(1, 3) * (Rational(1, 3) + Rational(5, 7)) / Rational(5, 7) - Rational(1, 3));
}

TEST(Scalar, MixingModesThrows) {
  auto a = Scalar::exact(Rational(1, 2));
  auto b = Scalar::real(0.5);
  EXPECT_THROW(a + b, ModeMismatch);
  EXPECT_THROW(b * a, ModeMismatch);
  EXPECT_THROW((void)(a == b), ModeMismatch);
}

TEST(Scalar, LiteralsAdoptPartnerMode) {
  Scalar one = 1;
  EXPECT_EQ((one + Scalar::real(0.25)).mode(), Mode::Float);
  EXPECT_EQ((one + Scalar::exact(Rational(1, 4))).mode(), Mode::Exact);
  EXPECT_DOUBLE_EQ((one + Scalar::real(0.25)).to_double(), 1.25);
}

TEST(Scalar, ParseAndPrintRoundTrip) {
  for (const char* s : {"0", "-3", "22/7", "-1/1000000000000000000000007", "123456789012345678901234567890"}) {
    auto x = Scalar::parse(s);
    EXPECT_EQ(x.mode(), Mode::Exact);
    EXPECT_EQ(x.str(), s);
    EXPECT_EQ(Scalar::parse(x.str()), x);
  }
  auto f = Scalar::parse("0.1");
  EXPECT_EQ(f.mode(), Mode::Float);
  EXPECT_EQ(Scalar::parse(f.str()).to_double(), 0.1);
  EXPECT_EQ(Scalar::parse("4/6").str(), "2/3");
  EXPECT_THROW(Scalar::parse("1/0"), std::domain_error);
  EXPECT_THROW(Scalar::parse("abc"), std::invalid_argument);
}

TEST(Scalar, ExactAssociativeAndCommutative) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-1000, 1000);
  auto draw = [&] { return Scalar::exact(Rational(d(rng), std::abs(d(rng)) + 1)); };
  for (int k = 0; k < 200; ++k) {
    auto a = draw(), b = draw(), c = draw();
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(Scalar, DivisionByZeroThrows) { EXPECT_THROW(Scalar::exact(1) / Scalar::exact(0), std::domain_error); }

TEST(Scalar, NegligibleIsExactForRationals) {
  EXPECT_FALSE(negligible(Rational(1, 1000000000) * Rational(1, 1000000000), 1e-10));
  EXPECT_TRUE(negligible(1e-12, 1e-10));
  EXPECT_FALSE(negligible(Scalar::exact(Rational(1, 1000000000000LL)), 1e-10));
}

// ---------------------------------------------------------------------------

TEST(QInt, Values) {
  QContext q3(3);
  EXPECT_EQ(qint(q3, 1), 1.0);
  EXPECT_NEAR(qint(q3, 2), std::sqrt(2.0), 1e-14);
  EXPECT_EQ(qint(q3, 3), 1.0);
  EXPECT_EQ(qint(q3, 0), 0.0);
  EXPECT_EQ(qint(q3, 4), 0.0);
  EXPECT_THROW(qint(q3, 5), std::out_of_range);
  EXPECT_THROW(qint(q3, -1), std::out_of_range);
  EXPECT_THROW(QContext(0), std::invalid_argument);
}

TEST(QInt, TopValueIsOne) {
  for (int n = 1; n <= 40; ++n) EXPECT_NEAR(qint(QContext(n), n), 1.0, kDefaultTol);
}

TEST(QInt, Factorial) {
  EXPECT_EQ(qfactorial(QContext(3), 0), 1.0);
  EXPECT_NEAR(qfactorial(QContext(3), 2), std::sqrt(2.0), 1e-14);
  // (2)_q (3)_q at n = 4 is the square of the golden ratio
  EXPECT_NEAR(qfactorial(QContext(4), 3), 2.6180339887498949, 1e-13);
  EXPECT_THROW(qfactorial(QContext(3), 4), std::out_of_range);
}

TEST(QInt, ProductIdentity) {
  for (int n = 2; n <= 20; ++n) {
    QContext q(n);
    for (int i = 1; i <= n - 1; ++i)
      EXPECT_NEAR(qint(q, i + 1) * qint(q, i - 1), qint(q, i) * qint(q, i) - 1, kDefaultTol) << n << " " << i;
  }
}

TEST(PhiClosedForm, Values) {
  EXPECT_EQ(phi_closed_form(Rational(2), 5), Rational(6, 5));
  EXPECT_NEAR(phi_closed_form(std::sqrt(2.0), 2), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_EQ(phi_closed_form(0.37, 1), 0.37);
  // phi_3 = x(x^2 - 2)/(x^2 - 1)
  const double x = 1.7;
  EXPECT_NEAR(phi_closed_form(x, 3), x * (x * x - 2) / (x * x - 1), 1e-14);
}

TEST(PhiClosedForm, SatisfiesRecursion) {
  for (double x : {2.0, 1.9, 1.3, -0.7, 3.1})
    for (int i = 1; i < 12; ++i) {
      try {
        double a = phi_closed_form(x, i), b = phi_closed_form(x, i + 1);
        EXPECT_NEAR(b, x - 1 / a, 1e-9 * std::max(1.0, std::abs(b)));
      } catch (const DegenerateSequence&) {
      }
    }
  for (int i = 1; i < 30; ++i) EXPECT_EQ(phi_closed_form(Rational(2), i + 1), 2 - 1 / phi_closed_form(Rational(2), i));
}

TEST(PhiClosedForm, Degenerate) {
  // x = 1: phi_2 = 0, so phi_3 is undefined
  EXPECT_THROW(phi_closed_form(1.0, 3), DegenerateSequence);
  EXPECT_THROW(phi_closed_form(Rational(0), 2), DegenerateSequence);
  EXPECT_THROW(phi_closed_form(1.0, 0), std::out_of_range);
}
