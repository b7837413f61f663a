#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rpqvir/exactnum.hpp"

using namespace rpqvir;

namespace {

const oracle::Point kAt{{"p", Rational(3, 2)}, {"q", Rational(5, 7)}, {"c", Rational(2)}};

bool evaluable(const Scalar& s) {
  for (const auto& f : s.denominator_factors()) {
    if (oracle::eval(f.poly, kAt) == 0) return false;
  }
  return true;
}

}  // namespace

TEST(ExactNum, CanonicalPolynomialsCompareStructurally) {
  auto p = LaurentPoly::variable(param_vars(), "p");
  auto q = LaurentPoly::variable(param_vars(), "q");
  EXPECT_EQ((p + q) * (p - q), p * p - q * q);
  EXPECT_EQ(((p + q) * (p - q)).to_string(), (p * p - q * q).to_string());
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(LaurentPoly::variable(param_vars(), "p", -2) * p * p, LaurentPoly::constant(param_vars(), 1));
}

TEST(ExactNum, ExactDivision) {
  auto p = LaurentPoly::variable(param_vars(), "p");
  auto q = LaurentPoly::variable(param_vars(), "q");
  auto quotient = (p.pow(3) - q.pow(3)).exact_divide(p - q);
  ASSERT_TRUE(quotient.has_value());
  EXPECT_EQ(*quotient, p * p + p * q + q * q);
  EXPECT_FALSE((p * p + q).exact_divide(p - q).has_value());
}

TEST(ExactNum, RingAxiomsOnRandomScalars) {
  oracle::Gen gen(20240611);
  for (int iter = 0; iter < 150; ++iter) {
    Scalar a = gen.scalar(), b = gen.scalar(), c = gen.scalar();
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ(a + Scalar(0L), a);
    EXPECT_EQ(a * Scalar(1L), a);
    if (!a.is_zero()) {
      EXPECT_EQ(a * a.inverse(), Scalar(1L));
      EXPECT_EQ(a.pow(-2) * a.pow(3), a);
    }
  }
}

TEST(ExactNum, EvaluationIsARingHomomorphism) {
  oracle::Gen gen(77);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    Scalar a = gen.scalar(), b = gen.scalar();
    if (!evaluable(a) || !evaluable(b)) continue;
    Scalar sum = a + b, prod = a * b;
    if (!evaluable(sum) || !evaluable(prod)) continue;
    EXPECT_EQ(oracle::eval(sum, kAt), oracle::eval(a, kAt) + oracle::eval(b, kAt));
    EXPECT_EQ(oracle::eval(prod, kAt), oracle::eval(a, kAt) * oracle::eval(b, kAt));
    if (!b.is_zero() && oracle::eval(b, kAt) != 0) {
      Scalar quo = a / b;
      if (evaluable(quo)) {
        EXPECT_EQ(oracle::eval(quo, kAt), oracle::eval(a, kAt) / oracle::eval(b, kAt));
      }
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(ExactNum, RationalFunctionsCancel) {
  Scalar p = Scalar::variable(param_vars(), "p"), q = Scalar::variable(param_vars(), "q");
  Scalar r = (p.pow(4) - q.pow(4)) / (p - q);
  EXPECT_EQ(r, (p + q) * (p * p + q * q));
  EXPECT_TRUE(r.is_polynomial());
  Scalar s = Scalar(1L) / (p - q) - Scalar(1L) / (p - q);
  EXPECT_TRUE(s.is_zero());
}

TEST(ExactNum, DivisionByZeroThrows) {
  Scalar p = Scalar::variable(param_vars(), "p");
  EXPECT_THROW((void)(p / (p - p)), DivisionByZero);
  EXPECT_THROW((void)Scalar(0L).inverse(), DivisionByZero);
}

TEST(ExactNum, ContextsDoNotMix) {
  Scalar p = Scalar::variable(param_vars(), "p");
  Scalar x = Scalar::variable(formal_vars(), "x");
  EXPECT_THROW((void)(p + x), ContextMismatch);
  EXPECT_THROW((void)Scalar::variable(param_vars(), "x"), ContextMismatch);
}

TEST(ExactNum, SubstitutePowers) {
  Scalar x = Scalar::variable(formal_vars(), "x"), y = Scalar::variable(formal_vars(), "y");
  Scalar r = (x - y) / (x * y + Scalar(1L));
  Assignment to_pq{{"x", ToVariable{"p", 2}}, {"y", ToVariable{"q", -1}}};
  Scalar p = Scalar::variable(param_vars(), "p"), q = Scalar::variable(param_vars(), "q");
  EXPECT_EQ(substitute_powers(r, param_vars(), to_pq), (p.pow(2) - q.pow(-1)) / (p.pow(2) * q.pow(-1) + Scalar(1L)));

  Assignment numeric{{"x", Rational(2)}, {"y", Rational(1, 3)}};
  Scalar v = substitute_powers(r, param_vars(), numeric);
  EXPECT_EQ(v, Scalar(Rational(5, 3) / Rational(5, 3)));

  Assignment pole{{"x", Rational(0)}, {"y", Rational(1)}};
  EXPECT_THROW((void)substitute_powers(Scalar(1L) / x, param_vars(), pole), EvaluationAtPole);
  EXPECT_THROW((void)substitute_powers(Scalar(1L) / (x - y), param_vars(), Assignment{{"x", Rational(1)}, {"y", Rational(1)}}),
               EvaluationAtPole);
}

TEST(ExactNum, SubstitutionCommutesWithArithmetic) {
  oracle::Gen gen(5);
  Assignment swap{{"p", ToVariable{"q", 1}}, {"q", ToVariable{"p", 2}}, {"c", ToVariable{"c", 1}}};
  for (int iter = 0; iter < 60; ++iter) {
    Scalar a(gen.poly()), b(gen.poly());
    auto sub = [&](const Scalar& s) { return substitute_powers(s, param_vars(), swap); };
    EXPECT_EQ(sub(a * b), sub(a) * sub(b));
    EXPECT_EQ(sub(a - b), sub(a) - sub(b));
  }
}
