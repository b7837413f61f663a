#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rpqvir/operators.hpp"
#include "rpqvir/superspace.hpp"

using namespace rpqvir;

namespace {

oracle::Point at(const Rational& p, const Rational& q) { return {{"p", p}, {"q", q}, {"c", Rational(0)}}; }

oracle::Elem to_numeric(const SuperElement& e, const oracle::Point& pt) {
  oracle::Elem out;
  for (int parity = 0; parity < 2; ++parity) {
    for (const auto& [n, v] : e.part(parity)) out[{n, parity}] = oracle::eval(v, pt);
  }
  return oracle::NumericModel::clean(out);
}

}  // namespace

TEST(Superspace, ThetaSquaresToZero) {
  SuperElement a = SuperElement::theta_t(2) + SuperElement::t(-1, Scalar(3L));
  EXPECT_TRUE((SuperElement::theta_t(1) * SuperElement::theta_t(4)).is_zero());
  EXPECT_TRUE(mul_theta(mul_theta(a)).is_zero());
  EXPECT_EQ(SuperElement::t(2) * SuperElement::theta_t(3), SuperElement::theta_t(5));
}

TEST(Superspace, DeltaOnBasis) {
  auto d = preset("jagannathan-srinivasa");
  for (int n = -4; n <= 4; ++n) {
    EXPECT_EQ(delta(*d, SuperElement::t(n)), SuperElement::t(n, d->bracket_number(n)));
    EXPECT_EQ(delta(*d, SuperElement::theta_t(n)), SuperElement::theta_t(n, d->bracket_number(n) + d->phi_pow(n)));
    EXPECT_EQ(sigma(*d, SuperElement::theta_t(n)), SuperElement::theta_t(n, d->phi_pow(n + 1)));
    EXPECT_EQ(d_theta(*d, SuperElement::theta_t(n)), SuperElement::t(n, d->phi_pow(n)));
  }
}

TEST(Superspace, SigmaIsAnAlgebraMap) {
  auto d = preset("biedenharn-macfarlane");
  oracle::Gen gen(3);
  for (int iter = 0; iter < 40; ++iter) {
    SuperElement a = SuperElement::basis(gen.integer(-3, 3), gen.integer(0, 1), Scalar(gen.poly()));
    SuperElement b = SuperElement::basis(gen.integer(-3, 3), gen.integer(0, 1), Scalar(gen.poly()));
    EXPECT_EQ(sigma(*d, a * b), sigma(*d, a) * sigma(*d, b));
  }
}

// Delta is a sigma-derivation exactly when [m+n] = [m] + phi^m [n].
TEST(Superspace, SigmaDerivationHoldsForArikCoon) {
  auto d = preset("arik-coon");
  for (int m = -4; m <= 4; ++m) {
    for (int n = -4; n <= 4; ++n) {
      for (int pa = 0; pa < 2; ++pa) {
        for (int pb = 0; pb < 2; ++pb) {
          EXPECT_TRUE(check_sigma_derivation(*d, SuperElement::basis(m, pa), SuperElement::basis(n, pb)))
              << m << "," << n << " parities " << pa << pb;
        }
      }
    }
  }
}

TEST(Superspace, SigmaDerivationFailsForJagannathanSrinivasa) {
  auto d = preset("jagannathan-srinivasa");
  SuperElement defect = sigma_derivation_defect(*d, SuperElement::t(1), SuperElement::t(1));
  Scalar p = pvar("p"), q = pvar("q");
  EXPECT_EQ(defect, SuperElement::t(2, (p + q) - Scalar(1L) - p * q));
}

TEST(Operators, GeneratorsMatchNumericModel) {
  for (const auto& name : preset_names()) {
    auto d = preset(name);
    for (auto [p, q] : oracle::sample_pq()) {
      oracle::NumericModel model{name, p, q};
      for (int m = -3; m <= 3; ++m) {
        for (int n = -4; n <= 4; ++n) {
          for (int parity = 0; parity < 2; ++parity) {
            EXPECT_EQ(to_numeric(l_op(d, m).apply_basis(n, parity), at(p, q)), model.l(m, oracle::basis(n, parity)));
            EXPECT_EQ(to_numeric(g_op(d, m).apply_basis(n, parity), at(p, q)), model.G(m, oracle::basis(n, parity)));
          }
        }
      }
    }
  }
}

TEST(Operators, CompositionAppliesRightToLeft) {
  auto d = preset("arik-coon");
  auto p = oracle::sample_pq()[0];
  oracle::NumericModel model{"arik-coon", p.first, p.second};
  GradedOperator lg = compose(l_op(d, 2), g_op(d, -1));
  for (int n = -3; n <= 3; ++n) {
    EXPECT_EQ(to_numeric(lg.apply_basis(n, 0), at(p.first, p.second)), model.l(2, model.G(-1, oracle::basis(n, 0))));
  }
  EXPECT_EQ(lg.parity(), 1);
}

TEST(Operators, FermionicSquareVanishes) {
  auto d = preset("jagannathan-srinivasa");
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      EXPECT_FALSE(first_nonzero(compose(g_op(d, a), g_op(d, b)), 6).has_value());
    }
  }
}

TEST(Operators, LinearCombinationRejectsMixedParity) {
  auto d = preset("arik-coon");
  EXPECT_THROW((void)(l_op(d, 1) + g_op(d, 1)), MixedParity);
  GradedOperator z = l_op(d, 1) - l_op(d, 1);
  EXPECT_FALSE(first_nonzero(z, 5).has_value());
}

TEST(Operators, WindowComparisonReportsFirstDifference) {
  auto d = preset("arik-coon");
  auto diff = first_difference(l_op(d, 1), l_op(d, 1).scaled(Scalar(2L)), 4);
  ASSERT_TRUE(diff.has_value());
  EXPECT_TRUE(op_equal_on_window(l_op(d, 0).scaled(Scalar(0L)), GradedOperator::zero(d, 0), 4));
}
