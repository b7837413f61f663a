#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracle.hpp"
#include "rpqvir/brackets.hpp"

using namespace rpqvir;

namespace {

oracle::Point at(const Rational& p, const Rational& q) { return {{"p", p}, {"q", q}, {"c", Rational(1)}}; }

oracle::Elem to_numeric(const SuperElement& e, const oracle::Point& pt) {
  oracle::Elem out;
  for (int parity = 0; parity < 2; ++parity) {
    for (const auto& [n, v] : e.part(parity)) out[{n, parity}] = oracle::eval(v, pt);
  }
  return oracle::NumericModel::clean(out);
}

// Levi-Civita sum of phi-weighted l-words, evaluated numerically on one basis element.
oracle::Elem numeric_nbracket(const oracle::NumericModel& model, const std::vector<int>& ms, int n, int parity) {
  const int N = static_cast<int>(ms.size()), h = N / 2, S = std::accumulate(ms.begin(), ms.end(), 0);
  Rational pre = 1;
  if (N % 2 == 0) pre = model.br(-2 * S) / (2 * model.br(-S));
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  oracle::Elem total;
  do {
    int e = 0;
    for (int j = 0; j < N; ++j) e += (h - j) * ms[perm[j]];
    oracle::Elem x = oracle::basis(n, parity);
    for (int j = N - 1; j >= 0; --j) x = model.l(ms[perm[j]], x);
    total = oracle::add(total, x, pre * model.ph(e) * oracle::perm_sign(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST(Brackets, ChiWeightsOnDiagonalAreTrivial) {
  auto d = preset("jagannathan-srinivasa");
  for (int m = -3; m <= 3; ++m) {
    BracketWeights w = chi_weight(*d, m, m);
    EXPECT_EQ(w.x, Scalar(1L));
    EXPECT_EQ(w.y, Scalar(1L));
  }
}

TEST(Brackets, Crochet1HoldsForArikCoon) {
  auto d = preset("arik-coon");
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      GradedOperator lhs;
      try {
        lhs = weighted_commutator(l_op(d, a), l_op(d, b), chi_weight(*d, a, b));
      } catch (const DegenerateWeights&) {
        continue;
      }
      GradedOperator rhs = l_op(d, a + b).scaled(d->bracket_number(a) - d->bracket_number(b));
      EXPECT_TRUE(op_equal_on_window(lhs, rhs, 8)) << a << "," << b;
    }
  }
}

TEST(Brackets, Crochet2HoldsForArikCoon) {
  auto d = preset("arik-coon");
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      GradedOperator lhs;
      try {
        lhs = weighted_commutator(l_op(d, a), g_op(d, b), tau_weight(*d, a, b));
      } catch (const DegenerateWeights&) {
        continue;
      }
      GradedOperator rhs = g_op(d, a + b).scaled(d->bracket_number(a) - d->bracket_number(b + 1));
      EXPECT_TRUE(op_equal_on_window(lhs, rhs, 8)) << a << "," << b;
    }
  }
}

// With n-independent weights, x[n+m2] - y[n+m1] = [m2] - [m1] forces p^(m2-m1) = q^(m2-m1).
TEST(Brackets, Crochet1FailsForJagannathanSrinivasa) {
  auto d = preset("jagannathan-srinivasa");
  GradedOperator lhs = weighted_commutator(l_op(d, 1), l_op(d, 0), chi_weight(*d, 1, 0));
  GradedOperator rhs = l_op(d, 1).scaled(d->bracket_number(1) - d->bracket_number(0));
  EXPECT_FALSE(op_equal_on_window(lhs, rhs, 3));
}

TEST(Brackets, GGAnticommutatorVanishes) {
  for (const auto& name : preset_names()) {
    auto d = preset(name);
    for (int a = -4; a <= 4; ++a) {
      for (int b = -4; b <= 4; ++b) EXPECT_FALSE(first_nonzero(anticommutator(g_op(d, a), g_op(d, b)), 8).has_value());
    }
  }
}

TEST(Brackets, BosonicNBracketMatchesNumericOracle) {
  oracle::Gen gen(11);
  for (const std::string name : {"jagannathan-srinivasa", "arik-coon", "biedenharn-macfarlane"}) {
    auto d = preset(name);
    auto [p, q] = oracle::sample_pq()[1];
    oracle::NumericModel model{name, p, q};
    for (int iter = 0; iter < 6; ++iter) {
      std::vector<int> ms = gen.tuple(gen.integer(3, 4), -2, 2);
      GradedOperator op;
      try {
        op = n_bracket_bosonic(d, ms);
      } catch (const SingularPrefactor&) {
        continue;
      }
      const int S = std::accumulate(ms.begin(), ms.end(), 0);
      if (ms.size() % 2 == 0 && model.br(-S) == 0) continue;
      for (int n = -3; n <= 3; ++n) {
        for (int parity = 0; parity < 2; ++parity) {
          EXPECT_EQ(to_numeric(op.apply_basis(n, parity), at(p, q)), numeric_nbracket(model, ms, n, parity));
        }
      }
    }
  }
}

TEST(Brackets, NBracketIsAlternating) {
  oracle::Gen gen(99);
  auto d = preset("arik-coon");
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<int> ms = gen.tuple(gen.integer(3, 4), -2, 2);
    std::size_t i = static_cast<std::size_t>(gen.integer(0, static_cast<int>(ms.size()) - 2));
    std::vector<int> swapped = ms;
    std::swap(swapped[i], swapped[i + 1]);
    try {
      GradedOperator a = n_bracket_bosonic(d, ms), b = n_bracket_bosonic(d, swapped);
      EXPECT_TRUE(op_equal_on_window(a, b.scaled(Scalar(-1L)), 5));
    } catch (const SingularPrefactor&) {
    }
  }
}

TEST(Brackets, ClosedFormWithTauDifferenceHoldsForArikCoonTriples) {
  auto d = preset("arik-coon");
  for (int a = -2; a <= 2; ++a) {
    for (int b = a + 1; b <= 2; ++b) {
      for (int c = b + 1; c <= 2; ++c) {
        std::vector<int> ms{a, b, c};
        EXPECT_TRUE(op_equal_on_window(n_bracket_bosonic(d, ms), closed_form_bosonic(d, ms, tau_difference(*d)), 6));
        EXPECT_FALSE(op_equal_on_window(n_bracket_bosonic(d, ms), closed_form_bosonic(d, ms), 6));
      }
    }
  }
}

TEST(Brackets, WittThreeDisplayMatchesBosonicClosedForm) {
  auto d = preset("jagannathan-srinivasa");
  std::vector<int> ms{-1, 0, 2};
  EXPECT_EQ(closed_form_bosonic_coefficient(*d, ms), witt3_bosonic_display(*d, ms));
}

TEST(Brackets, ArityLimits) {
  auto d = preset("arik-coon");
  EXPECT_THROW((void)n_bracket_bosonic(d, {1}), UnsupportedArity);
  EXPECT_THROW((void)n_bracket_bosonic(d, std::vector<int>(kMaxArity + 1, 0)), UnsupportedArity);
}

TEST(Brackets, EvenPrefactorRegularizedThroughTau) {
  auto d = preset("jagannathan-srinivasa");
  Scalar p = pvar("p"), q = pvar("q");
  EXPECT_EQ(bosonic_prefactor(*d, 4, 0), Scalar(1L));
  EXPECT_EQ(bosonic_prefactor(*d, 4, -1), (p + q) / Scalar(2L));
  EXPECT_THROW((void)bosonic_prefactor(*preset("quesne"), 4, 0), SingularPrefactor);
}

TEST(Brackets, CentralTermIsAlternating) {
  auto d = preset("arik-coon");
  std::vector<int> ms{1, -1, 2, -2};
  Scalar base = central_term_2n(*d, ms);
  EXPECT_TRUE(base.is_zero());  // the [0] factor of the m = 1 pair
  ms = {2, -2, 3, -3};
  base = central_term_2n(*d, ms);
  EXPECT_FALSE(base.is_zero());
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    std::vector<int> s = ms;
    std::swap(s[i], s[i + 1]);
    EXPECT_EQ(central_term_2n(*d, s), -base);
  }
}

TEST(Brackets, Virasoro4AgreesWithDisplayedExample) {
  auto d = preset("jagannathan-srinivasa");
  std::vector<int> ms{1, -1, 2, -2};
  do {
    ExtendedOperator e = virasoro_2n_bracket(d, ms);
    EXPECT_EQ(e.central, virasoro4_central_display(*d, ms));
    EXPECT_TRUE(op_equal_on_window(e.op, l_op(d, 0).scaled(virasoro4_g_display(*d, ms)), 6));
  } while (std::next_permutation(ms.begin(), ms.end()));
}

TEST(Brackets, SuperVirasoroClassicalLimit) {
  auto d = preset("jagannathan-srinivasa");
  Assignment one{{"p", Rational(1)}, {"q", Rational(1)}, {"c", ToVariable{"c", 1}}};
  for (int m = -3; m <= 3; ++m) {
    Scalar lim = substitute_powers(gsva_central(*d, m), param_vars(), one);
    EXPECT_EQ(lim, pvar("c") * Scalar(Rational(m * (m * m - 1), 12))) << m;
  }
}

TEST(Brackets, SuperJacobiHoldsForArikCoon) {
  auto d = preset("arik-coon");
  std::array<Generator, 3> tri{Generator{false, 1}, Generator{true, -1}, Generator{false, 2}};
  IdentityReport r = verify_super_jacobi(d, tri, 6);
  EXPECT_TRUE(r.passed()) << r.reason;
}

TEST(Brackets, LeviCivitaSymbol) {
  EXPECT_EQ(levi_civita({1, 2, 3}, {1, 2, 3}), 1);
  EXPECT_EQ(levi_civita({2, 1, 3}, {1, 2, 3}), -1);
  EXPECT_EQ(levi_civita({1, 1, 3}, {1, 2, 3}), 0);
  int count = 0, total = 0;
  for_each_permutation(4, [&](const std::vector<int>& perm, int sign) {
    ++count;
    total += sign;
    EXPECT_EQ(sign, oracle::perm_sign(perm));
  });
  EXPECT_EQ(count, 24);
  EXPECT_EQ(total, 0);
}
