#pragma once

// Weighted binary brackets, Levi-Civita n-brackets with their closed forms,
// Virasoro central terms and the super Jacobi verifier.

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rpqvir/deformation.hpp"
#include "rpqvir/errors.hpp"
#include "rpqvir/exactnum.hpp"
#include "rpqvir/operators.hpp"
#include "rpqvir/report.hpp"

namespace rpqvir {

inline constexpr int kMaxArity = 6;

struct BracketWeights {
  Scalar x;
  Scalar y;
};

/// Weights for [l_m1, l_m2]; (1, 1) when m1 == m2.
inline BracketWeights chi_weight(const Deformation& d, int m1, int m2) {
  if (m1 == m2) return {Scalar(1L), Scalar(1L)};
  Scalar shift = d.phi_pow(m2 - m1);
  Scalar den = shift * d.bracket_number(m1) - d.bracket_number(m2);
  if (den.is_zero()) {
    throw DegenerateWeights("chi denominator vanishes at (m1,m2)=(" + std::to_string(m1) + "," + std::to_string(m2) + ")");
  }
  Scalar chi = (d.bracket_number(m1) - d.bracket_number(m2)) / den;
  return {chi, shift * chi};
}

/// Weights for [l_m1, G_m2].
inline BracketWeights tau_weight(const Deformation& d, int m1, int m2) {
  Scalar shift = d.phi_pow(1 + m2 - m1);
  Scalar den = shift * d.bracket_number(m1) - d.bracket_number(m2) - d.phi_pow(m2);
  if (den.is_zero()) {
    throw DegenerateWeights("tau denominator vanishes at (m1,m2)=(" + std::to_string(m1) + "," + std::to_string(m2) + ")");
  }
  Scalar tau = (d.bracket_number(m1) - d.bracket_number(m2 + 1)) / den;
  return {tau, shift * tau};
}

/// w.x * A o B - w.y * B o A.
inline GradedOperator weighted_commutator(const GradedOperator& a, const GradedOperator& b, const BracketWeights& w) {
  return lin_comb({{w.x, compose(a, b)}, {-w.y, compose(b, a)}});
}

/// Plain anticommutator A o B + B o A.
inline GradedOperator anticommutator(const GradedOperator& a, const GradedOperator& b) {
  return lin_comb({{Scalar(1L), compose(a, b)}, {Scalar(1L), compose(b, a)}});
}

/// Sign of the permutation taking lower to upper; 0 on repeats or different sets.
inline int levi_civita(const std::vector<int>& upper, const std::vector<int>& lower) {
  if (upper.size() != lower.size()) return 0;
  std::vector<int> su = upper, sl = lower;
  std::sort(su.begin(), su.end());
  std::sort(sl.begin(), sl.end());
  if (std::adjacent_find(su.begin(), su.end()) != su.end()) return 0;
  if (su != sl) return 0;
  std::vector<int> perm(upper.size());
  for (std::size_t i = 0; i < upper.size(); ++i) {
    perm[i] = static_cast<int>(std::find(lower.begin(), lower.end(), upper[i]) - lower.begin());
  }
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    while (perm[i] != static_cast<int>(i)) {
      std::swap(perm[i], perm[perm[i]]);
      sign = -sign;
    }
  }
  return sign;
}

/// Calls f(perm, sign) for every permutation of {0..n-1} (Heap's algorithm,
/// one transposition per step, so the sign flips each time).
template <class F>
void for_each_permutation(int n, F&& f) {
  if (n < 0 || n > kMaxArity + 1) throw UnsupportedArity("permutation sums support n <= 7");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  int sign = 1;
  f(static_cast<const std::vector<int>&>(perm), sign);
  int i = 1;
  while (i < n) {
    if (c[i] < i) {
      if (i % 2 == 0) {
        std::swap(perm[0], perm[i]);
      } else {
        std::swap(perm[c[i]], perm[i]);
      }
      sign = -sign;
      f(static_cast<const std::vector<int>&>(perm), sign);
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
}

inline void check_arity(std::size_t n, std::size_t lo = 2) {
  if (n < lo || n > static_cast<std::size_t>(kMaxArity)) {
    throw UnsupportedArity("bracket arity " + std::to_string(n) + " outside [" + std::to_string(lo) + "," +
                           std::to_string(kMaxArity) + "]");
  }
}

inline int index_sum(const std::vector<int>& ms) { return std::accumulate(ms.begin(), ms.end(), 0); }

inline long binomial2(long n) { return n < 2 ? 0 : n * (n - 1) / 2; }

inline int floor_half(int n) { return n >= 0 ? n / 2 : -((-n + 1) / 2); }

/// Prefactor of the even-arity super bracket. The two readings differ in the
/// denominator: [-S-1] in the bracket definition, [S-1] in the closed form.
enum class SuperPrefactor { Rnb2, Rcom2 };

inline const char* prefactor_name(SuperPrefactor v) { return v == SuperPrefactor::Rnb2 ? "rnb2" : "rcom2"; }

/// ([-2S]/(2[-S]))^alpha with alpha = 1 for even n. At [-S] = 0 the ratio is
/// regularized through the tau form as (tau1^-S + tau2^-S)/2.
inline Scalar bosonic_prefactor(const Deformation& d, std::size_t n, int S) {
  if (n % 2 == 1) return Scalar(1L);
  Scalar den = d.bracket_number(-S);
  if (!den.is_zero()) return d.bracket_number(-2 * S) / (Scalar(2L) * den);
  if (!d.has_tau()) {
    throw SingularPrefactor("[" + std::to_string(-S) + "] = 0 and no tau factorization to regularize");
  }
  return d.ratio_2m_over_m(-S) / Scalar(2L);
}

/// ([-2S-1]/(2[-S-1]))^alpha or ([-2S-1]/(2[S-1]))^alpha. The numerator is not
/// of the form [2k], so a vanishing denominator is a genuine singularity.
inline Scalar super_prefactor(const Deformation& d, std::size_t n, int S, SuperPrefactor variant) {
  if (n % 2 == 1) return Scalar(1L);
  int k = variant == SuperPrefactor::Rnb2 ? -S - 1 : S - 1;
  Scalar den = d.bracket_number(k);
  if (den.is_zero()) {
    throw SingularPrefactor(std::string(prefactor_name(variant)) + " prefactor: [" + std::to_string(k) + "] = 0");
  }
  return d.bracket_number(-2 * S - 1) / (Scalar(2L) * den);
}

inline Scalar q_minus_p() { return pvar("q") - pvar("p"); }

/// tau2 - tau1; equals q - p for Jagannathan-Srinivasa.
inline Scalar tau_difference(const Deformation& d) {
  if (!d.has_tau()) throw MissingTauFactorization(d.name() + " has no tau factorization");
  return d.tau().tau2 - d.tau().tau1;
}

inline Scalar vandermonde(const Deformation& d, const std::vector<int>& ms, std::size_t count) {
  Scalar r(1L);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) r *= d.bracket_number(ms[i]) - d.bracket_number(ms[j]);
  }
  return r;
}

/// Levi-Civita sum over l-words with phi weights.
inline GradedOperator n_bracket_bosonic(const DeformationPtr& d, const std::vector<int>& ms) {
  check_arity(ms.size());
  const int n = static_cast<int>(ms.size());
  const int h = n / 2;
  Scalar pre = bosonic_prefactor(*d, ms.size(), index_sum(ms));
  std::vector<std::pair<Scalar, GradedOperator>> terms;
  for_each_permutation(n, [&](const std::vector<int>& perm, int sign) {
    int e = 0;
    Word w;
    for (int j = 0; j < n; ++j) {
      int m = ms[perm[j]];
      e += (h - (j + 1) + 1) * m;
      w.push_back({Prim::MulT, m});
      w.push_back({Prim::Delta, 0});
    }
    Scalar coeff = pre * d->phi_pow(e) * Scalar(static_cast<long>(sign * ((n % 2) ? -1 : 1)));
    terms.emplace_back(coeff, GradedOperator::word(d, std::move(w)));
  });
  return lin_comb(terms);
}

inline Scalar closed_form_bosonic_coefficient(const Deformation& d, const std::vector<int>& ms,
                                              const Scalar& base = q_minus_p()) {
  check_arity(ms.size());
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  return base.pow(static_cast<int>(binomial2(n - 1))) * d.phi_pow(-floor_half(n - 1) * S) *
         bosonic_prefactor(d, ms.size(), S) * vandermonde(d, ms, ms.size());
}

inline GradedOperator closed_form_bosonic(const DeformationPtr& d, const std::vector<int>& ms,
                                          const Scalar& base = q_minus_p()) {
  return l_op(d, index_sum(ms)).scaled(closed_form_bosonic_coefficient(*d, ms, base));
}

/// Bracket of n-1 l's and one trailing G, summed over insertion positions of G
/// and permutations of the l's.
inline GradedOperator n_bracket_super(const DeformationPtr& d, const std::vector<int>& ms, SuperPrefactor variant) {
  check_arity(ms.size());
  const int n = static_cast<int>(ms.size());
  const int h = n / 2;
  const int mn = ms.back();
  Scalar pre = super_prefactor(*d, ms.size(), index_sum(ms), variant);
  std::vector<std::pair<Scalar, GradedOperator>> terms;
  for_each_permutation(n - 1, [&](const std::vector<int>& perm, int sign) {
    for (int j = 0; j <= n - 1; ++j) {
      int beta = (h - 1) * (mn + 1);
      Word w;
      for (int k = 1; k <= n - 1; ++k) {
        int m = ms[perm[k - 1]];
        beta += (k <= j ? h - k + 1 : h - k) * m;
      }
      auto push_l = [&](int m) {
        w.push_back({Prim::MulT, m});
        w.push_back({Prim::Delta, 0});
      };
      for (int k = 1; k <= j; ++k) push_l(ms[perm[k - 1]]);
      w.push_back({Prim::MulTheta, 0});
      w.push_back({Prim::MulT, mn});
      w.push_back({Prim::Delta, 0});
      for (int k = j + 1; k <= n - 1; ++k) push_l(ms[perm[k - 1]]);
      // each l and the G carry a factor -1
      long s = ((n - 1 + j) % 2 ? -1 : 1) * sign * (n % 2 ? -1 : 1);
      terms.emplace_back(pre * d->phi_pow(beta) * Scalar(s), GradedOperator::word(d, std::move(w)));
    }
  });
  return lin_comb(terms);
}

inline Scalar closed_form_super_coefficient(const Deformation& d, const std::vector<int>& ms, SuperPrefactor variant,
                                            const Scalar& base = q_minus_p()) {
  check_arity(ms.size());
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  const Scalar top = d.bracket_number(ms.back() + 1);
  Scalar mixed(1L);
  for (int i = 0; i < n - 1; ++i) mixed *= d.bracket_number(ms[i]) - top;
  return base.pow(static_cast<int>(binomial2(n - 1))) * d.phi_pow(-(floor_half(n - 1) * S + 1)) *
         super_prefactor(d, ms.size(), S, variant) * vandermonde(d, ms, ms.size() - 1) * mixed;
}

inline GradedOperator closed_form_super(const DeformationPtr& d, const std::vector<int>& ms, SuperPrefactor variant,
                                        const Scalar& base = q_minus_p()) {
  return g_op(d, index_sum(ms)).scaled(closed_form_super_coefficient(*d, ms, variant, base));
}

/// The displayed 3-algebra coefficients.
inline Scalar witt3_bosonic_display(const Deformation& d, const std::vector<int>& ms) {
  if (ms.size() != 3) throw UnsupportedArity("witt3 display needs 3 indices");
  return q_minus_p() / d.phi_pow(index_sum(ms)) * vandermonde(d, ms, 3);
}

inline Scalar witt3_super_display(const Deformation& d, const std::vector<int>& ms) {
  if (ms.size() != 3) throw UnsupportedArity("witt3 display needs 3 indices");
  const Scalar top = d.bracket_number(ms[2] + 1);
  return q_minus_p() * (d.bracket_number(ms[0]) - d.bracket_number(ms[1])) /
         (Scalar(2L) * d.phi_pow(index_sum(ms) + 3)) * (d.bracket_number(ms[0]) - top) *
         (d.bracket_number(ms[1]) - top);
}

/// phi^-m [m-1][m][m+1] [m]/[2m], with [m]/[2m] = 1/(tau1^m + tau2^m).
inline Scalar cocycle_factor(const Deformation& d, int m) {
  return d.phi_pow(-m) * d.bracket_number(m - 1) * d.bracket_number(m) * d.bracket_number(m + 1) /
         d.ratio_2m_over_m(m);
}

inline Scalar factorial_int(int n) {
  Rational r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return Scalar(r);
}

/// Sum over permutations of pairings: every factor uses the permuted index.
inline Scalar central_term_2n(const Deformation& d, const std::vector<int>& ms) {
  if (ms.empty() || ms.size() % 2 != 0) throw UnsupportedArity("central term needs an even number of indices");
  check_arity(ms.size());
  d.tau();
  const int two_n = static_cast<int>(ms.size());
  const int n = two_n / 2;
  Scalar sum(0L);
  for_each_permutation(two_n, [&](const std::vector<int>& perm, int sign) {
    for (int l = 0; l < n; ++l) {
      if (ms[perm[2 * l]] + ms[perm[2 * l + 1]] != 0) return;
    }
    Scalar term(static_cast<long>(sign));
    for (int l = 0; l < n; ++l) term *= cocycle_factor(d, ms[perm[2 * l]]);
    sum += term;
  });
  Scalar norm = Scalar(6L) * Scalar(Rational(1L << n)) * factorial_int(n);
  return pvar("c") * sum / norm;
}

inline ExtendedOperator virasoro_2n_bracket(const DeformationPtr& d, const std::vector<int>& ms) {
  if (ms.empty() || ms.size() % 2 != 0) throw UnsupportedArity("Virasoro 2n-bracket needs an even number of indices");
  return ExtendedOperator{closed_form_bosonic(d, ms), central_term_2n(*d, ms)};
}

/// Hand-specialized n = 2 and n = 3 instances.
inline Scalar virasoro4_g_display(const Deformation& d, const std::vector<int>& ms) {
  if (ms.size() != 4) throw UnsupportedArity("4-bracket display needs 4 indices");
  const int S = index_sum(ms);
  return q_minus_p().pow(3) / d.phi_pow(S) * bosonic_prefactor(d, 4, S) * vandermonde(d, ms, 4);
}

inline Scalar virasoro6_g_display(const Deformation& d, const std::vector<int>& ms) {
  if (ms.size() != 6) throw UnsupportedArity("6-bracket display needs 6 indices");
  const int S = index_sum(ms);
  return q_minus_p().pow(10) / d.phi_pow(2 * S) * bosonic_prefactor(d, 6, S) * vandermonde(d, ms, 6);
}

namespace detail {
inline int inversion_sign(const std::vector<int>& perm) {
  int inv = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) inv += perm[i] > perm[j];
  }
  return inv % 2 ? -1 : 1;
}

inline Scalar central_display(const Deformation& d, const std::vector<int>& ms, long denominator) {
  std::vector<int> perm(ms.size());
  std::iota(perm.begin(), perm.end(), 0);
  Scalar sum(0L);
  do {
    bool paired = true;
    for (std::size_t l = 0; l + 1 < perm.size(); l += 2) paired = paired && ms[perm[l]] + ms[perm[l + 1]] == 0;
    if (!paired) continue;
    Scalar term(static_cast<long>(inversion_sign(perm)));
    for (std::size_t l = 0; l + 1 < perm.size(); l += 2) {
      int m = ms[perm[l]];
      term *= d.phi_pow(-m) / (d.tau().tau1.pow(m) + d.tau().tau2.pow(m)) * d.bracket_number(m - 1) *
              d.bracket_number(m) * d.bracket_number(m + 1);
    }
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return pvar("c") * sum / Scalar(denominator);
}
}  // namespace detail

inline Scalar virasoro4_central_display(const Deformation& d, const std::vector<int>& ms) {
  if (ms.size() != 4) throw UnsupportedArity("4-bracket display needs 4 indices");
  return detail::central_display(d, ms, 48);
}

inline Scalar virasoro6_central_display(const Deformation& d, const std::vector<int>& ms) {
  if (ms.size() != 6) throw UnsupportedArity("6-bracket display needs 6 indices");
  return detail::central_display(d, ms, 288);
}

/// c phi^m [m]/(6[2m]) [m+1][m][m-1]; reduces to c m(m^2-1)/12 at p = q = 1.
inline Scalar gsva_central(const Deformation& d, int m) {
  return pvar("c") * d.phi_pow(m) / d.ratio_2m_over_m(m) * d.bracket_number(m + 1) * d.bracket_number(m) *
         d.bracket_number(m - 1) / Scalar(6L);
}

enum class BinaryKind { LL, LG };

inline ExtendedOperator super_virasoro_binary(const DeformationPtr& d, int m1, int m2, BinaryKind kind) {
  if (kind == BinaryKind::LL) {
    Scalar central = m1 + m2 == 0 ? gsva_central(*d, m1) : Scalar(0L);
    return {l_op(d, m1 + m2).scaled(d->bracket_number(m1) - d->bracket_number(m2)), central};
  }
  Scalar central = m1 + m2 + 1 == 0 ? gsva_central(*d, m1) : Scalar(0L);
  return {g_op(d, m1 + m2).scaled(d->bracket_number(m1) - d->bracket_number(m2 + 1)), central};
}

/// Operator part of the super 2n-bracket: coefficient of G_S.
inline Scalar sv2n_f_coefficient(const Deformation& d, const std::vector<int>& ms, SuperPrefactor variant) {
  if (ms.size() % 2 != 0) throw UnsupportedArity("super 2n-bracket needs an even number of indices");
  check_arity(ms.size());
  const int two_n = static_cast<int>(ms.size());
  const int n = two_n / 2;
  const int S = index_sum(ms);
  const Scalar top = d.bracket_number(ms.back() + 1);
  Scalar mixed(1L);
  for (int i = 0; i < two_n - 1; ++i) mixed *= d.bracket_number(ms[i]) - top;
  return q_minus_p().pow(static_cast<int>(binomial2(two_n - 1))) * d.phi_pow((n - 1) * S - 1) *
         super_prefactor(d, ms.size(), S, variant) * vandermonde(d, ms, ms.size() - 1) * mixed;
}

/// Central part of the super 2n-bracket. Inner pairings run over the bosonic
/// positions other than k, using the index values at those positions.
inline Scalar sv2n_central(const Deformation& d, const std::vector<int>& ms) {
  if (ms.size() % 2 != 0) throw UnsupportedArity("super 2n-bracket needs an even number of indices");
  check_arity(ms.size());
  d.tau();
  const int two_n = static_cast<int>(ms.size());
  const int n = two_n / 2;
  const int mf = ms.back();
  Scalar total(0L);
  for (int k = 0; k < two_n - 1; ++k) {
    const int mk = ms[k];
    if (mk + mf + 1 != 0) continue;
    std::vector<int> rest;
    for (int i = 0; i < two_n - 1; ++i) {
      if (i != k) rest.push_back(ms[i]);
    }
    Scalar inner(0L);
    for_each_permutation(static_cast<int>(rest.size()), [&](const std::vector<int>& perm, int sign) {
      for (std::size_t s = 0; s + 1 < perm.size(); s += 2) {
        if (rest[perm[s]] + rest[perm[s + 1]] != 0) return;
      }
      Scalar term(static_cast<long>(sign));
      for (std::size_t s = 0; s + 1 < perm.size(); s += 2) term *= cocycle_factor(d, rest[perm[s]]);
      inner += term;
    });
    Scalar outer = Scalar(static_cast<long>(k % 2 == 0 ? 1 : -1)) * cocycle_factor(d, mk);
    total += outer * inner;
  }
  Scalar norm = Scalar(6L) * Scalar(Rational(1L << (n - 1))) * factorial_int(n - 1);
  return pvar("c") * total / norm;
}

inline ExtendedOperator super_virasoro_2n_fermionic(const DeformationPtr& d, const std::vector<int>& ms,
                                                     SuperPrefactor variant) {
  return {g_op(d, index_sum(ms)).scaled(sv2n_f_coefficient(*d, ms, variant)), sv2n_central(*d, ms)};
}

/// A generator l_m or G_m.
struct Generator {
  bool fermionic = false;
  int m = 0;

  std::string to_string() const { return std::string(fermionic ? "G" : "l") + std::to_string(m); }
};

inline GradedOperator generator_op(const DeformationPtr& d, const Generator& g) {
  return g.fermionic ? g_op(d, g.m) : l_op(d, g.m);
}

/// An operator tagged with the generator type and index it transforms like.
struct TaggedOperator {
  GradedOperator op;
  bool fermionic = false;
  int m = 0;
};

/// Deformed bracket: chi weights for (l,l), tau weights for (l,G),
/// [G,l] := -[l,G], and the plain anticommutator for (G,G).
inline TaggedOperator deformed_bracket(const Deformation& d, const TaggedOperator& a, const TaggedOperator& b) {
  const int m = a.m + b.m;
  if (!a.fermionic && !b.fermionic) return {weighted_commutator(a.op, b.op, chi_weight(d, a.m, b.m)), false, m};
  if (!a.fermionic && b.fermionic) return {weighted_commutator(a.op, b.op, tau_weight(d, a.m, b.m)), true, m};
  if (a.fermionic && !b.fermionic) {
    TaggedOperator r = deformed_bracket(d, b, a);
    r.op = r.op.scaled(Scalar(-1L));
    return r;
  }
  return {anticommutator(a.op, b.op), false, m};
}

inline Scalar rho_factor(const Deformation& d, const Generator& g) {
  return d.ratio_2m_over_m(g.fermionic ? g.m + 1 : g.m);
}

/// Cyclic sum of (-1)^{|Ai||Al|} [rho(Ai), [Aj, Al]] over (i,j,l) in C(0,1,2).
inline GradedOperator super_jacobi_sum(const DeformationPtr& d, const std::array<Generator, 3>& triple) {
  static constexpr int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::pair<Scalar, GradedOperator>> terms;
  for (const auto& c : cyc) {
    const Generator& gi = triple[c[0]];
    const Generator& gj = triple[c[1]];
    const Generator& gl = triple[c[2]];
    TaggedOperator ai{generator_op(d, gi).scaled(rho_factor(*d, gi)), gi.fermionic, gi.m};
    TaggedOperator aj{generator_op(d, gj), gj.fermionic, gj.m};
    TaggedOperator al{generator_op(d, gl), gl.fermionic, gl.m};
    TaggedOperator inner = deformed_bracket(*d, aj, al);
    TaggedOperator outer = deformed_bracket(*d, ai, inner);
    long sign = (gi.fermionic && gl.fermionic) ? -1 : 1;
    terms.emplace_back(Scalar(sign), outer.op);
  }
  return lin_comb(terms);
}

inline IdentityReport verify_super_jacobi(const DeformationPtr& d, const std::array<Generator, 3>& triple, int W) {
  std::string key = triple[0].to_string() + "," + triple[1].to_string() + "," + triple[2].to_string();
  IdentityReport r = make_report("super-jacobi", d->name(), {triple[0].m, triple[1].m, triple[2].m}, key);
  r.conventions["bracket"] = "chi weights for (l,l), tau weights for (l,G), [G,l]=-[l,G], plain anticommutator for (G,G)";
  r.conventions["rho"] = "rho(l_m)=(tau1^m+tau2^m) l_m, rho(G_m)=(tau1^(m+1)+tau2^(m+1)) G_m";
  r.window = window_string(W);
  try {
    GradedOperator sum = super_jacobi_sum(d, triple);
    set_from_difference(r, first_nonzero(sum, W));
  } catch (const DegenerateWeights& e) {
    set_skipped(r, std::string("DegenerateWeights: ") + e.what());
  }
  return r;
}

}  // namespace rpqvir
