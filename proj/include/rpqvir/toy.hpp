#pragma once

// Level-a toy multiplication operators over the tau field and the displayed
// product, commutator and same-level n-bracket right-hand sides.
//
//   T^a_m  = -[m]_a z^m,   TT^a_m = -theta [m]_a z^m,
//   [m]_a  = (t1^{am} - t2^{am}) / (t1^a - t2^a).
//
// Right-hand sides are kept as symbolic combinations of toy operators so the
// same combination can be evaluated as a multiplication operator, specialized
// to a preset, or mapped to differential operators.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rpqvir/brackets.hpp"
#include "rpqvir/deformation.hpp"
#include "rpqvir/errors.hpp"
#include "rpqvir/exactnum.hpp"

namespace rpqvir {

struct Taus {
  Scalar t1;
  Scalar t2;
};

/// The formal pair (tau1, tau2).
inline Taus formal_taus() {
  return {Scalar::variable(tau_vars(), "tau1"), Scalar::variable(tau_vars(), "tau2")};
}

inline Taus taus_of(const Deformation& d) { return {d.tau().tau1, d.tau().tau2}; }

/// [m]_a.
inline Scalar level_number(const Taus& t, int a, int m) {
  return (t.t1.pow(a * m) - t.t2.pow(a * m)) / (t.t1.pow(a) - t.t2.pow(a));
}

/// [2m]_a / [m]_a in regularized form.
inline Scalar level_ratio_2m_over_m(const Taus& t, int a, int m) { return t.t1.pow(a * m) + t.t2.pow(a * m); }

/// A multiplication operator sum c * theta^deg * z^k.
class ZOp {
 public:
  using Key = std::pair<int, int>;  // (z exponent, theta degree)

  ZOp() = default;

  static ZOp monomial(int zexp, int theta, const Scalar& c) {
    ZOp r;
    r.add(zexp, theta, c);
    return r;
  }

  const std::map<Key, Scalar>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(int zexp, int theta, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(Key{zexp, theta}, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  ZOp scaled(const Scalar& c) const {
    ZOp r;
    for (const auto& [k, v] : terms_) r.add(k.first, k.second, v * c);
    return r;
  }

  friend ZOp operator+(const ZOp& a, const ZOp& b) {
    ZOp r = a;
    for (const auto& [k, v] : b.terms_) r.add(k.first, k.second, v);
    return r;
  }

  friend ZOp operator-(const ZOp& a, const ZOp& b) { return a + b.scaled(Scalar(-1L)); }

  /// Commutative product with theta^2 = 0.
  friend ZOp operator*(const ZOp& a, const ZOp& b) {
    ZOp r;
    for (const auto& [ka, va] : a.terms_) {
      for (const auto& [kb, vb] : b.terms_) {
        if (ka.second + kb.second > 1) continue;
        r.add(ka.first + kb.first, ka.second + kb.second, va * vb);
      }
    }
    return r;
  }

  friend bool operator==(const ZOp& a, const ZOp& b) { return (a - b).is_zero(); }
  friend bool operator!=(const ZOp& a, const ZOp& b) { return !(a == b); }

  /// Coefficients mapped through substitute_powers.
  ZOp substituted(const VarSetPtr& target, const Assignment& assignment) const {
    ZOp r;
    for (const auto& [k, v] : terms_) r.add(k.first, k.second, substitute_powers(v, target, assignment));
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += "(" + it->second.to_string() + ")*";
      if (it->first.second) out += "theta*";
      out += "z^" + std::to_string(it->first.first);
    }
    return out;
  }

 private:
  std::map<Key, Scalar> terms_;
};

inline ZOp toy_T(const Taus& t, int a, int m) { return ZOp::monomial(m, 0, -level_number(t, a, m)); }
inline ZOp toy_TT(const Taus& t, int a, int m) { return ZOp::monomial(m, 1, -level_number(t, a, m)); }

/// coeff * T^level_index (or TT when fermionic).
struct ToyTerm {
  Scalar coeff;
  int level = 1;
  int index = 0;
  bool fermionic = false;
};

using ToyCombination = std::vector<ToyTerm>;

inline ZOp evaluate(const Taus& t, const ToyCombination& comb) {
  ZOp r;
  for (const auto& term : comb) {
    ZOp op = term.fermionic ? toy_TT(t, term.level, term.index) : toy_T(t, term.level, term.index);
    r = r + op.scaled(term.coeff);
  }
  return r;
}

inline ToyCombination concat(ToyCombination a, const ToyCombination& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline ToyCombination scaled(ToyCombination a, const Scalar& c) {
  for (auto& term : a) term.coeff *= c;
  return a;
}

namespace detail {
inline Scalar gap(const Taus& t, int a) { return t.t1.pow(a) - t.t2.pow(a); }
}  // namespace detail

// ---- products -------------------------------------------------------------

inline ToyCombination rpqprod1_rhs(const Taus& t, int a, int b, int m, int n) {
  using detail::gap;
  const int s = m + n;
  return {
      {-(gap(t, a + b) * t.t1.pow(-m * b)) / (gap(t, a) * gap(t, b)), a + b, s, false},
      {t.t2.pow(-n * b) / gap(t, b), a, s, false},
      {t.t2.pow(s * a) * t.t1.pow(-m * b) / gap(t, a), b, s, false},
  };
}

inline ToyCombination rpqprod2_rhs(const Taus& t, int a, int b, int m, int n) {
  using detail::gap;
  const int s = m + n + 1;
  return {
      {-(gap(t, a + b) * t.t1.pow(-(m + 1) * b)) / (gap(t, a) * gap(t, b)), a + b, s, true},
      {t.t2.pow(-n * b) / gap(t, b), a, s, true},
      {t.t2.pow(s * a) * t.t1.pow(-(m + 1) * b) / gap(t, a), b, s, true},
  };
}

// ---- commutators ------------------------------------------------------------

inline ToyCombination scrto_rhs(const Taus& t, int a, int b, int m, int n) {
  using detail::gap;
  const int s = m + n;
  return {
      {gap(t, a + b) * (t.t1.pow(-n * a) - t.t1.pow(-m * b)) / (gap(t, a) * gap(t, b)), a + b, s, false},
      {-(t.t2.pow(s * b) * (t.t1.pow(-n * a) - t.t2.pow(-m * b))) / gap(t, b), a, s, false},
      {t.t2.pow(s * a) * (t.t1.pow(-m * b) - t.t2.pow(-n * a)) / gap(t, a), b, s, false},
  };
}

/// The a = b display of the bosonic commutator.
inline ToyCombination scrto_same_level_rhs(const Taus& t, int a, int m, int n) {
  using detail::gap;
  const int s = m + n;
  Scalar d1 = t.t1.pow(-n * a) - t.t1.pow(-m * a);
  Scalar d2 = t.t2.pow(-n * a) - t.t2.pow(-m * a);
  return {
      {d1 / gap(t, a) * level_number(t, a, 2), 2 * a, s, false},
      {-(t.t2.pow(s * a) / gap(t, a) * (d1 + d2)), a, s, false},
  };
}

/// The anomaly f(m,n) of the general mixed commutator.
inline ToyCombination scrgo_anomaly(const Taus& t, int a, int b, int m, int n) {
  using detail::gap;
  const int s = m + n;
  return {
      {-(t.t1.pow(a + b) - t.t2.pow(a + b) * t.t1.pow(-(m + 1) * b) * t.t2.pow(b)), a + b, 1, true},
      {t.t2.pow(s * a) * t.t2.pow(n * b) / gap(t, b), a, 1, true},
      {t.t2.pow(s * (a + b)) * t.t1.pow(-(m + 1) * b) * t.t2.pow(a) / gap(t, a), b, 1, true},
  };
}

inline ToyCombination scrgo_rhs(const Taus& t, int a, int b, int m, int n) {
  using detail::gap;
  const int s = m + n;
  ToyCombination main = {
      {gap(t, a + b) * (t.t1.pow(-n * a) - t.t1.pow(-m * b + a)) / (gap(t, a) * gap(t, b)), a + b, s, true},
      {t.t2.pow(b * s) * (t.t2.pow(-b * m) * t.t1.pow(a) - t.t1.pow(-a * n)) / gap(t, b), a, s, true},
      {t.t2.pow(a * s) * (t.t1.pow(-m * b) * t.t2.pow(a) - t.t2.pow(-a * n)) / gap(t, a), b, s, true},
  };
  return concat(main, scrgo_anomaly(t, a, b, m, n));
}

inline ToyCombination scrgo_same_level_anomaly(const Taus& t, int a, int m, int n) {
  using detail::gap;
  Scalar pre = -(t.t1.pow(-(m + 1) * a) * t.t2.pow(a * (m + n))) / gap(t, a);
  return {
      {pre * t.t2.pow(a * m) * level_number(t, a, 2), 2 * a, 1, true},
      {-pre * level_ratio_2m_over_m(t, a, m + 1), a, 1, true},
  };
}

/// The a = b display of the mixed commutator.
inline ToyCombination scrgo_same_level_rhs(const Taus& t, int a, int m, int n) {
  using detail::gap;
  const int s = m + n;
  Scalar inner = (t.t2.pow(-a * m) * t.t1.pow(a) - t.t1.pow(-a * n)) + (t.t1.pow(-a * m) * t.t2.pow(a) - t.t2.pow(-a * n));
  ToyCombination main = {
      {(t.t1.pow(-a * n) - t.t1.pow(-(m - 1) * a)) / gap(t, a) * level_number(t, a, 2), 2 * a, s, true},
      {t.t2.pow(s * a) / gap(t, a) * inner, a, s, true},
  };
  return concat(main, scrgo_same_level_anomaly(t, a, m, n));
}

/// Left-hand sides computed from the operators themselves.
inline ZOp toy_product_lhs(const Taus& t, int a, int b, int m, int n, bool second_fermionic) {
  return toy_T(t, a, m) * (second_fermionic ? toy_TT(t, b, n) : toy_T(t, b, n));
}

/// AB - BA; the first operator is always bosonic.
inline ZOp toy_commutator_lhs(const Taus& t, int a, int b, int m, int n, bool second_fermionic) {
  ZOp A = toy_T(t, a, m);
  ZOp B = second_fermionic ? toy_TT(t, b, n) : toy_T(t, b, n);
  return A * B - B * A;
}

/// Anticommutator of two fermionic toy operators.
inline ZOp toy_anticommutator(const Taus& t, int a, int b, int m, int n) {
  ZOp A = toy_TT(t, a, m), B = toy_TT(t, b, n);
  return A * B + B * A;
}

// ---- same-level n-brackets -------------------------------------------------

inline ZOp toy_ordered_product(const Taus& t, int a, const std::vector<int>& ms, bool last_fermionic) {
  ZOp r = ZOp::monomial(0, 0, Scalar(1L));
  for (std::size_t i = 0; i < ms.size(); ++i) {
    bool f = last_fermionic && i + 1 == ms.size();
    r = r * (f ? toy_TT(t, a, ms[i]) : toy_T(t, a, ms[i]));
  }
  return r;
}

/// Levi-Civita sum of products of bosonic toy operators.
inline ZOp toy_n_bracket_bosonic(const Taus& t, int a, const std::vector<int>& ms) {
  check_arity(ms.size());
  ZOp r;
  const int n = static_cast<int>(ms.size());
  for_each_permutation(n, [&](const std::vector<int>& perm, int sign) {
    ZOp prod = ZOp::monomial(0, 0, Scalar(static_cast<long>(sign)));
    for (int i = 0; i < n; ++i) prod = prod * toy_T(t, a, ms[perm[i]]);
    r = r + prod;
  });
  return r;
}

/// Super n-bracket: the fermionic TT_{m_n} inserted at every position among
/// the permuted bosonic factors.
inline ZOp toy_n_bracket_super(const Taus& t, int a, const std::vector<int>& ms) {
  check_arity(ms.size());
  const int n = static_cast<int>(ms.size());
  ZOp r;
  for_each_permutation(n - 1, [&](const std::vector<int>& perm, int sign) {
    for (int j = 0; j <= n - 1; ++j) {
      long s = ((n - 1 + j) % 2 ? -1 : 1) * sign;
      ZOp prod = ZOp::monomial(0, 0, Scalar(s));
      for (int k = 0; k < j; ++k) prod = prod * toy_T(t, a, ms[perm[k]]);
      prod = prod * toy_TT(t, a, ms.back());
      for (int k = j; k < n - 1; ++k) prod = prod * toy_T(t, a, ms[perm[k]]);
      r = r + prod;
    }
  });
  return r;
}

namespace detail {
template <class F>
Scalar pair_product(std::size_t n, F&& f) {
  Scalar r(1L);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) r *= f(j, k);
  }
  return r;
}
}  // namespace detail

inline Scalar toy_M(const Taus& t, int a, const std::vector<int>& ms) {
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  Scalar v = detail::pair_product(ms.size(), [&](auto j, auto k) { return level_number(t, a, ms[k]) - level_number(t, a, ms[j]); });
  Scalar w = detail::pair_product(ms.size(), [&](auto j, auto k) { return t.t2.pow(a * ms[k]) - t.t2.pow(a * ms[j]); });
  return t.t1.pow(-a * (n - 1) * S) * (detail::gap(t, a).pow(static_cast<int>(binomial2(n))) * v + w);
}

inline Scalar toy_C(const Taus& t, int a, const std::vector<int>& ms) {
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  Scalar v = detail::pair_product(ms.size(), [&](auto j, auto k) { return level_number(t, a, ms[k]) - level_number(t, a, ms[j]); });
  Scalar w = detail::pair_product(ms.size(), [&](auto j, auto k) { return t.t1.pow(a * ms[k]) - t.t1.pow(a * ms[j]); });
  Scalar sign((n - 1) % 2 ? -1L : 1L);
  return t.t2.pow(-a * (n - 1) * S) * (detail::gap(t, a).pow(static_cast<int>(binomial2(n))) * v + sign * w);
}

inline ToyCombination toy_n_bracket_bosonic_closed(const Taus& t, int a, const std::vector<int>& ms) {
  check_arity(ms.size());
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  Scalar pre = Scalar((n + 1) % 2 ? -1L : 1L) / detail::gap(t, a).pow(n - 1);
  Scalar M = toy_M(t, a, ms);
  Scalar C = toy_C(t, a, ms);
  return {
      {pre * M * level_number(t, a, n), n * a, S, false},
      {-pre * level_number(t, a, n - 1) / t.t2.pow(-a * S) * (M + C), (n - 1) * a, S, false},
  };
}

inline Scalar toy_A(const Taus& t, int a, const std::vector<int>& ms) {
  const int n = static_cast<int>(ms.size());
  int shifted = 0;
  for (int m : ms) shifted += m - 1;
  Scalar v = detail::pair_product(ms.size(), [&](auto j, auto k) { return level_number(t, a, ms[k] - 1) - level_number(t, a, ms[j]); });
  Scalar w = detail::pair_product(ms.size(), [&](auto j, auto k) { return t.t2.pow(a * (ms[k] - 1)) - t.t2.pow(a * ms[j]); });
  return t.t1.pow(-a * (n - 1) * shifted) * (detail::gap(t, a).pow(static_cast<int>(binomial2(n))) * v + w);
}

inline Scalar toy_F(const Taus& t, int a, const std::vector<int>& ms) {
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  const Scalar tw = t.t2.pow(static_cast<int>(binomial2(n)));
  Scalar v = detail::pair_product(ms.size(), [&](auto j, auto k) { return level_number(t, a, ms[k]) - level_number(t, a, ms[j]) * tw; });
  Scalar w = detail::pair_product(ms.size(), [&](auto j, auto k) { return t.t2.pow(a * ms[k]) - t.t2.pow(a * ms[j]) * tw; });
  return t.t1.pow(-a * (n - 1) * S) * (detail::gap(t, a).pow(static_cast<int>(binomial2(n))) * v + w);
}

inline Scalar toy_S(const Taus& t, int a, const std::vector<int>& ms) {
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  const Scalar tw = t.t1.pow(static_cast<int>(binomial2(n)));
  Scalar v = detail::pair_product(ms.size(), [&](auto j, auto k) { return level_number(t, a, ms[k]) - level_number(t, a, ms[j]) * tw; });
  Scalar w = detail::pair_product(ms.size(), [&](auto j, auto k) { return t.t1.pow(a * ms[k]) - t.t1.pow(a * ms[j]) * tw; });
  Scalar sign((n - 1) % 2 ? -1L : 1L);
  return t.t2.pow(-a * (n - 1) * S) * (detail::gap(t, a).pow(static_cast<int>(binomial2(n))) * v + sign * w);
}

/// Anomaly of the super n-bracket, with m read as m_1.
inline ToyCombination toy_super_anomaly(const Taus& t, int a, const std::vector<int>& ms) {
  const int n = static_cast<int>(ms.size());
  const int m = ms.front();
  const int S = index_sum(ms);
  Scalar pre = Scalar((n + 1) % 2 ? -1L : 1L) * t.t1.pow(-(m + 1) * a) * t.t2.pow(a * S) / detail::gap(t, a).pow(n - 1);
  return {
      {pre * t.t2.pow(a * m) * level_number(t, a, n), n * a, 1, true},
      {-pre * level_ratio_2m_over_m(t, a, m + 1), (n - 1) * a, 1, true},
  };
}

/// The second term is the bosonic T^{(n-1)a}, as displayed.
inline ToyCombination toy_n_bracket_super_closed(const Taus& t, int a, const std::vector<int>& ms) {
  check_arity(ms.size());
  const int n = static_cast<int>(ms.size());
  const int S = index_sum(ms);
  Scalar pre = Scalar((n + 1) % 2 ? -1L : 1L) / detail::gap(t, a).pow(n - 1);
  ToyCombination main = {
      {pre * toy_A(t, a, ms) * level_number(t, a, n), n * a, S, true},
      {-pre * level_number(t, a, n - 1) / t.t2.pow(-a * S) * (toy_F(t, a, ms) + toy_S(t, a, ms)), (n - 1) * a, S, false},
  };
  return concat(main, toy_super_anomaly(t, a, ms));
}

// ---- specializations -------------------------------------------------------

/// tau1 -> 1, tau2 -> q.
inline Assignment arik_coon_assignment() {
  Assignment s;
  s["tau1"] = Rational(1);
  s["tau2"] = ToVariable{"q", 1};
  return s;
}

/// tau1 -> p, tau2 -> q.
inline Assignment jagannathan_srinivasa_assignment() {
  Assignment s;
  s["tau1"] = ToVariable{"p", 1};
  s["tau2"] = ToVariable{"q", 1};
  return s;
}

inline Taus arik_coon_taus() { return {Scalar(1L), pvar("q")}; }
inline Taus jagannathan_srinivasa_taus() { return {pvar("p"), pvar("q")}; }

namespace detail {
inline Scalar qa(int a) { return pvar("q", a); }
inline Scalar pa(int a) { return pvar("p", a); }
inline Scalar ac_gap(int a) { return qa(a) - Scalar(1L); }
inline Scalar js_gap(int a) { return pa(a) - qa(a); }
}  // namespace detail

/// Printed q-instances. Their operators use [m]_{q^a} = (1 - q^{am})/(1 - q^a),
/// the tau form at (1, q).
inline ToyCombination ac_prod1(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n;
  return {
      {-(ac_gap(a + b)) / (ac_gap(a) * ac_gap(b)), a + b, s, false},
      {Scalar(1L) / ac_gap(b), a, s, false},
      {qa(-m * b) / ac_gap(a), b, s, false},
  };
}

inline ToyCombination ac_prod2(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n + 1;
  return {
      {-(ac_gap(a + b) * qa(-(m + 1) * b)) / (ac_gap(a) * ac_gap(b)), a + b, s, true},
      {Scalar(1L) / ac_gap(b), a, s, true},
      {qa(-(m + 1) * b) / ac_gap(a), b, s, true},
  };
}

inline ToyCombination ac_scrto(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n;
  return {
      {ac_gap(a + b) * (qa(-n * a) - qa(-m * b)) / (ac_gap(a) * ac_gap(b)), a + b, s, false},
      {-(qa(-n * a) - Scalar(1L)) / ac_gap(b), a, s, false},
      {(qa(-m * b) - Scalar(1L)) / ac_gap(a), b, s, false},
  };
}

/// The middle anomaly coefficient is printed garbled; read as 1/(q^b - 1).
inline ToyCombination ac_scrgo(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n;
  return {
      {ac_gap(a + b) * (qa(-n * a) - qa(-m * b + a)) / (ac_gap(a) * ac_gap(b)), a + b, s, true},
      {(qa(-m * b) * qa(a) - Scalar(1L)) / ac_gap(b), a, s, true},
      {(qa(-m * b) - Scalar(1L)) / ac_gap(a), b, s, true},
      {-(ac_gap(a + b) * qa(-m * b - b)) / (ac_gap(a) * ac_gap(b)), a + b, 1, true},
      {Scalar(1L) / ac_gap(b), a, 1, true},
      {qa(-m * b - b) / ac_gap(a), b, 1, true},
  };
}

inline ToyCombination js_prod1(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n;
  return {
      {-(js_gap(a + b) * pa(-m * b)) / (js_gap(a) * js_gap(b)), a + b, s, false},
      {qa(-n * b) / js_gap(b), a, s, false},
      {qa(s * a) * pa(-m * b) / js_gap(a), b, s, false},
  };
}

inline ToyCombination js_prod2(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n + 1;
  return {
      {-(js_gap(a + b) * pa(-(m + 1) * b)) / (js_gap(a) * js_gap(b)), a + b, s, true},
      {qa(-n * b) / js_gap(b), a, s, true},
      {qa(s * a) * pa(-(m + 1) * b) / js_gap(a), b, s, true},
  };
}

inline ToyCombination js_scrto(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n;
  return {
      {js_gap(a + b) * (pa(-n * a) - pa(-m * b)) / (js_gap(a) * js_gap(b)), a + b, s, false},
      {-(qa(s * b) * (pa(-n * a) - qa(-m * b))) / js_gap(b), a, s, false},
      {qa(s * a) * (pa(-m * b) - qa(-n * a)) / js_gap(a), b, s, false},
  };
}

inline ToyCombination js_scrgo(int a, int b, int m, int n) {
  using namespace detail;
  const int s = m + n;
  return {
      {js_gap(a + b) * (pa(-n * a) - pa(-m * b + a)) / (js_gap(a) * js_gap(b)), a + b, s, true},
      {qa(s * b) * (qa(-m * b) * pa(a) - pa(-n * a)) / js_gap(b), a, s, true},
      {qa(s * a) * (pa(-m * b) * qa(a) - qa(-n * a)) / js_gap(a), b, s, true},
      {-(js_gap(a + b) * pa(-m * b - b) * qa((a + b) * s)) / (js_gap(a) * js_gap(b)), a + b, 1, true},
      {qa(s * a) * qa(n * b) / js_gap(b), a, 1, true},
      {qa(s * (a + b)) * pa(-m * b - b) * qa(a) / js_gap(a), b, 1, true},
  };
}

}  // namespace rpqvir
