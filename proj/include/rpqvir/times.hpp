#pragma once

// Truncated polynomials in the times t_0..t_N, Bell polynomials, differential
// operators in the times and the constraint operators built from them.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rpqvir/deformation.hpp"
#include "rpqvir/errors.hpp"
#include "rpqvir/exactnum.hpp"
#include "rpqvir/toy.hpp"

namespace rpqvir {

struct Truncation {
  int N = 8;  // largest time index
  int D = 4;  // largest total degree kept
};

inline bool operator==(const Truncation& a, const Truncation& b) { return a.N == b.N && a.D == b.D; }

class TimesPolynomial {
 public:
  using Key = std::vector<int>;

  TimesPolynomial() = default;
  explicit TimesPolynomial(Truncation tr) : tr_(tr) {}

  static TimesPolynomial constant(Truncation tr, const Scalar& c) {
    TimesPolynomial r(tr);
    r.add(Key(static_cast<std::size_t>(tr.N + 1), 0), c);
    return r;
  }

  static TimesPolynomial time(Truncation tr, int k, const Scalar& c = Scalar(1L)) {
    if (k < 0 || k > tr.N) throw TruncationExceeded("time t_" + std::to_string(k) + " outside t_0..t_" + std::to_string(tr.N));
    TimesPolynomial r(tr);
    Key e(static_cast<std::size_t>(tr.N + 1), 0);
    e[k] = 1;
    r.add(e, c);
    return r;
  }

  Truncation truncation() const noexcept { return tr_; }
  const std::map<Key, Scalar>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Scalar coefficient(const Key& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0L) : it->second;
  }

  static int degree(const Key& e) {
    int d = 0;
    for (int v : e) d += v;
    return d;
  }

  /// Adds c * t^e, dropping it when it exceeds the degree bound.
  void add(const Key& e, const Scalar& c) {
    if (c.is_zero() || degree(e) > tr_.D) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  TimesPolynomial scaled(const Scalar& c) const {
    TimesPolynomial r(tr_);
    for (const auto& [e, v] : terms_) r.add(e, v * c);
    return r;
  }

  friend TimesPolynomial operator+(const TimesPolynomial& a, const TimesPolynomial& b) {
    TimesPolynomial r = a;
    for (const auto& [e, v] : b.terms_) r.add(e, v);
    return r;
  }

  friend TimesPolynomial operator-(const TimesPolynomial& a, const TimesPolynomial& b) {
    return a + b.scaled(Scalar(-1L));
  }

  friend TimesPolynomial operator*(const TimesPolynomial& a, const TimesPolynomial& b) {
    TimesPolynomial r(a.tr_);
    for (const auto& [ea, va] : a.terms_) {
      for (const auto& [eb, vb] : b.terms_) {
        if (degree(ea) + degree(eb) > a.tr_.D) continue;
        Key e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add(e, va * vb);
      }
    }
    return r;
  }

  friend bool operator==(const TimesPolynomial& a, const TimesPolynomial& b) { return (a - b).is_zero(); }
  friend bool operator!=(const TimesPolynomial& a, const TimesPolynomial& b) { return !(a == b); }

  /// d^k / dt_i^k.
  TimesPolynomial derivative(int i, int k = 1) const {
    TimesPolynomial r(tr_);
    for (const auto& [e, v] : terms_) {
      if (e[i] < k) continue;
      Rational falling = 1;
      for (int j = 0; j < k; ++j) falling *= e[i] - j;
      Key ne = e;
      ne[i] -= k;
      r.add(ne, v * Scalar(falling));
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += "(" + it->second.to_string() + ")";
      for (std::size_t i = 0; i < it->first.size(); ++i) {
        if (it->first[i] == 0) continue;
        out += "*t_" + std::to_string(i);
        if (it->first[i] != 1) out += "^" + std::to_string(it->first[i]);
      }
    }
    return out;
  }

 private:
  Truncation tr_;
  std::map<Key, Scalar> terms_;
};

namespace detail {
inline Rational binomial_rational(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

inline Rational factorial_rational(int n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(r);
}
}  // namespace detail

/// B_0..B_K of general arguments x_1..x_K (args[0] is x_1) by
/// B_{k+1} = sum_j C(k,j) B_{k-j} x_{j+1}.
inline std::vector<TimesPolynomial> bell_polynomials(const std::vector<TimesPolynomial>& args, Truncation tr) {
  std::vector<TimesPolynomial> B;
  B.push_back(TimesPolynomial::constant(tr, Scalar(1L)));
  for (std::size_t k = 0; k < args.size(); ++k) {
    TimesPolynomial next(tr);
    for (std::size_t j = 0; j <= k; ++j) {
      next = next + (B[k - j] * args[j]).scaled(Scalar(detail::binomial_rational(static_cast<int>(k), static_cast<int>(j))));
    }
    B.push_back(std::move(next));
  }
  return B;
}

/// B_0..B_K from the coefficients of exp(sum_s x_s y^s / s!): with
/// E = sum e_n y^n, n e_n = sum_s x_s e_{n-s} / (s-1)!, and B_n = n! e_n.
inline std::vector<TimesPolynomial> bell_by_series(const std::vector<TimesPolynomial>& args, Truncation tr) {
  std::vector<TimesPolynomial> e;
  e.push_back(TimesPolynomial::constant(tr, Scalar(1L)));
  for (std::size_t n = 1; n <= args.size(); ++n) {
    TimesPolynomial en(tr);
    for (std::size_t s = 1; s <= n; ++s) {
      en = en + (args[s - 1] * e[n - s]).scaled(Scalar(Rational(1) / detail::factorial_rational(static_cast<int>(s) - 1)));
    }
    e.push_back(en.scaled(Scalar(Rational(1, static_cast<long>(n)))));
  }
  std::vector<TimesPolynomial> B;
  for (std::size_t n = 0; n < e.size(); ++n) B.push_back(e[n].scaled(Scalar(detail::factorial_rational(static_cast<int>(n)))));
  return B;
}

/// The plain times t_1..t_K as Bell arguments.
inline std::vector<TimesPolynomial> plain_times(int K, Truncation tr) {
  if (K > tr.N) throw TruncationExceeded("Bell index " + std::to_string(K) + " exceeds N=" + std::to_string(tr.N));
  std::vector<TimesPolynomial> args;
  for (int k = 1; k <= K; ++k) args.push_back(TimesPolynomial::time(tr, k));
  return args;
}

inline TimesPolynomial bell_polynomial(int k, Truncation tr) {
  if (k < 0) throw NegativeIndex("Bell polynomial of negative index");
  return bell_polynomials(plain_times(k, tr), tr).back();
}

/// Rescaled times t^a_k = (tau1^{ak} - tau2^{ak}) t_k, k = 1..K.
inline std::vector<TimesPolynomial> rescaled_times(const Taus& t, int a, int K, Truncation tr) {
  std::vector<TimesPolynomial> args;
  for (int k = 1; k <= K; ++k) args.push_back(TimesPolynomial::time(tr, k, t.t1.pow(a * k) - t.t2.pow(a * k)));
  return args;
}

/// Sum of coeff(t) * prod_k (d/dt_k)^{alpha_k}, keyed by alpha.
class DiffOperator {
 public:
  using Multi = std::vector<int>;

  DiffOperator() = default;
  explicit DiffOperator(Truncation tr) : tr_(tr) {}

  Truncation truncation() const noexcept { return tr_; }
  const std::map<Multi, TimesPolynomial>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  static Multi single(Truncation tr, int k) {
    if (k < 0 || k > tr.N) throw TruncationExceeded("derivative index " + std::to_string(k) + " exceeds N=" + std::to_string(tr.N));
    Multi a(static_cast<std::size_t>(tr.N + 1), 0);
    a[k] = 1;
    return a;
  }

  void add(const Multi& alpha, const TimesPolynomial& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
      terms_.emplace(alpha, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  DiffOperator scaled(const Scalar& c) const {
    DiffOperator r(tr_);
    for (const auto& [a, v] : terms_) r.add(a, v.scaled(c));
    return r;
  }

  friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
    DiffOperator r = a;
    for (const auto& [al, v] : b.terms_) r.add(al, v);
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [alpha, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "[" + c.to_string() + "]";
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0) continue;
        out += "*d_" + std::to_string(i);
        if (alpha[i] != 1) out += "^" + std::to_string(alpha[i]);
      }
    }
    return out;
  }

 private:
  Truncation tr_;
  std::map<Multi, TimesPolynomial> terms_;
};

inline TimesPolynomial apply_diff(const DiffOperator& op, const TimesPolynomial& f) {
  TimesPolynomial out(f.truncation());
  for (const auto& [alpha, c] : op.terms()) {
    TimesPolynomial g = f;
    for (std::size_t i = 0; i < alpha.size() && !g.is_zero(); ++i) {
      if (alpha[i]) g = g.derivative(static_cast<int>(i), alpha[i]);
    }
    out = out + c * g;
  }
  return out;
}

/// A o B, normal ordered with the multi-index Leibniz rule
/// d^alpha (c g) = sum_{gamma <= alpha} C(alpha, gamma) d^gamma(c) d^{alpha-gamma}(g).
inline DiffOperator compose(const DiffOperator& A, const DiffOperator& B) {
  DiffOperator r(A.truncation());
  for (const auto& [alpha, ca] : A.terms()) {
    for (const auto& [beta, cb] : B.terms()) {
      DiffOperator::Multi gamma(alpha.size(), 0);
      while (true) {
        TimesPolynomial dc = cb;
        Rational mult = 1;
        for (std::size_t i = 0; i < gamma.size() && !dc.is_zero(); ++i) {
          if (!gamma[i]) continue;
          dc = dc.derivative(static_cast<int>(i), gamma[i]);
          mult *= detail::binomial_rational(alpha[i], gamma[i]);
        }
        if (!dc.is_zero()) {
          DiffOperator::Multi order(alpha.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = alpha[i] - gamma[i] + beta[i];
          r.add(order, (ca * dc).scaled(Scalar(mult)));
        }
        std::size_t i = 0;
        while (i < gamma.size() && gamma[i] == alpha[i]) gamma[i++] = 0;
        if (i == gamma.size()) break;
        ++gamma[i];
      }
    }
  }
  return r;
}

/// [m+gamma]_a m! d/dt_m + phi^{m+gamma}/(tau1^a - tau2^a) sum_{k=1}^{N-m} (k+m)!/k! B_k(t^a) d/dt_{k+m}.
inline DiffOperator constraint_diff_op(const Deformation& d, int m, int a, int gamma, Truncation tr) {
  if (m < 0) throw NegativeIndex("constraint operator index must be >= 0");
  if (m > tr.N) throw TruncationExceeded("constraint index m=" + std::to_string(m) + " exceeds N=" + std::to_string(tr.N));
  Taus t = taus_of(d);
  DiffOperator op(tr);
  Scalar lead = level_number(t, a, m + gamma) * Scalar(detail::factorial_rational(m));
  op.add(DiffOperator::single(tr, m), TimesPolynomial::constant(tr, lead));
  const int K = tr.N - m;
  if (K >= 1) {
    std::vector<TimesPolynomial> B = bell_polynomials(rescaled_times(t, a, K, tr), tr);
    Scalar pre = d.phi_pow(m + gamma) / (t.t1.pow(a) - t.t2.pow(a));
    for (int k = 1; k <= K; ++k) {
      Scalar w = pre * Scalar(detail::factorial_rational(k + m) / detail::factorial_rational(k));
      op.add(DiffOperator::single(tr, k + m), B[k].scaled(w));
    }
  }
  return op;
}

/// Image of an operator under d/dt_k -> x^k / k!: a polynomial in x with
/// time-polynomial coefficients, keyed by the power of x.
using DictionaryImage = std::map<int, TimesPolynomial>;

inline DictionaryImage dictionary_image(const DiffOperator& op) {
  DictionaryImage out;
  for (const auto& [alpha, c] : op.terms()) {
    int xdeg = 0;
    Rational w = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (!alpha[i]) continue;
      xdeg += static_cast<int>(i) * alpha[i];
      for (int j = 0; j < alpha[i]; ++j) w /= detail::factorial_rational(static_cast<int>(i));
    }
    auto it = out.find(xdeg);
    TimesPolynomial add = c.scaled(Scalar(w));
    if (it == out.end()) {
      if (!add.is_zero()) out.emplace(xdeg, add);
    } else {
      it->second = it->second + add;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

inline bool images_equal(const DictionaryImage& a, const DictionaryImage& b) {
  std::map<int, bool> keys;
  for (const auto& [k, v] : a) keys[k] = true;
  for (const auto& [k, v] : b) keys[k] = true;
  for (const auto& [k, _] : keys) {
    auto ia = a.find(k), ib = b.find(k);
    TimesPolynomial va = ia == a.end() ? TimesPolynomial() : ia->second;
    TimesPolynomial vb = ib == b.end() ? TimesPolynomial() : ib->second;
    if (va.is_zero() && vb.is_zero()) continue;
    if (va.is_zero() || vb.is_zero() || va != vb) return false;
  }
  return true;
}

inline std::string image_string(const DictionaryImage& img) {
  if (img.empty()) return "0";
  std::string out;
  for (auto it = img.rbegin(); it != img.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += "x^" + std::to_string(it->first) + "*{" + it->second.to_string() + "}";
  }
  return out;
}

struct DictionaryResult {
  DictionaryImage lhs;
  DictionaryImage rhs;
  bool equal = false;
};

/// Compares T^a_m T^b_n (or T^a_m TT^b_n with theta factored out) under the
/// dictionary against the matching product right-hand side taken at
/// m+gamma, n+gamma, where every T^c_k on the right is itself the constraint
/// operator of index k and level c.
inline DictionaryResult dictionary_check(const Deformation& d, int m, int n, int a, int b, int gamma, Truncation tr,
                                         bool fermionic) {
  DiffOperator lhs = compose(constraint_diff_op(d, m, a, gamma, tr), constraint_diff_op(d, n, b, gamma, tr));
  Taus t = taus_of(d);
  const int mb = m + gamma, nb = n + gamma;
  ToyCombination rhs_comb = fermionic ? rpqprod2_rhs(t, a, b, mb, nb) : rpqprod1_rhs(t, a, b, mb, nb);
  DiffOperator rhs(tr);
  for (const auto& term : rhs_comb) rhs = rhs + constraint_diff_op(d, term.index, term.level, gamma, tr).scaled(term.coeff);
  DictionaryResult r{dictionary_image(lhs), dictionary_image(rhs), false};
  r.equal = images_equal(r.lhs, r.rhs);
  return r;
}

}  // namespace rpqvir
