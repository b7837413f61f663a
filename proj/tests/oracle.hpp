#pragma once

// Test-side reference computations. Everything here works on plain rationals
// at sample points, so it shares no arithmetic with the symbolic library
// beyond reading a polynomial's term list.

#include <gmpxx.h>

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rpqvir/exactnum.hpp"

namespace oracle {

using rpqvir::Rational;
using Point = std::map<std::string, Rational>;

inline Rational rpow(const Rational& b, int e) {
  Rational r = 1;
  Rational base = e < 0 ? Rational(1 / b) : b;
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  return r;
}

inline Rational eval(const rpqvir::LaurentPoly& p, const Point& at) {
  Rational sum = 0;
  for (const auto& t : p.terms()) {
    Rational v = t.coeff;
    for (std::size_t i = 0; p.context() && i < p.context()->size(); ++i) {
      if (t.exps[i] == 0) continue;
      v *= rpow(at.at(p.context()->name(i)), t.exps[i]);
    }
    sum += v;
  }
  return sum;
}

inline Rational eval(const rpqvir::Scalar& s, const Point& at) {
  Rational v = eval(s.numerator(), at);
  for (const auto& f : s.denominator_factors()) v /= rpow(eval(f.poly, at), f.mult);
  return v;
}

/// Deformed numbers written straight from each preset's R(p^n, q^n).
inline Rational bracket(const std::string& preset, int n, const Rational& p, const Rational& q) {
  const Rational pn = rpow(p, n), qn = rpow(q, n);
  if (preset == "jagannathan-srinivasa") return (pn - qn) / (p - q);
  if (preset == "arik-coon") return (qn - 1) / (q - 1);
  if (preset == "chakrabarti-jagannathan") return (1 - pn * qn) / ((1 / p - q) * pn);
  if (preset == "quesne") return (pn * qn - 1) / ((q - 1 / p) * qn);
  if (preset == "biedenharn-macfarlane") return (qn - 1 / qn) / (q - 1 / q);
  throw std::invalid_argument(preset);
}

inline Rational phi(const std::string& preset, const Rational& p, const Rational& q) {
  if (preset == "arik-coon" || preset == "biedenharn-macfarlane") return q;
  return p * q;
}

/// Numeric super-space element: (exponent, parity) -> coefficient.
using Elem = std::map<std::pair<int, int>, Rational>;

struct NumericModel {
  std::string preset;
  Rational p, q;

  Rational br(int n) const { return bracket(preset, n, p, q); }
  Rational ph(int n) const { return rpow(phi(preset, p, q), n); }

  // -t^m Delta and -theta t^m Delta on basis elements
  Elem l(int m, const Elem& x) const {
    Elem out;
    for (const auto& [k, c] : x) {
      auto [n, par] = k;
      Rational d = par ? br(n) + ph(n) : br(n);
      out[{n + m, par}] -= c * d;
    }
    return clean(out);
  }
  Elem G(int m, const Elem& x) const {
    Elem out;
    for (const auto& [k, c] : x) {
      auto [n, par] = k;
      if (par) continue;
      out[{n + m, 1}] -= c * br(n);
    }
    return clean(out);
  }
  static Elem clean(Elem e) {
    for (auto it = e.begin(); it != e.end();) it = it->second == 0 ? e.erase(it) : std::next(it);
    return e;
  }
};

inline Elem basis(int n, int parity) { return Elem{{{n, parity}, Rational(1)}}; }

inline Elem add(Elem a, const Elem& b, const Rational& s = 1) {
  for (const auto& [k, c] : b) a[k] += s * c;
  return NumericModel::clean(a);
}

/// Sample points away from roots of unity and from 0, 1.
inline std::vector<std::pair<Rational, Rational>> sample_pq() {
  return {{Rational(3, 2), Rational(5, 3)}, {Rational(2, 7), Rational(9, 4)}, {Rational(-4, 3), Rational(7, 5)}};
}

/// Sign of a permutation by counting inversions.
inline int perm_sign(const std::vector<int>& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) s = -s;
    }
  }
  return s;
}

/// Hand-rolled generator: small random Laurent polynomials over p, q.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rational rational() {
    int num = integer(-9, 9);
    int den = integer(1, 5);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  rpqvir::LaurentPoly poly(int max_terms = 4, int max_exp = 3) {
    std::vector<rpqvir::Term> terms;
    int n = integer(0, max_terms);
    const auto& ctx = rpqvir::param_vars();
    for (int i = 0; i < n; ++i) {
      rpqvir::Term t;
      t.exps[ctx->require("p")] = integer(-max_exp, max_exp);
      t.exps[ctx->require("q")] = integer(-max_exp, max_exp);
      t.coeff = rational();
      terms.push_back(t);
    }
    return rpqvir::LaurentPoly::from_terms(ctx, std::move(terms));
  }

  rpqvir::Scalar scalar() {
    rpqvir::Scalar s(poly());
    if (integer(0, 2) == 0) return s;
    rpqvir::LaurentPoly d = poly(3, 2);
    if (d.is_zero()) return s;
    return s / rpqvir::Scalar(d);
  }

  std::vector<int> tuple(int n, int lo, int hi) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i) v.push_back(integer(lo, hi));
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
