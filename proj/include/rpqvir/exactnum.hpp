#pragma once

// Exact scalars: GMP rationals, sparse multivariate Laurent polynomials and
// their field of fractions.
//
// A Scalar is kept as  num / (f1^k1 * f2^k2 * ...)  where num is a Laurent
// polynomial and every fi is a primitive polynomial with no monomial content
// and a positive leading coefficient. No multivariate gcd is ever computed;
// denominators are combined factor-wise and numerators are trial-divided by
// the known factors. Equality is decided by cross-multiplication, i.e. by
// checking that the difference has a zero numerator.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rpqvir/errors.hpp"

namespace rpqvir {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr std::size_t kMaxVars = 6;
using Exponents = std::array<int, kMaxVars>;

/// An ordered list of variable names. Polynomials only combine when they share
/// a variable set.
class VarSet {
 public:
  explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxVars) {
      throw ContextMismatch("too many variables in context (max " + std::to_string(kMaxVars) + ")");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }

  std::size_t require(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw ContextMismatch("variable '" + std::string(name) + "' not in context " + describe());
    return *idx;
  }

  std::string describe() const {
    std::string out = "{";
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (i) out += ",";
      out += names_[i];
    }
    return out + "}";
  }

 private:
  std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline VarSetPtr make_context(std::vector<std::string> names) {
  return std::make_shared<const VarSet>(std::move(names));
}

/// Deformation parameters and central charge: the context of the Witt and
/// Virasoro constructions.
inline const VarSetPtr& param_vars() {
  static const VarSetPtr ctx = make_context({"p", "q", "c"});
  return ctx;
}

/// Arguments of the structure function R(x, y) together with the parameters it
/// may depend on.
inline const VarSetPtr& formal_vars() {
  static const VarSetPtr ctx = make_context({"x", "y", "p", "q"});
  return ctx;
}

/// The tau-field of the toy model.
inline const VarSetPtr& tau_vars() {
  static const VarSetPtr ctx = make_context({"tau1", "tau2"});
  return ctx;
}

namespace detail {

inline bool same_context(const VarSetPtr& a, const VarSetPtr& b) {
  return a == b || (a && b && a->names() == b->names());
}

// A null context marks a context-free constant; it adopts the other side.
inline VarSetPtr merge_context(const VarSetPtr& a, const VarSetPtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (same_context(a, b)) return a;
  throw ContextMismatch("mixing contexts " + a->describe() + " and " + b->describe());
}

inline Exponents add_exps(const Exponents& a, const Exponents& b) {
  Exponents r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) r[i] = a[i] + b[i];
  return r;
}

inline Exponents sub_exps(const Exponents& a, const Exponents& b) {
  Exponents r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) r[i] = a[i] - b[i];
  return r;
}

inline bool is_zero_exps(const Exponents& e) {
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

inline Rational rational_pow(const Rational& base, int e) {
  if (e < 0) {
    if (base == 0) throw EvaluationAtPole("negative power of zero");
    Rational inv = 1 / base;
    return rational_pow(inv, -e);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string rational_string(const Rational& r) { return r.get_str(); }

}  // namespace detail

struct Term {
  Exponents exps{};
  Rational coeff;
};

namespace detail {

// Image of a polynomial with nonnegative exponents in F_P[x_main], the other
// variables set to fixed residues. Empty optional when a denominator vanishes mod P.
inline constexpr std::uint64_t kModPrime = 4294967291ULL;

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  b %= kModPrime;
  while (e) {
    if (e & 1U) r = r * b % kModPrime;
    b = b * b % kModPrime;
    e >>= 1U;
  }
  return r;
}

inline std::optional<std::vector<std::uint64_t>> modular_image(const std::vector<Term>& terms, std::size_t main) {
  std::vector<std::uint64_t> out;
  for (const Term& t : terms) {
    std::uint64_t den = mpz_fdiv_ui(t.coeff.get_den_mpz_t(), kModPrime);
    if (den == 0) return std::nullopt;
    std::uint64_t v = mpz_fdiv_ui(t.coeff.get_num_mpz_t(), kModPrime) * powmod(den, kModPrime - 2) % kModPrime;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (i != main && t.exps[i] != 0) v = v * powmod(1000003ULL + 7919ULL * i, static_cast<std::uint64_t>(t.exps[i])) % kModPrime;
    }
    auto deg = static_cast<std::size_t>(t.exps[main]);
    if (out.size() <= deg) out.resize(deg + 1, 0);
    out[deg] = (out[deg] + v) % kModPrime;
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

// False only when the images prove that h does not divide r.
inline bool may_divide(const std::vector<Term>& r, const std::vector<Term>& h, std::size_t main) {
  auto hs = modular_image(h, main);
  auto rs = modular_image(r, main);
  if (!hs || !rs || hs->empty()) return true;
  std::vector<std::uint64_t>& a = *rs;
  const std::vector<std::uint64_t>& b = *hs;
  const std::uint64_t lead_inv = powmod(b.back(), kModPrime - 2);
  while (a.size() >= b.size()) {
    std::uint64_t c = a.back() * lead_inv % kModPrime;
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + kModPrime - c * b[i] % kModPrime) % kModPrime;
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a.empty();
}

}  // namespace detail

/// Sparse Laurent polynomial over Q. Terms are stored strictly descending in
/// lexicographic exponent order with no zero coefficients, so structural
/// equality is mathematical equality.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long value) : LaurentPoly(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  explicit LaurentPoly(const Rational& value) {
    if (value != 0) terms_.push_back(Term{Exponents{}, value});
  }

  static LaurentPoly constant(VarSetPtr ctx, const Rational& value) {
    LaurentPoly p(value);
    p.ctx_ = std::move(ctx);
    return p;
  }

  static LaurentPoly monomial(VarSetPtr ctx, const Exponents& exps, const Rational& coeff = 1) {
    LaurentPoly p;
    p.ctx_ = std::move(ctx);
    if (coeff != 0) p.terms_.push_back(Term{exps, coeff});
    return p;
  }

  static LaurentPoly variable(const VarSetPtr& ctx, std::string_view name, int power = 1) {
    Exponents e{};
    e[ctx->require(name)] = power;
    return monomial(ctx, e);
  }

  /// Builds a polynomial from unsorted terms; duplicates are merged.
  static LaurentPoly from_terms(VarSetPtr ctx, std::vector<Term> terms) {
    LaurentPoly p;
    p.ctx_ = std::move(ctx);
    canonicalize(terms);
    p.terms_ = std::move(terms);
    return p;
  }

  const VarSetPtr& context() const noexcept { return ctx_; }
  std::size_t nvars() const noexcept { return ctx_ ? ctx_->size() : 0; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && detail::is_zero_exps(terms_[0].exps));
  }

  bool is_monomial() const noexcept { return terms_.size() == 1; }

  Rational constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw ContextMismatch("polynomial is not constant");
    return terms_[0].coeff;
  }

  const Term& leading() const { return terms_.front(); }

  Exponents min_exponents() const {
    Exponents m{};
    if (terms_.empty()) return m;
    m = terms_.front().exps;
    for (const auto& t : terms_) {
      for (std::size_t i = 0; i < kMaxVars; ++i) m[i] = std::min(m[i], t.exps[i]);
    }
    return m;
  }

  Exponents max_exponents() const {
    Exponents m{};
    if (terms_.empty()) return m;
    m = terms_.front().exps;
    for (const auto& t : terms_) {
      for (std::size_t i = 0; i < kMaxVars; ++i) m[i] = std::max(m[i], t.exps[i]);
    }
    return m;
  }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  LaurentPoly scaled(const Rational& c) const {
    if (c == 0) return with_terms({});
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }

  /// Multiplication by the monomial x^delta.
  LaurentPoly shifted(const Exponents& delta) const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.exps = detail::add_exps(t.exps, delta);
    return r;
  }

  LaurentPoly pow(unsigned e) const {
    LaurentPoly result = LaurentPoly::constant(ctx_, 1);
    LaurentPoly base = *this;
    while (e) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e) base = base * base;
    }
    return result;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, false); }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, true); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    VarSetPtr ctx = detail::merge_context(a.ctx_, b.ctx_);
    if (a.is_zero() || b.is_zero()) return monomial(ctx, Exponents{}, 0);
    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
      const LaurentPoly& mono = a.terms_.size() == 1 ? a : b;
      const LaurentPoly& other = a.terms_.size() == 1 ? b : a;
      LaurentPoly r = other.shifted(mono.terms_[0].exps).scaled(mono.terms_[0].coeff);
      r.ctx_ = ctx;
      return r;
    }
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        out.push_back(Term{detail::add_exps(ta.exps, tb.exps), ta.coeff * tb.coeff});
      }
    }
    return from_terms(ctx, std::move(out));
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    if (!a.terms_.empty() && !b.terms_.empty()) detail::merge_context(a.ctx_, b.ctx_);
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
  }

  /// Total order used to sort denominator factors deterministically.
  friend int compare(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].exps != b.terms_[i].exps) return a.terms_[i].exps < b.terms_[i].exps ? -1 : 1;
      int c = cmp(a.terms_[i].coeff, b.terms_[i].coeff);
      if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
  }

  /// Exact quotient in the Laurent ring, or nullopt when the divisor does not
  /// divide this polynomial.
  std::optional<LaurentPoly> exact_divide(const LaurentPoly& divisor) const {
    if (divisor.is_zero()) throw DivisionByZero("polynomial division by zero");
    VarSetPtr ctx = detail::merge_context(ctx_, divisor.ctx_);
    if (is_zero()) return monomial(ctx, Exponents{}, 0);
    if (divisor.is_monomial()) {
      const Term& t = divisor.terms_[0];
      Exponents neg{};
      for (std::size_t i = 0; i < kMaxVars; ++i) neg[i] = -t.exps[i];
      LaurentPoly r = shifted(neg).scaled(1 / t.coeff);
      r.ctx_ = ctx;
      return r;
    }
    // Reduce to ordinary polynomials with zero monomial content.
    const Exponents dmin = divisor.min_exponents();
    const Exponents nmin = min_exponents();
    Exponents dneg{}, nneg{};
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      dneg[i] = -dmin[i];
      nneg[i] = -nmin[i];
    }
    const LaurentPoly h = divisor.shifted(dneg);
    LaurentPoly r = shifted(nneg);
    const Exponents hmax = h.max_exponents();
    const Exponents rmax = r.max_exponents();
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (rmax[i] < hmax[i]) return std::nullopt;
    }
    auto divides = [](const Exponents& small, const Exponents& big) {
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (small[i] > big[i]) return false;
      }
      return true;
    };
    if (!divides(h.terms_.back().exps, r.terms_.back().exps)) return std::nullopt;

    std::size_t main = 0;
    for (std::size_t i = 1; i < kMaxVars; ++i) {
      if (hmax[i] > hmax[main]) main = i;
    }
    if (!detail::may_divide(r.terms_, h.terms_, main)) return std::nullopt;

    const Term& hl = h.terms_.front();
    std::vector<Term> quotient;
    while (!r.is_zero()) {
      const Term& rl = r.terms_.front();
      if (!divides(hl.exps, rl.exps)) return std::nullopt;
      Exponents m = detail::sub_exps(rl.exps, hl.exps);
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (m[i] > rmax[i] - hmax[i]) return std::nullopt;
      }
      Rational c = rl.coeff / hl.coeff;
      quotient.push_back(Term{m, c});
      r = r - h.shifted(m).scaled(c);
    }
    LaurentPoly q = from_terms(ctx, std::move(quotient));
    return q.shifted(detail::sub_exps(nmin, dmin));
  }

  /// Canonical rendering: terms in descending lexicographic order, explicit
  /// integer exponents (negative ones included), rational coefficients.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      Rational c = t.coeff;
      bool negative = c < 0;
      if (negative) c = -c;
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      std::string mono = monomial_string(t.exps);
      if (mono.empty()) {
        os << detail::rational_string(c);
      } else if (c == 1) {
        os << mono;
      } else {
        os << detail::rational_string(c) << "*" << mono;
      }
    }
    return os.str();
  }

  std::string monomial_string(const Exponents& e) const {
    std::string out;
    for (std::size_t i = 0; i < nvars(); ++i) {
      if (e[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += ctx_->name(i);
      if (e[i] != 1) out += "^" + std::to_string(e[i]);
    }
    return out;
  }

 private:
  LaurentPoly with_terms(std::vector<Term> t) const {
    LaurentPoly r;
    r.ctx_ = ctx_;
    r.terms_ = std::move(t);
    return r;
  }

  static void canonicalize(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exps > b.exps; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
      t.coeff.canonicalize();
      if (!out.empty() && out.back().exps == t.exps) {
        out.back().coeff += t.coeff;
      } else {
        if (!out.empty() && out.back().coeff == 0) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
    terms = std::move(out);
  }

  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool subtract) {
    LaurentPoly r;
    r.ctx_ = detail::merge_context(a.ctx_, b.ctx_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exps > b.terms_[j].exps)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].exps > a.terms_[i].exps) {
        Term t = b.terms_[j++];
        if (subtract) t.coeff = -t.coeff;
        r.terms_.push_back(std::move(t));
      } else {
        Rational c = subtract ? Rational(a.terms_[i].coeff - b.terms_[j].coeff) : Rational(a.terms_[i].coeff + b.terms_[j].coeff);
        if (c != 0) r.terms_.push_back(Term{a.terms_[i].exps, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  VarSetPtr ctx_;
  std::vector<Term> terms_;
};

/// p = unit * x^mono * prim with prim primitive over Z, free of monomial
/// content and with a positive leading coefficient.
struct NormalizedPoly {
  Rational unit;
  Exponents mono{};
  LaurentPoly prim;
};

inline NormalizedPoly normalize(const LaurentPoly& p) {
  if (p.is_zero()) throw DivisionByZero("cannot normalize the zero polynomial");
  NormalizedPoly out;
  out.mono = p.min_exponents();
  Integer g = 0;
  Integer l = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  out.unit = Rational(g, l);
  out.unit.canonicalize();
  if (p.leading().coeff < 0) out.unit = -out.unit;
  Exponents neg{};
  for (std::size_t i = 0; i < kMaxVars; ++i) neg[i] = -out.mono[i];
  out.prim = p.shifted(neg).scaled(1 / out.unit);
  return out;
}

struct Factor {
  LaurentPoly poly;
  int mult = 1;
};

/// Element of the field of fractions of Q[vars^{+-1}].
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(LaurentPoly num) : num_(std::move(num)) {}  // NOLINT(google-explicit-constructor)

  static Scalar fraction(const LaurentPoly& num, const LaurentPoly& den) {
    return Scalar(num) / Scalar(den);
  }

  static Scalar variable(const VarSetPtr& ctx, std::string_view name, int power = 1) {
    return Scalar(LaurentPoly::variable(ctx, name, power));
  }

  const LaurentPoly& numerator() const noexcept { return num_; }
  const std::vector<Factor>& denominator_factors() const noexcept { return den_; }

  LaurentPoly denominator() const {
    LaurentPoly d = LaurentPoly::constant(context(), 1);
    for (const auto& f : den_) d = d * f.poly.pow(static_cast<unsigned>(f.mult));
    return d;
  }

  VarSetPtr context() const {
    VarSetPtr ctx = num_.context();
    for (const auto& f : den_) ctx = detail::merge_context(ctx, f.poly.context());
    return ctx;
  }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.empty(); }

  Scalar operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return add(a, b, false); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return add(a, b, true); }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_zero() || b.is_zero()) {
      Scalar z;
      z.num_ = LaurentPoly::constant(detail::merge_context(a.context(), b.context()), 0);
      return z;
    }
    // Cross-cancel before multiplying; the operands are smaller than the product.
    Scalar x = a, y = b;
    cancel_against(x.num_, y.den_);
    cancel_against(y.num_, x.den_);
    Scalar r;
    r.num_ = x.num_ * y.num_;
    r.den_ = merge_factors(x.den_, y.den_, [](int u, int v) { return u + v; });
    r.drop_empty_factors();
    return r;
  }

  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  Scalar inverse() const {
    if (is_zero()) throw DivisionByZero("division by the zero scalar");
    NormalizedPoly n = normalize(num_);
    Exponents neg{};
    for (std::size_t i = 0; i < kMaxVars; ++i) neg[i] = -n.mono[i];
    Scalar r;
    r.num_ = denominator().shifted(neg).scaled(1 / n.unit);
    if (!n.prim.is_constant()) r.den_.push_back(Factor{n.prim, 1});
    return r;
  }

  Scalar pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar result(1L);
    Scalar base = *this;
    unsigned u = static_cast<unsigned>(e);
    while (u) {
      if (u & 1U) result = result * base;
      u >>= 1U;
      if (u) base = base * base;
    }
    return result;
  }

  /// Mathematical equality via cross-multiplication.
  friend bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string to_string() const {
    if (den_.empty()) return num_.to_string();
    std::string out = "(" + num_.to_string() + ")/(";
    for (std::size_t i = 0; i < den_.size(); ++i) {
      if (i) out += "*";
      out += "(" + den_[i].poly.to_string() + ")";
      if (den_[i].mult != 1) out += "^" + std::to_string(den_[i].mult);
    }
    return out + ")";
  }

 private:
  static std::vector<Factor> merge_factors(const std::vector<Factor>& a, const std::vector<Factor>& b,
                                           int (*combine)(int, int)) {
    std::vector<Factor> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      int c = i == a.size() ? 1 : j == b.size() ? -1 : compare(a[i].poly, b[j].poly);
      if (c < 0) {
        out.push_back(Factor{a[i].poly, combine(a[i].mult, 0)});
        ++i;
      } else if (c > 0) {
        out.push_back(Factor{b[j].poly, combine(0, b[j].mult)});
        ++j;
      } else {
        out.push_back(Factor{a[i].poly, combine(a[i].mult, b[j].mult)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  static void cancel_against(LaurentPoly& num, std::vector<Factor>& den) {
    if (num.is_zero()) return;
    for (auto& f : den) {
      while (f.mult > 0) {
        auto q = num.exact_divide(f.poly);
        if (!q) break;
        num = std::move(*q);
        --f.mult;
      }
    }
  }

  void drop_empty_factors() {
    den_.erase(std::remove_if(den_.begin(), den_.end(), [](const Factor& f) { return f.mult == 0; }), den_.end());
    if (num_.is_zero()) den_.clear();
  }

  static bool same_factors(const std::vector<Factor>& a, const std::vector<Factor>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].mult != b[i].mult || !(a[i].poly == b[i].poly)) return false;
    }
    return true;
  }

  static Scalar add(const Scalar& a, const Scalar& b, bool subtract) {
    Scalar r;
    if (same_factors(a.den_, b.den_)) {
      r.num_ = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
      r.den_ = a.den_;
    } else {
      r.den_ = merge_factors(a.den_, b.den_, [](int u, int v) { return std::max(u, v); });
      LaurentPoly an = a.num_, bn = b.num_;
      std::size_t i = 0, j = 0;
      for (const auto& f : r.den_) {
        int am = 0, bm = 0;
        if (i < a.den_.size() && a.den_[i].poly == f.poly) am = a.den_[i++].mult;
        if (j < b.den_.size() && b.den_[j].poly == f.poly) bm = b.den_[j++].mult;
        if (f.mult > am) an = an * f.poly.pow(static_cast<unsigned>(f.mult - am));
        if (f.mult > bm) bn = bn * f.poly.pow(static_cast<unsigned>(f.mult - bm));
      }
      r.num_ = subtract ? an - bn : an + bn;
    }
    cancel_against(r.num_, r.den_);
    r.drop_empty_factors();
    return r;
  }

  LaurentPoly num_;
  std::vector<Factor> den_;
};

inline bool is_zero(const Scalar& a) { return a.is_zero(); }

/// Image of a source variable under substitute_powers: either a power of a
/// target variable or a rational value.
struct ToVariable {
  std::string target;
  int power = 1;
};
using VariableImage = std::variant<ToVariable, Rational>;
using Assignment = std::map<std::string, VariableImage>;

namespace detail {

struct ResolvedImage {
  bool numeric = false;
  std::size_t target = 0;
  int power = 0;
  Rational value;
};

inline std::vector<ResolvedImage> resolve(const VarSetPtr& source, const VarSetPtr& target,
                                          const Assignment& assignment) {
  std::vector<ResolvedImage> out(source ? source->size() : 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto it = assignment.find(source->name(i));
    if (it == assignment.end()) continue;  // only an error if the variable occurs
    if (const auto* tv = std::get_if<ToVariable>(&it->second)) {
      out[i].target = target->require(tv->target);
      out[i].power = tv->power;
    } else {
      out[i].numeric = true;
      out[i].value = std::get<Rational>(it->second);
    }
  }
  return out;
}

inline LaurentPoly substitute_poly(const LaurentPoly& a, const VarSetPtr& target, const Assignment& assignment) {
  const VarSetPtr& source = a.context();
  std::vector<ResolvedImage> images = resolve(source, target, assignment);
  std::vector<Term> out;
  out.reserve(a.size());
  for (const auto& t : a.terms()) {
    Term nt{Exponents{}, t.coeff};
    bool vanished = false;
    for (std::size_t i = 0; i < images.size(); ++i) {
      int e = t.exps[i];
      if (e == 0) continue;
      if (!assignment.count(source->name(i))) {
        throw ContextMismatch("assignment does not cover variable '" + source->name(i) + "'");
      }
      const ResolvedImage& img = images[i];
      if (img.numeric) {
        if (img.value == 0) {
          if (e < 0) throw EvaluationAtPole("negative power of '" + source->name(i) + "' evaluated at 0");
          vanished = true;
          break;
        }
        nt.coeff *= rational_pow(img.value, e);
      } else {
        nt.exps[img.target] += img.power * e;
      }
    }
    if (!vanished) out.push_back(std::move(nt));
  }
  return LaurentPoly::from_terms(target, std::move(out));
}

}  // namespace detail

/// Exact substitution x -> y^k or x -> value into every variable of a.
inline Scalar substitute_powers(const Scalar& a, const VarSetPtr& target, const Assignment& assignment) {
  Scalar result(detail::substitute_poly(a.numerator(), target, assignment));
  for (const auto& f : a.denominator_factors()) {
    LaurentPoly sf = detail::substitute_poly(f.poly, target, assignment);
    if (sf.is_zero()) throw EvaluationAtPole("substitution zeroes the denominator factor " + f.poly.to_string());
    Scalar d(sf);
    for (int k = 0; k < f.mult; ++k) result = result / d;
  }
  return result;
}

/// Identity assignment for every variable of ctx.
inline Assignment identity_assignment(const VarSetPtr& ctx) {
  Assignment a;
  for (const auto& n : ctx->names()) a[n] = ToVariable{n, 1};
  return a;
}

}  // namespace rpqvir
