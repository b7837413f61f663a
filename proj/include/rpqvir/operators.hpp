#pragma once

// Parity-graded linear operators on B, stored as linear combinations of words
// in six primitives. A word acts right to left, like operator composition.
// Every primitive is a weighted shift on the basis {t^n, theta t^n}, so the
// only semantics needed is the action on basis elements.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rpqvir/deformation.hpp"
#include "rpqvir/errors.hpp"
#include "rpqvir/exactnum.hpp"
#include "rpqvir/superspace.hpp"

namespace rpqvir {

enum class Prim { MulT, MulTheta, Delta, Sigma, DT, DTheta };

struct Primitive {
  Prim kind = Prim::MulT;
  int k = 0;  // shift for MulT, unused otherwise

  friend bool operator==(const Primitive& a, const Primitive& b) { return a.kind == b.kind && a.k == b.k; }
  friend bool operator<(const Primitive& a, const Primitive& b) {
    return std::tie(a.kind, a.k) < std::tie(b.kind, b.k);
  }
};

using Word = std::vector<Primitive>;

inline int word_parity(const Word& w) {
  int p = 0;
  for (const auto& prim : w) {
    if (prim.kind == Prim::MulTheta || prim.kind == Prim::DTheta) p ^= 1;
  }
  return p;
}

inline std::string primitive_string(const Primitive& p) {
  switch (p.kind) {
    case Prim::MulT: return "t^" + std::to_string(p.k);
    case Prim::MulTheta: return "theta";
    case Prim::Delta: return "Delta";
    case Prim::Sigma: return "sigma";
    case Prim::DT: return "d_t";
    case Prim::DTheta: return "d_theta";
  }
  return "?";
}

/// A basis monomial coeff * theta^parity * t^n.
struct BasisTerm {
  int n = 0;
  int parity = 0;
  Scalar coeff;
};

/// Applies one word to coeff * theta^parity t^n; nullopt when the result is 0.
inline std::optional<BasisTerm> apply_word(const Deformation& d, const Word& word, BasisTerm x) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    switch (it->kind) {
      case Prim::MulT:
        x.n += it->k;
        break;
      case Prim::MulTheta:
        if (x.parity) return std::nullopt;
        x.parity = 1;
        break;
      case Prim::Delta: {
        Scalar v = d.bracket_number(x.n);
        if (x.parity) v += d.phi_pow(x.n);
        x.coeff *= v;
        break;
      }
      case Prim::Sigma:
        x.coeff *= d.phi_pow(x.n + x.parity);
        break;
      case Prim::DT:
        x.coeff *= d.bracket_number(x.n);
        break;
      case Prim::DTheta:
        if (!x.parity) return std::nullopt;
        x.coeff *= d.phi_pow(x.n);
        x.parity = 0;
        break;
    }
    if (x.coeff.is_zero()) return std::nullopt;
  }
  return x;
}

struct OpTerm {
  Scalar coeff;
  Word word;
};

class GradedOperator {
 public:
  GradedOperator() = default;
  GradedOperator(DeformationPtr d, int parity) : d_(std::move(d)), parity_(parity & 1) {}

  static GradedOperator zero(DeformationPtr d, int parity) { return GradedOperator(std::move(d), parity); }

  static GradedOperator identity(DeformationPtr d) { return word(std::move(d), Word{}, Scalar(1L)); }

  static GradedOperator word(DeformationPtr d, Word w, const Scalar& coeff = Scalar(1L)) {
    GradedOperator op(std::move(d), word_parity(w));
    if (!coeff.is_zero()) op.terms_.push_back(OpTerm{coeff, std::move(w)});
    return op;
  }

  const DeformationPtr& deformation() const noexcept { return d_; }
  int parity() const noexcept { return parity_; }
  const std::vector<OpTerm>& terms() const noexcept { return terms_; }
  bool has_no_terms() const noexcept { return terms_.empty(); }

  SuperElement apply_basis(int n, int parity) const {
    SuperElement out;
    if (terms_.empty()) return out;
    for (const auto& t : terms_) {
      auto r = apply_word(*d_, t.word, BasisTerm{n, parity, t.coeff});
      if (r) out.add_term(r->n, r->parity, r->coeff);
    }
    return out;
  }

  SuperElement apply(const SuperElement& a) const {
    SuperElement out;
    for (int parity = 0; parity < 2; ++parity) {
      for (const auto& [n, v] : a.part(parity)) out = out + apply_basis(n, parity).scaled(v);
    }
    return out;
  }

  GradedOperator scaled(const Scalar& c) const {
    GradedOperator r(d_, parity_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(OpTerm{t.coeff * c, t.word});
    return r;
  }

  /// Merges equal words and drops zero coefficients.
  GradedOperator simplified() const {
    std::map<Word, Scalar> merged;
    std::vector<Word> order;
    for (const auto& t : terms_) {
      auto [it, inserted] = merged.emplace(t.word, t.coeff);
      if (inserted) {
        order.push_back(t.word);
      } else {
        it->second += t.coeff;
      }
    }
    GradedOperator r(d_, parity_);
    for (const auto& w : order) {
      const Scalar& c = merged.at(w);
      if (!c.is_zero()) r.terms_.push_back(OpTerm{c, w});
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + t.coeff.to_string() + ")*[";
      for (std::size_t i = 0; i < t.word.size(); ++i) {
        if (i) out += " ";
        out += primitive_string(t.word[i]);
      }
      out += "]";
    }
    return out;
  }

  friend GradedOperator compose(const GradedOperator& a, const GradedOperator& b);
  friend GradedOperator lin_comb(const std::vector<std::pair<Scalar, GradedOperator>>& terms);

 private:
  DeformationPtr d_;
  int parity_ = 0;
  std::vector<OpTerm> terms_;
};

namespace detail {
inline DeformationPtr pick_deformation(const DeformationPtr& a, const DeformationPtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (a != b && a->name() != b->name()) throw ContextMismatch("operators built on different deformations");
  return a;
}
}  // namespace detail

/// A o B: apply B first.
inline GradedOperator compose(const GradedOperator& a, const GradedOperator& b) {
  GradedOperator r(detail::pick_deformation(a.d_, b.d_), a.parity_ ^ b.parity_);
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Word w = ta.word;
      w.insert(w.end(), tb.word.begin(), tb.word.end());
      r.terms_.push_back(OpTerm{ta.coeff * tb.coeff, std::move(w)});
    }
  }
  return r;
}

inline GradedOperator compose_all(const std::vector<GradedOperator>& ops) {
  if (ops.empty()) throw UnsupportedArity("empty composition");
  GradedOperator r = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) r = compose(r, ops[i]);
  return r;
}

/// Sum of c_i * A_i; all operators with terms must share one parity.
inline GradedOperator lin_comb(const std::vector<std::pair<Scalar, GradedOperator>>& terms) {
  DeformationPtr d;
  std::optional<int> parity;
  for (const auto& [c, op] : terms) {
    d = detail::pick_deformation(d, op.d_);
    if (op.terms_.empty()) continue;
    if (parity && *parity != op.parity_) throw MixedParity("linear combination of operators with different parity");
    parity = op.parity_;
  }
  if (!parity) parity = terms.empty() ? 0 : terms.front().second.parity_;
  GradedOperator r(d, *parity);
  for (const auto& [c, op] : terms) {
    if (c.is_zero()) continue;
    for (const auto& t : op.terms_) r.terms_.push_back(OpTerm{t.coeff * c, t.word});
  }
  return r.simplified();
}

inline GradedOperator operator+(const GradedOperator& a, const GradedOperator& b) {
  return lin_comb({{Scalar(1L), a}, {Scalar(1L), b}});
}
inline GradedOperator operator-(const GradedOperator& a, const GradedOperator& b) {
  return lin_comb({{Scalar(1L), a}, {Scalar(-1L), b}});
}

/// l_m = -t^m Delta, parity 0.
inline GradedOperator l_op(const DeformationPtr& d, int m) {
  return GradedOperator::word(d, Word{{Prim::MulT, m}, {Prim::Delta, 0}}, Scalar(-1L));
}

/// G_m = -theta t^m Delta, parity 1.
inline GradedOperator g_op(const DeformationPtr& d, int m) {
  return GradedOperator::word(d, Word{{Prim::MulTheta, 0}, {Prim::MulT, m}, {Prim::Delta, 0}}, Scalar(-1L));
}

struct WindowDifference {
  int n = 0;
  int parity = 0;
  SuperElement lhs;
  SuperElement rhs;

  std::string basis() const { return std::string(parity ? "theta*" : "") + "t^" + std::to_string(n); }
};

inline std::optional<WindowDifference> first_difference(const GradedOperator& a, const GradedOperator& b, int W) {
  for (int parity = 0; parity < 2; ++parity) {
    for (int n = -W; n <= W; ++n) {
      SuperElement x = a.apply_basis(n, parity);
      SuperElement y = b.apply_basis(n, parity);
      if (x != y) return WindowDifference{n, parity, std::move(x), std::move(y)};
    }
  }
  return std::nullopt;
}

inline bool op_equal_on_window(const GradedOperator& a, const GradedOperator& b, int W) {
  return !first_difference(a, b, W).has_value();
}

inline std::optional<WindowDifference> first_nonzero(const GradedOperator& a, int W) {
  return first_difference(a, GradedOperator::zero(a.deformation(), a.parity()), W);
}

/// Operator plus a multiple of the central element.
struct ExtendedOperator {
  GradedOperator op;
  Scalar central;
};

}  // namespace rpqvir
