#pragma once

// The superalgebra B = B0 + theta*B0 with B0 the Laurent polynomials in t, and
// the maps sigma, d/dt, d/dtheta and Delta = d/dt + theta d/dtheta.

#include <map>
#include <string>
#include <utility>

#include "rpqvir/deformation.hpp"
#include "rpqvir/exactnum.hpp"

namespace rpqvir {

class SuperElement {
 public:
  using Part = std::map<int, Scalar>;

  SuperElement() = default;

  static SuperElement basis(int n, int parity, const Scalar& coeff = Scalar(1L)) {
    SuperElement e;
    e.add_term(n, parity, coeff);
    return e;
  }

  static SuperElement t(int n, const Scalar& coeff = Scalar(1L)) { return basis(n, 0, coeff); }
  static SuperElement theta_t(int n, const Scalar& coeff = Scalar(1L)) { return basis(n, 1, coeff); }

  const Part& even() const noexcept { return even_; }
  const Part& odd() const noexcept { return odd_; }
  const Part& part(int parity) const noexcept { return parity ? odd_ : even_; }
  bool is_zero() const noexcept { return even_.empty() && odd_.empty(); }
  std::size_t size() const noexcept { return even_.size() + odd_.size(); }

  Scalar coefficient(int n, int parity) const {
    const Part& p = part(parity);
    auto it = p.find(n);
    return it == p.end() ? Scalar(0L) : it->second;
  }

  void add_term(int n, int parity, const Scalar& coeff) {
    if (coeff.is_zero()) return;
    Part& p = parity ? odd_ : even_;
    auto it = p.find(n);
    if (it == p.end()) {
      p.emplace(n, coeff);
      return;
    }
    it->second += coeff;
    if (it->second.is_zero()) p.erase(it);
  }

  SuperElement scaled(const Scalar& c) const {
    SuperElement r;
    for (const auto& [n, v] : even_) r.add_term(n, 0, v * c);
    for (const auto& [n, v] : odd_) r.add_term(n, 1, v * c);
    return r;
  }

  friend SuperElement operator+(const SuperElement& a, const SuperElement& b) {
    SuperElement r = a;
    for (const auto& [n, v] : b.even_) r.add_term(n, 0, v);
    for (const auto& [n, v] : b.odd_) r.add_term(n, 1, v);
    return r;
  }

  friend SuperElement operator-(const SuperElement& a, const SuperElement& b) { return a + b.scaled(Scalar(-1L)); }

  /// Super-commutative product; theta^2 = 0 drops the odd-odd part.
  friend SuperElement operator*(const SuperElement& a, const SuperElement& b) {
    SuperElement r;
    for (const auto& [i, u] : a.even_) {
      for (const auto& [j, v] : b.even_) r.add_term(i + j, 0, u * v);
      for (const auto& [j, v] : b.odd_) r.add_term(i + j, 1, u * v);
    }
    for (const auto& [i, u] : a.odd_) {
      for (const auto& [j, v] : b.even_) r.add_term(i + j, 1, u * v);
    }
    return r;
  }

  friend bool operator==(const SuperElement& a, const SuperElement& b) { return (a - b).is_zero(); }
  friend bool operator!=(const SuperElement& a, const SuperElement& b) { return !(a == b); }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    auto emit = [&](const Part& part, bool theta) {
      for (auto it = part.rbegin(); it != part.rend(); ++it) {
        if (!out.empty()) out += " + ";
        out += "(" + it->second.to_string() + ")*";
        if (theta) out += "theta*";
        out += "t^" + std::to_string(it->first);
      }
    };
    emit(even_, false);
    emit(odd_, true);
    return out;
  }

 private:
  Part even_;
  Part odd_;
};

/// Maps every basis element to a scalar multiple of itself, (n, parity) -> f(n, parity).
template <class F>
SuperElement diagonal_map(const SuperElement& a, F&& f) {
  SuperElement r;
  for (const auto& [n, v] : a.even()) r.add_term(n, 0, v * f(n, 0));
  for (const auto& [n, v] : a.odd()) r.add_term(n, 1, v * f(n, 1));
  return r;
}

inline SuperElement sigma(const Deformation& d, const SuperElement& a) {
  return diagonal_map(a, [&](int n, int parity) { return d.phi_pow(n + parity); });
}

inline SuperElement d_t(const Deformation& d, const SuperElement& a) {
  return diagonal_map(a, [&](int n, int) { return d.bracket_number(n); });
}

/// theta t^n -> phi^n t^n, t^n -> 0.
inline SuperElement d_theta(const Deformation& d, const SuperElement& a) {
  SuperElement r;
  for (const auto& [n, v] : a.odd()) r.add_term(n, 0, v * d.phi_pow(n));
  return r;
}

/// theta * a.
inline SuperElement mul_theta(const SuperElement& a) {
  SuperElement r;
  for (const auto& [n, v] : a.even()) r.add_term(n, 1, v);
  return r;
}

inline SuperElement delta(const Deformation& d, const SuperElement& a) {
  return diagonal_map(a, [&](int n, int parity) {
    Scalar v = d.bracket_number(n);
    if (parity) v += d.phi_pow(n);
    return v;
  });
}

/// Delta(ab) - Delta(a) b - sigma(a) Delta(b).
inline SuperElement sigma_derivation_defect(const Deformation& d, const SuperElement& a, const SuperElement& b) {
  return delta(d, a * b) - delta(d, a) * b - sigma(d, a) * delta(d, b);
}

inline bool check_sigma_derivation(const Deformation& d, const SuperElement& a, const SuperElement& b) {
  return sigma_derivation_defect(d, a, b).is_zero();
}

}  // namespace rpqvir
