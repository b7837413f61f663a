#pragma once

// Deformations (R, phi, optional tau pair), deformed numbers, factorials,
// binomials and the preset registry.

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rpqvir/errors.hpp"
#include "rpqvir/exactnum.hpp"

namespace rpqvir {

inline Scalar pvar(std::string_view name, int power = 1) { return Scalar::variable(param_vars(), name, power); }
inline Scalar fvar(std::string_view name, int power = 1) { return Scalar::variable(formal_vars(), name, power); }

/// The pair (tau1, tau2) with [n] = (tau1^n - tau2^n) / (tau1 - tau2).
struct TauPair {
  Scalar tau1;
  Scalar tau2;
};

struct ConstructionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline constexpr int kConsistencyWindow = 6;

class Deformation {
 public:
  /// R lives in {x,y,p,q}; phi and tau in {p,q,c}. Throws InvalidDeformation
  /// when R(1,1) != 0, phi(1,1) != 1 or the tau form disagrees with R on the
  /// consistency window.
  Deformation(std::string name, Scalar R, Scalar phi, std::optional<TauPair> tau, bool phi_defaulted = false)
      : name_(std::move(name)),
        R_(std::move(R)),
        phi_(std::move(phi)),
        tau_(std::move(tau)),
        phi_defaulted_(phi_defaulted),
        cache_(std::make_shared<Cache>()) {
    check_contexts();
    check_r_vanishes_at_one();
    check_phi_at_one();
    if (tau_) check_tau_form();
  }

  const std::string& name() const noexcept { return name_; }
  const Scalar& R() const noexcept { return R_; }
  const Scalar& phi() const noexcept { return phi_; }
  bool has_tau() const noexcept { return tau_.has_value(); }
  bool phi_defaulted() const noexcept { return phi_defaulted_; }
  const std::vector<ConstructionCheck>& checks() const noexcept { return checks_; }

  const TauPair& tau() const {
    if (!tau_) throw MissingTauFactorization("deformation '" + name_ + "' has no tau factorization");
    return *tau_;
  }

  /// [n] = R(p^n, q^n).
  Scalar bracket_number(int n) const {
    {
      std::shared_lock lock(cache_->mu);
      auto it = cache_->numbers.find(n);
      if (it != cache_->numbers.end()) return it->second;
    }
    Assignment a;
    a["x"] = ToVariable{"p", n};
    a["y"] = ToVariable{"q", n};
    a["p"] = ToVariable{"p", 1};
    a["q"] = ToVariable{"q", 1};
    Scalar value = substitute_powers(R_, param_vars(), a);
    std::unique_lock lock(cache_->mu);
    return cache_->numbers.emplace(n, std::move(value)).first->second;
  }

  /// (tau1^n - tau2^n) / (tau1 - tau2).
  Scalar tau_number(int n) const {
    const TauPair& t = tau();
    return (t.tau1.pow(n) - t.tau2.pow(n)) / (t.tau1 - t.tau2);
  }

  /// The same value written as a Laurent polynomial in tau1, tau2 without
  /// division, so it can be evaluated at p = q = 1.
  Scalar tau_polynomial_form(int n) const {
    const TauPair& t = tau();
    auto positive = [&](int k) {
      Scalar s(0L);
      for (int j = 0; j < k; ++j) s += t.tau1.pow(k - 1 - j) * t.tau2.pow(j);
      return s;
    };
    if (n >= 0) return positive(n);
    return -(t.tau1 * t.tau2).pow(n) * positive(-n);
  }

  /// Regularized [2m]/[m] = tau1^m + tau2^m.
  Scalar ratio_2m_over_m(int m) const {
    const TauPair& t = tau();
    return t.tau1.pow(m) + t.tau2.pow(m);
  }

  Scalar phi_pow(int n) const { return phi_.pow(n); }

  Scalar factorial(int n) const {
    if (n < 0) throw NegativeIndex("deformed factorial of negative index " + std::to_string(n));
    Scalar r(1L);
    for (int k = 1; k <= n; ++k) r *= bracket_number(k);
    return r;
  }

  Scalar binomial(int m, int n) const {
    if (n < 0 || n > m) {
      throw IndexOutOfRange("deformed binomial needs 0 <= n <= m, got m=" + std::to_string(m) +
                            " n=" + std::to_string(n));
    }
    return factorial(m) / (factorial(n) * factorial(m - n));
  }

 private:
  struct Cache {
    std::shared_mutex mu;
    std::unordered_map<int, Scalar> numbers;
  };

  void check_contexts() const {
    auto ctx_ok = [](const Scalar& s, const VarSetPtr& want) {
      VarSetPtr ctx = s.context();
      return !ctx || detail::same_context(ctx, want);
    };
    if (!ctx_ok(R_, formal_vars())) throw InvalidDeformation("R must be a function of x, y, p, q");
    if (!ctx_ok(phi_, param_vars())) throw InvalidDeformation("phi must be a function of p, q");
    if (tau_ && (!ctx_ok(tau_->tau1, param_vars()) || !ctx_ok(tau_->tau2, param_vars()))) {
      throw InvalidDeformation("tau must be a function of p, q");
    }
  }

  void check_r_vanishes_at_one() {
    Assignment a;
    a["x"] = Rational(1);
    a["y"] = Rational(1);
    a["p"] = ToVariable{"p", 1};
    a["q"] = ToVariable{"q", 1};
    ConstructionCheck check{"R(1,1)=0", false, ""};
    try {
      Scalar v = substitute_powers(R_, param_vars(), a);
      check.passed = v.is_zero();
      check.detail = "R(1,1) = " + v.to_string();
    } catch (const EvaluationAtPole& e) {
      check.detail = std::string("R has a pole at x=y=1: ") + e.what();
    }
    checks_.push_back(check);
    if (!check.passed) throw InvalidDeformation(name_ + ": " + check.detail);
  }

  void check_phi_at_one() {
    Assignment a;
    a["p"] = Rational(1);
    a["q"] = Rational(1);
    a["c"] = ToVariable{"c", 1};
    ConstructionCheck check{"phi(1,1)=1", false, ""};
    try {
      Scalar v = substitute_powers(phi_, param_vars(), a);
      check.passed = v == Scalar(1L);
      check.detail = "phi(1,1) = " + v.to_string();
    } catch (const EvaluationAtPole& e) {
      check.detail = std::string("phi has a pole at p=q=1: ") + e.what();
    }
    checks_.push_back(check);
    if (!check.passed) throw InvalidDeformation(name_ + ": " + check.detail);
  }

  void check_tau_form() {
    if (tau_->tau1 == tau_->tau2) throw InvalidDeformation(name_ + ": tau1 must differ from tau2");
    ConstructionCheck check{"tau form", true, "R(p^n,q^n) = (tau1^n - tau2^n)/(tau1 - tau2) for |n| <= " +
                                                  std::to_string(kConsistencyWindow)};
    for (int n = -kConsistencyWindow; n <= kConsistencyWindow; ++n) {
      if (bracket_number(n) != tau_number(n)) {
        check.passed = false;
        check.detail = "tau form disagrees with R at n=" + std::to_string(n) + ": " + bracket_number(n).to_string() +
                       " vs " + tau_number(n).to_string();
        break;
      }
    }
    checks_.push_back(check);
    if (!check.passed) throw InvalidDeformation(name_ + ": " + check.detail);
  }

  std::string name_;
  Scalar R_;
  Scalar phi_;
  std::optional<TauPair> tau_;
  bool phi_defaulted_ = false;
  std::vector<ConstructionCheck> checks_;
  std::shared_ptr<Cache> cache_;
};

using DeformationPtr = std::shared_ptr<const Deformation>;

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"jagannathan-srinivasa", "arik-coon", "chakrabarti-jagannathan",
                                                 "quesne", "biedenharn-macfarlane"};
  return names;
}

/// Builds a registered deformation. phi_override replaces the preset's phi.
inline DeformationPtr preset(std::string_view name, const std::optional<Scalar>& phi_override = std::nullopt) {
  const Scalar x = fvar("x"), y = fvar("y"), fp = fvar("p"), fq = fvar("q");
  const Scalar p = pvar("p"), q = pvar("q");
  const Scalar one(1L);
  auto make = [&](Scalar R, Scalar phi, std::optional<TauPair> tau, bool phi_defaulted) {
    bool defaulted = phi_defaulted && !phi_override;
    return std::make_shared<const Deformation>(std::string(name), std::move(R), phi_override.value_or(std::move(phi)),
                                               std::move(tau), defaulted);
  };
  if (name == "jagannathan-srinivasa") {
    return make((x - y) / (fp - fq), p * q, TauPair{p, q}, false);
  }
  if (name == "arik-coon") {
    return make((y - one) / (fq - one), q, TauPair{one, q}, false);
  }
  if (name == "chakrabarti-jagannathan") {
    return make((one - x * y) / ((fp.pow(-1) - fq) * x), p * q, TauPair{p.pow(-1), q}, true);
  }
  if (name == "quesne") {
    return make((x * y - one) / ((fq - fp.pow(-1)) * y), p * q, std::nullopt, true);
  }
  if (name == "biedenharn-macfarlane") {
    return make((y - y.pow(-1)) / (fq - fq.pow(-1)), q, TauPair{q, q.pow(-1)}, true);
  }
  throw UnknownPreset("unknown preset '" + std::string(name) + "'");
}

}  // namespace rpqvir
