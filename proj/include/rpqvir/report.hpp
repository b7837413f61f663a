#pragma once

// Verdict records shared by every suite.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rpqvir/exactnum.hpp"
#include "rpqvir/operators.hpp"

namespace rpqvir {

enum class Verdict { Pass, Fail, Skipped };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

struct Counterexample {
  std::string location;  // basis element, z-power or time monomial where the sides differ
  std::string lhs;
  std::string rhs;
  std::string difference;
};

struct IdentityReport {
  std::string identity_id;
  std::string deformation;
  std::vector<int> indices;
  std::string key;  // extra cell discriminator: parity pattern, prefactor variant, generator kinds
  std::string window;
  Verdict verdict = Verdict::Pass;
  std::string reason;
  std::optional<Counterexample> counterexample;
  std::map<std::string, std::string> conventions;

  bool passed() const { return verdict == Verdict::Pass; }
  bool failed() const { return verdict == Verdict::Fail; }
  bool skipped() const { return verdict == Verdict::Skipped; }

  /// Fail implies a counterexample.
  bool well_formed() const { return verdict != Verdict::Fail || counterexample.has_value(); }
};

inline bool report_less(const IdentityReport& a, const IdentityReport& b) {
  return std::tie(a.identity_id, a.indices, a.key) < std::tie(b.identity_id, b.indices, b.key);
}

inline std::string window_string(int W) { return "basis n in [-" + std::to_string(W) + "," + std::to_string(W) + "]"; }

inline IdentityReport make_report(std::string id, const std::string& deformation, std::vector<int> indices,
                                  std::string key = {}) {
  IdentityReport r;
  r.identity_id = std::move(id);
  r.deformation = deformation;
  r.indices = std::move(indices);
  r.key = std::move(key);
  return r;
}

inline void set_skipped(IdentityReport& r, const std::string& reason) {
  r.verdict = Verdict::Skipped;
  r.reason = reason;
  r.counterexample.reset();
}

inline void set_from_difference(IdentityReport& r, const std::optional<WindowDifference>& diff) {
  if (!diff) {
    r.verdict = Verdict::Pass;
    return;
  }
  r.verdict = Verdict::Fail;
  r.counterexample = Counterexample{diff->basis(), diff->lhs.to_string(), diff->rhs.to_string(),
                                    (diff->lhs - diff->rhs).to_string()};
}

/// Operator identity lhs == rhs on the basis window.
inline void check_operators(IdentityReport& r, const GradedOperator& lhs, const GradedOperator& rhs, int W) {
  r.window = window_string(W);
  set_from_difference(r, first_difference(lhs, rhs, W));
}

/// Scalar identity lhs == rhs.
inline void check_scalars(IdentityReport& r, const Scalar& lhs, const Scalar& rhs, const std::string& location = "scalar") {
  Scalar diff = lhs - rhs;
  if (diff.is_zero()) {
    r.verdict = Verdict::Pass;
    return;
  }
  r.verdict = Verdict::Fail;
  r.counterexample = Counterexample{location, lhs.to_string(), rhs.to_string(), diff.to_string()};
}

struct Summary {
  int pass = 0;
  int fail = 0;
  int skipped = 0;
};

inline Summary summarize(const std::vector<IdentityReport>& reports) {
  Summary s;
  for (const auto& r : reports) {
    if (r.passed()) ++s.pass;
    else if (r.failed()) ++s.fail;
    else ++s.skipped;
  }
  return s;
}

}  // namespace rpqvir
