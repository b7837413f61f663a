#pragma once

// Verification suites. Each suite turns one family of identities into a list
// of IdentityReports over a window of indices; run_suites evaluates suites
// concurrently and merges the reports in a stable order.

#include <algorithm>
#include <array>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rpqvir/brackets.hpp"
#include "rpqvir/deformation.hpp"
#include "rpqvir/errors.hpp"
#include "rpqvir/exactnum.hpp"
#include "rpqvir/operators.hpp"
#include "rpqvir/report.hpp"
#include "rpqvir/superspace.hpp"
#include "rpqvir/times.hpp"
#include "rpqvir/toy.hpp"

namespace rpqvir {

struct SuiteWindow {
  int index_min = -3;  // binary suites and toy grids
  int index_max = 3;
  int wide_index_min = -4;  // sigma-derivation and crochet3
  int wide_index_max = 4;
  int nary_index_min = -2;  // n-ary suites
  int nary_index_max = 2;
  int W = 8;       // basis window for binary operator identities
  int nary_W = 6;  // basis window for n-ary operator identities
};

struct SuiteSettings {
  DeformationPtr deformation;
  SuiteWindow window;
  SuperPrefactor prefactor_variant = SuperPrefactor::Rnb2;
  Truncation dictionary_truncation{8, 3};
  Truncation bell_truncation{8, 8};
};

inline const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = {
      "deformed-numbers", "sigma-derivation", "crochet1",      "crochet2",         "crochet3",
      "witt3",            "rcom1-vs-rnb1",    "rcom2-vs-rnb2", "nbracket-antisymmetry", "virasoro-2n",
      "gsva",             "sv2n",             "super-jacobi",  "tau-identities",   "bell",
      "rpqprod",          "scrto",            "scrgo",         "toy-nbracket",     "dictionary",
      "ac-specialization", "js-specialization"};
  return ids;
}

inline bool is_suite_id(const std::string& id) {
  const auto& ids = suite_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

/// Identity ids whose failure makes `verify` exit with status 1. crochet1 and
/// crochet2 only count for the Jagannathan-Srinivasa and Arik-Coon presets.
inline bool is_must_pass(const IdentityReport& r) {
  static const std::set<std::string> always = {"deformed-numbers", "crochet3",          "nbracket-antisymmetry",
                                               "virasoro-2n",      "toy-commute",       "ac-specialization",
                                               "js-specialization", "bell",             "tau-identities"};
  if (always.count(r.identity_id)) return true;
  if (r.identity_id == "crochet1" || r.identity_id == "crochet2") {
    return r.deformation == "jagannathan-srinivasa" || r.deformation == "arik-coon";
  }
  return false;
}

inline bool has_must_pass_failure(const std::vector<IdentityReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const IdentityReport& r) { return r.failed() && is_must_pass(r); });
}

namespace detail {

/// Evaluates f on every cell, spreading contiguous chunks over threads; the
/// output order matches the input order.
template <class Cell, class F>
std::vector<IdentityReport> run_cells(const std::vector<Cell>& cells, F f) {
  const std::size_t hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t chunks = std::min<std::size_t>(hw, std::max<std::size_t>(1, cells.size() / 4));
  std::vector<std::future<std::vector<IdentityReport>>> futures;
  const std::size_t per = (cells.size() + chunks - 1) / std::max<std::size_t>(chunks, 1);
  for (std::size_t begin = 0; begin < cells.size(); begin += per) {
    const std::size_t end = std::min(cells.size(), begin + per);
    futures.push_back(std::async(std::launch::async, [&, begin, end] {
      std::vector<IdentityReport> out;
      for (std::size_t i = begin; i < end; ++i) {
        auto rs = f(cells[i]);
        out.insert(out.end(), std::make_move_iterator(rs.begin()), std::make_move_iterator(rs.end()));
      }
      return out;
    }));
  }
  std::vector<IdentityReport> all;
  for (auto& fu : futures) {
    auto rs = fu.get();
    all.insert(all.end(), std::make_move_iterator(rs.begin()), std::make_move_iterator(rs.end()));
  }
  return all;
}

inline std::vector<int> range(int lo, int hi) {
  std::vector<int> r;
  for (int i = lo; i <= hi; ++i) r.push_back(i);
  return r;
}

inline std::vector<std::vector<int>> all_tuples(int n, int lo, int hi) {
  std::vector<std::vector<int>> out{{}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& t : out) {
      for (int v = lo; v <= hi; ++v) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline bool strictly_increasing(const std::vector<int>& t) {
  return std::adjacent_find(t.begin(), t.end(), [](int a, int b) { return a >= b; }) == t.end();
}

inline bool non_decreasing(const std::vector<int>& t) { return std::is_sorted(t.begin(), t.end()); }

inline bool distinct(std::vector<int> t) {
  std::sort(t.begin(), t.end());
  return std::adjacent_find(t.begin(), t.end()) == t.end();
}

inline std::string tuple_string(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

inline void add_deformation_conventions(IdentityReport& r, const Deformation& d) {
  if (d.phi_defaulted()) r.conventions["phi"] = "defaulted to " + d.phi().to_string();
}

inline IdentityReport base(const std::string& id, const Deformation& d, std::vector<int> idx, std::string key = {}) {
  IdentityReport r = make_report(id, d.name(), std::move(idx), std::move(key));
  add_deformation_conventions(r, d);
  return r;
}

/// Runs body; domain errors listed as skippable turn the report into a skip.
template <class Body>
void guarded(IdentityReport& r, Body&& body) {
  try {
    body();
  } catch (const DegenerateWeights& e) {
    set_skipped(r, std::string("DegenerateWeights: ") + e.what());
  } catch (const SingularPrefactor& e) {
    set_skipped(r, std::string("SingularPrefactor: ") + e.what());
  } catch (const MissingTauFactorization& e) {
    set_skipped(r, std::string("MissingTauFactorization: ") + e.what());
  } catch (const TruncationExceeded& e) {
    set_skipped(r, std::string("TruncationExceeded: ") + e.what());
  } catch (const EvaluationAtPole& e) {
    set_skipped(r, std::string("EvaluationAtPole: ") + e.what());
  }
}

inline void check_zops(IdentityReport& r, const ZOp& lhs, const ZOp& rhs) {
  if (lhs == rhs) {
    r.verdict = Verdict::Pass;
    return;
  }
  ZOp diff = lhs - rhs;
  const auto& [key, v] = *diff.terms().rbegin();
  std::string loc = std::string(key.second ? "theta*" : "") + "z^" + std::to_string(key.first);
  r.verdict = Verdict::Fail;
  r.counterexample = Counterexample{loc, lhs.to_string(), rhs.to_string(), diff.to_string()};
}

inline Scalar at_one(const Scalar& s) {
  Assignment a;
  a["p"] = Rational(1);
  a["q"] = Rational(1);
  a["c"] = ToVariable{"c", 1};
  return substitute_powers(s, param_vars(), a);
}

}  // namespace detail

// ---- deformation and superspace suites -------------------------------------

inline std::vector<IdentityReport> suite_deformed_numbers(const SuiteSettings& s) {
  const Deformation& d = *s.deformation;
  std::vector<IdentityReport> out;
  for (int n = -kConsistencyWindow; n <= kConsistencyWindow; ++n) {
    IdentityReport r = detail::base("deformed-numbers", d, {n}, "tau-form");
    r.window = "n in [-6,6]";
    detail::guarded(r, [&] { check_scalars(r, d.bracket_number(n), d.tau_number(n), "[" + std::to_string(n) + "]"); });
    out.push_back(std::move(r));

    IdentityReport c = detail::base("deformed-numbers", d, {n}, "classical-limit");
    c.conventions["form"] = "tau polynomial form evaluated at p=q=1";
    detail::guarded(c, [&] {
      check_scalars(c, detail::at_one(d.tau_polynomial_form(n)), Scalar(static_cast<long>(n)), "[" + std::to_string(n) + "] at p=q=1");
    });
    out.push_back(std::move(c));

    IdentityReport q = detail::base("deformed-numbers", d, {n}, "ratio-2m-over-m");
    detail::guarded(q, [&] { check_scalars(q, d.ratio_2m_over_m(n) * d.bracket_number(n), d.bracket_number(2 * n)); });
    out.push_back(std::move(q));
  }
  IdentityReport z = detail::base("deformed-numbers", d, {0}, "zero");
  check_scalars(z, d.bracket_number(0), Scalar(0L), "[0]");
  out.push_back(std::move(z));
  return out;
}

inline std::vector<IdentityReport> suite_sigma_derivation(const SuiteSettings& s) {
  const Deformation& d = *s.deformation;
  const auto& w = s.window;
  std::vector<IdentityReport> out;
  for (int m = w.wide_index_min; m <= w.wide_index_max; ++m) {
    for (int n = w.wide_index_min; n <= w.wide_index_max; ++n) {
      for (int pa = 0; pa < 2; ++pa) {
        for (int pb = 0; pb < 2; ++pb) {
          std::string key = std::string(pa ? "odd" : "even") + "*" + (pb ? "odd" : "even");
          IdentityReport r = detail::base("sigma-derivation", d, {m, n}, key);
          r.window = "basis pairs in [" + std::to_string(w.wide_index_min) + "," + std::to_string(w.wide_index_max) + "]^2";
          SuperElement a = SuperElement::basis(m, pa), b = SuperElement::basis(n, pb);
          SuperElement lhs = delta(d, a * b);
          SuperElement rhs = delta(d, a) * b + sigma(d, a) * delta(d, b);
          if (lhs == rhs) {
            r.verdict = Verdict::Pass;
          } else {
            r.verdict = Verdict::Fail;
            r.counterexample = Counterexample{a.to_string() + " * " + b.to_string(), lhs.to_string(), rhs.to_string(),
                                              (lhs - rhs).to_string()};
          }
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

// ---- binary brackets ---------------------------------------------------------

inline std::vector<IdentityReport> suite_crochet(const SuiteSettings& s, bool mixed) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<std::pair<int, int>> cells;
  for (int m1 = w.index_min; m1 <= w.index_max; ++m1) {
    for (int m2 = w.index_min; m2 <= w.index_max; ++m2) cells.emplace_back(m1, m2);
  }
  return detail::run_cells(cells, [&](const std::pair<int, int>& c) {
    auto [m1, m2] = c;
    IdentityReport r = detail::base(mixed ? "crochet2" : "crochet1", *d, {m1, m2});
    r.conventions["weights"] = mixed ? "x=tau, y=phi^(1+m2-m1) tau" : "x=chi, y=phi^(m2-m1) chi; (1,1) when m1=m2";
    r.window = window_string(w.W);
    detail::guarded(r, [&] {
      if (!mixed) {
        GradedOperator lhs = weighted_commutator(l_op(d, m1), l_op(d, m2), chi_weight(*d, m1, m2));
        GradedOperator rhs = l_op(d, m1 + m2).scaled(d->bracket_number(m1) - d->bracket_number(m2));
        check_operators(r, lhs, rhs, w.W);
      } else {
        GradedOperator lhs = weighted_commutator(l_op(d, m1), g_op(d, m2), tau_weight(*d, m1, m2));
        GradedOperator rhs = g_op(d, m1 + m2).scaled(d->bracket_number(m1) - d->bracket_number(m2 + 1));
        check_operators(r, lhs, rhs, w.W);
      }
    });
    return std::vector<IdentityReport>{std::move(r)};
  });
}

inline std::vector<IdentityReport> suite_crochet3(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<IdentityReport> out;
  for (int m1 = w.wide_index_min; m1 <= w.wide_index_max; ++m1) {
    for (int m2 = w.wide_index_min; m2 <= w.wide_index_max; ++m2) {
      GradedOperator g1 = g_op(d, m1), g2 = g_op(d, m2);
      IdentityReport a = detail::base("crochet3", *d, {m1, m2}, "anticommutator");
      check_operators(a, anticommutator(g1, g2), GradedOperator::zero(d, 0), w.W);
      out.push_back(std::move(a));
      IdentityReport c = detail::base("crochet3", *d, {m1, m2}, "compose");
      check_operators(c, compose(g1, g2), GradedOperator::zero(d, 0), w.W);
      out.push_back(std::move(c));
    }
  }
  return out;
}

// ---- n-brackets --------------------------------------------------------------

inline std::vector<IdentityReport> suite_witt3(const SuiteSettings& s) {
  const Deformation& d = *s.deformation;
  const auto& w = s.window;
  std::vector<IdentityReport> out;
  for (const auto& t : detail::all_tuples(3, w.nary_index_min, w.nary_index_max)) {
    if (detail::strictly_increasing(t)) {
      IdentityReport r = detail::base("witt3", d, t, "bosonic");
      r.conventions["compared"] = "closed-form coefficient vs displayed 3-algebra coefficient";
      detail::guarded(r, [&] { check_scalars(r, closed_form_bosonic_coefficient(d, t), witt3_bosonic_display(d, t), "coefficient of l"); });
      out.push_back(std::move(r));
    }
    if (t[0] < t[1]) {
      IdentityReport r = detail::base("witt3", d, t, "super");
      r.conventions["compared"] = "closed-form coefficient vs displayed 3-algebra coefficient";
      detail::guarded(r, [&] {
        check_scalars(r, closed_form_super_coefficient(d, t, s.prefactor_variant), witt3_super_display(d, t), "coefficient of G");
      });
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline std::vector<IdentityReport> suite_rcom1(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<std::vector<int>> cells;
  for (const auto& t : detail::all_tuples(3, w.nary_index_min, w.nary_index_max)) {
    if (detail::distinct(t)) cells.push_back(t);
  }
  return detail::run_cells(cells, [&](const std::vector<int>& t) {
    IdentityReport r = detail::base("rcom1-vs-rnb1", *d, t);
    r.window = window_string(w.nary_W);
    r.conventions["prefactor"] = "[-2S]/(2[-S]), tau-regularized at [-S]=0";
    GradedOperator lhs = n_bracket_bosonic(d, t);
    detail::guarded(r, [&] { check_operators(r, lhs, closed_form_bosonic(d, t), w.nary_W); });
    IdentityReport rt = detail::base("rcom1-vs-rnb1", *d, t, "base=tau2-tau1");
    rt.window = r.window;
    rt.conventions = r.conventions;
    rt.conventions["base"] = "(tau2 - tau1) in place of (q - p)";
    detail::guarded(rt, [&] { check_operators(rt, lhs, closed_form_bosonic(d, t, tau_difference(*d)), w.nary_W); });
    return std::vector<IdentityReport>{std::move(r), std::move(rt)};
  });
}

inline std::vector<IdentityReport> suite_rcom2(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<std::vector<int>> cells;
  for (const auto& t : detail::all_tuples(3, w.nary_index_min, w.nary_index_max)) {
    if (t[0] != t[1]) cells.push_back(t);
  }
  for (const auto& t : detail::all_tuples(4, w.nary_index_min, w.nary_index_max)) {
    if (detail::strictly_increasing({t[0], t[1], t[2]})) cells.push_back(t);
  }
  return detail::run_cells(cells, [&](const std::vector<int>& t) {
    std::vector<IdentityReport> out;
    for (SuperPrefactor v : {SuperPrefactor::Rnb2, SuperPrefactor::Rcom2}) {
      IdentityReport r = detail::base("rcom2-vs-rnb2", *d, t, std::string("prefactor=") + prefactor_name(v));
      r.window = window_string(w.nary_W);
      r.conventions["prefactor"] = v == SuperPrefactor::Rnb2 ? "[-2S-1]/(2[-S-1])" : "[-2S-1]/(2[S-1])";
      detail::guarded(r, [&] { check_operators(r, n_bracket_super(d, t, v), closed_form_super(d, t, v), w.nary_W); });
      IdentityReport rt = detail::base("rcom2-vs-rnb2", *d, t, r.key + " base=tau2-tau1");
      rt.window = r.window;
      rt.conventions = r.conventions;
      rt.conventions["base"] = "(tau2 - tau1) in place of (q - p)";
      detail::guarded(rt, [&] { check_operators(rt, n_bracket_super(d, t, v), closed_form_super(d, t, v, tau_difference(*d)), w.nary_W); });
      out.push_back(std::move(r));
      out.push_back(std::move(rt));
    }
    return out;
  });
}

inline std::vector<IdentityReport> suite_antisymmetry(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<std::vector<int>> cells = detail::all_tuples(3, w.nary_index_min, w.nary_index_max);
  for (const auto& t : detail::all_tuples(4, w.nary_index_min, w.nary_index_max)) {
    if (detail::non_decreasing(t)) cells.push_back(t);
  }
  return detail::run_cells(cells, [&](const std::vector<int>& t) {
    std::vector<IdentityReport> out;
    std::optional<GradedOperator> base_op;
    std::string base_error;
    try {
      base_op = n_bracket_bosonic(d, t);
    } catch (const SingularPrefactor& e) {
      base_error = std::string("SingularPrefactor: ") + e.what();
    }
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      IdentityReport r = detail::base("nbracket-antisymmetry", *d, t, "swap " + std::to_string(i) + "," + std::to_string(i + 1));
      r.window = window_string(w.nary_W);
      if (!base_op) {
        set_skipped(r, base_error);
      } else {
        auto u = t;
        std::swap(u[i], u[i + 1]);
        check_operators(r, n_bracket_bosonic(d, u), base_op->scaled(Scalar(-1L)), w.nary_W);
      }
      out.push_back(std::move(r));
    }
    return out;
  });
}

// ---- Virasoro central terms ------------------------------------------------

inline std::vector<IdentityReport> suite_virasoro(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  std::vector<std::vector<int>> cells;
  for (std::vector<int> base : {std::vector<int>{-2, -1, 1, 2}, std::vector<int>{-3, -2, 2, 3}}) {
    do cells.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
  }
  cells.push_back({1, -1, 2, -2, 3, -3});
  return detail::run_cells(cells, [&](const std::vector<int>& t) {
    std::vector<IdentityReport> out;
    const bool six = t.size() == 6;
    IdentityReport g = detail::base("virasoro-2n", *d, t, "g-display");
    g.conventions["central_charge"] = "formal variable c";
    detail::guarded(g, [&] {
      Scalar general = closed_form_bosonic_coefficient(*d, t);
      check_scalars(g, general, six ? virasoro6_g_display(*d, t) : virasoro4_g_display(*d, t), "coefficient of l_S");
    });
    out.push_back(std::move(g));

    IdentityReport c = detail::base("virasoro-2n", *d, t, "central-display");
    c.conventions["central_charge"] = "formal variable c";
    detail::guarded(c, [&] {
      check_scalars(c, central_term_2n(*d, t), six ? virasoro6_central_display(*d, t) : virasoro4_central_display(*d, t), "central");
    });
    out.push_back(std::move(c));

    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      if (!six && i > 0) break;
      auto u = t;
      std::swap(u[i], u[i + 1]);
      IdentityReport a = detail::base("virasoro-2n", *d, t, "central-antisymmetry swap " + std::to_string(i) + "," + std::to_string(i + 1));
      detail::guarded(a, [&] { check_scalars(a, central_term_2n(*d, u), -central_term_2n(*d, t), "central"); });
      out.push_back(std::move(a));
      IdentityReport o = detail::base("virasoro-2n", *d, t, "operator-antisymmetry swap " + std::to_string(i) + "," + std::to_string(i + 1));
      o.window = window_string(s.window.nary_W);
      detail::guarded(o, [&] {
        check_operators(o, virasoro_2n_bracket(d, u).op, virasoro_2n_bracket(d, t).op.scaled(Scalar(-1L)), s.window.nary_W);
      });
      out.push_back(std::move(o));
    }
    return out;
  });
}

inline std::vector<IdentityReport> suite_gsva(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<std::pair<int, int>> cells;
  for (int m1 = w.index_min; m1 <= w.index_max; ++m1) {
    for (int m2 = w.index_min; m2 <= w.index_max; ++m2) cells.emplace_back(m1, m2);
  }
  auto out = detail::run_cells(cells, [&](const std::pair<int, int>& c) {
    auto [m1, m2] = c;
    std::vector<IdentityReport> rs;
    for (BinaryKind kind : {BinaryKind::LL, BinaryKind::LG}) {
      IdentityReport r = detail::base("gsva", *d, {m1, m2}, kind == BinaryKind::LL ? "ll-operator" : "lG-operator");
      r.window = window_string(w.W);
      r.conventions["weights"] = kind == BinaryKind::LL ? "chi" : "tau";
      detail::guarded(r, [&] {
        ExtendedOperator rhs = super_virasoro_binary(d, m1, m2, kind);
        GradedOperator lhs = kind == BinaryKind::LL
                                 ? weighted_commutator(l_op(d, m1), l_op(d, m2), chi_weight(*d, m1, m2))
                                 : weighted_commutator(l_op(d, m1), g_op(d, m2), tau_weight(*d, m1, m2));
        check_operators(r, lhs, rhs.op, w.W);
      });
      rs.push_back(std::move(r));
    }
    return rs;
  });
  for (int m = w.index_min; m <= w.index_max; ++m) {
    IdentityReport r = detail::base("gsva", *d, {m}, "classical-limit");
    r.conventions["form"] = "tau polynomial forms evaluated at p=q=1";
    detail::guarded(r, [&] {
      const TauPair& t = d->tau();
      Scalar poly = pvar("c") * d->phi_pow(m) / (t.tau1.pow(m) + t.tau2.pow(m)) * d->tau_polynomial_form(m + 1) *
                    d->tau_polynomial_form(m) * d->tau_polynomial_form(m - 1) / Scalar(6L);
      check_scalars(r, poly, gsva_central(*d, m), "central coefficient");
      if (!r.passed()) return;
      Scalar classical = pvar("c") * Scalar(Rational(m * (m * m - 1), 12));
      check_scalars(r, detail::at_one(poly), classical, "central coefficient at p=q=1");
    });
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<IdentityReport> suite_sv2n(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<std::vector<int>> cells;
  for (const auto& t : detail::all_tuples(4, w.nary_index_min, w.nary_index_max)) {
    if (detail::strictly_increasing({t[0], t[1], t[2]})) cells.push_back(t);
  }
  return detail::run_cells(cells, [&](const std::vector<int>& t) {
    std::vector<IdentityReport> out;
    for (SuperPrefactor v : {SuperPrefactor::Rnb2, SuperPrefactor::Rcom2}) {
      IdentityReport r = detail::base("sv2n", *d, t, std::string("f-vs-bracket prefactor=") + prefactor_name(v));
      r.window = window_string(w.nary_W);
      detail::guarded(r, [&] {
        check_operators(r, n_bracket_super(d, t, v), super_virasoro_2n_fermionic(d, t, v).op, w.nary_W);
      });
      out.push_back(std::move(r));
    }
    IdentityReport a = detail::base("sv2n", *d, t, "cs-antisymmetry swap 0,1");
    a.conventions["central_charge"] = "formal variable c";
    detail::guarded(a, [&] {
      auto u = t;
      std::swap(u[0], u[1]);
      check_scalars(a, sv2n_central(*d, u), -sv2n_central(*d, t), "central");
    });
    out.push_back(std::move(a));
    return out;
  });
}

inline std::vector<IdentityReport> suite_super_jacobi(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const auto& w = s.window;
  std::vector<Generator> gens;
  for (int m = w.nary_index_min; m <= w.nary_index_max; ++m) {
    gens.push_back({false, m});
    gens.push_back({true, m});
  }
  std::vector<std::array<Generator, 3>> cells;
  for (const auto& a : gens) {
    for (const auto& b : gens) {
      for (const auto& c : gens) cells.push_back({a, b, c});
    }
  }
  return detail::run_cells(cells, [&](const std::array<Generator, 3>& t) {
    IdentityReport r = detail::base("super-jacobi", *d, {t[0].m, t[1].m, t[2].m});
    try {
      r = verify_super_jacobi(d, t, w.W);
      detail::add_deformation_conventions(r, *d);
    } catch (const MissingTauFactorization& e) {
      r.key = t[0].to_string() + "," + t[1].to_string() + "," + t[2].to_string();
      set_skipped(r, std::string("MissingTauFactorization: ") + e.what());
    }
    return std::vector<IdentityReport>{std::move(r)};
  });
}

// ---- toy model ---------------------------------------------------------------

inline const std::string& formal_tau_name() {
  static const std::string name = "formal-tau";
  return name;
}

inline IdentityReport toy_report(const std::string& id, std::vector<int> idx, std::string key,
                                 const std::string& deformation = formal_tau_name()) {
  IdentityReport r = make_report(id, deformation, std::move(idx), std::move(key));
  r.conventions["toy_operators"] = "T^a_m = -[m]_a z^m, TT^a_m = -theta [m]_a z^m";
  return r;
}

inline std::vector<IdentityReport> suite_tau_identities(const SuiteSettings&) {
  std::vector<IdentityReport> out;
  const Taus t = formal_taus();
  for (int a = 1; a <= 3; ++a) {
    for (int m = -4; m <= 4; ++m) {
      IdentityReport r = toy_report("tau-identities", {a, m}, "level-number");
      check_scalars(r, level_number(t, a, m) * (t.t1.pow(a) - t.t2.pow(a)), t.t1.pow(a * m) - t.t2.pow(a * m));
      out.push_back(std::move(r));
      IdentityReport q = toy_report("tau-identities", {a, m}, "ratio-2m-over-m");
      check_scalars(q, level_ratio_2m_over_m(t, a, m) * level_number(t, a, m), level_number(t, a, 2 * m));
      out.push_back(std::move(q));
    }
  }
  return out;
}

inline std::vector<IdentityReport> suite_bell(const SuiteSettings& s) {
  const Truncation tr = s.bell_truncation;
  std::vector<IdentityReport> out;
  const int K = std::min(8, tr.N);
  auto rec = bell_polynomials(plain_times(K, tr), tr);
  auto ser = bell_by_series(plain_times(K, tr), tr);
  for (int k = 0; k <= K; ++k) {
    IdentityReport r = make_report("bell", "none", {k}, "recurrence-vs-series");
    r.window = "N=" + std::to_string(tr.N) + ",D=" + std::to_string(tr.D);
    if (rec[k] == ser[k]) {
      r.verdict = Verdict::Pass;
    } else {
      r.verdict = Verdict::Fail;
      r.counterexample = Counterexample{"B_" + std::to_string(k), rec[k].to_string(), ser[k].to_string(), (rec[k] - ser[k]).to_string()};
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace detail {
struct ToyCell {
  int a, b, m, n;
};

inline std::vector<ToyCell> toy_grid(const SuiteWindow& w, int max_level = 3) {
  std::vector<ToyCell> cells;
  for (int a = 1; a <= max_level; ++a) {
    for (int b = 1; b <= max_level; ++b) {
      for (int m = w.index_min; m <= w.index_max; ++m) {
        for (int n = w.index_min; n <= w.index_max; ++n) cells.push_back({a, b, m, n});
      }
    }
  }
  return cells;
}
}  // namespace detail

inline std::vector<IdentityReport> suite_rpqprod(const SuiteSettings& s) {
  const Taus t = formal_taus();
  return detail::run_cells(detail::toy_grid(s.window), [&](const detail::ToyCell& c) {
    std::vector<IdentityReport> out;
    IdentityReport r1 = toy_report("rpqprod", {c.a, c.b, c.m, c.n}, "prod1");
    detail::check_zops(r1, toy_product_lhs(t, c.a, c.b, c.m, c.n, false), evaluate(t, rpqprod1_rhs(t, c.a, c.b, c.m, c.n)));
    out.push_back(std::move(r1));
    IdentityReport r2 = toy_report("rpqprod", {c.a, c.b, c.m, c.n}, "prod2");
    detail::check_zops(r2, toy_product_lhs(t, c.a, c.b, c.m, c.n, true), evaluate(t, rpqprod2_rhs(t, c.a, c.b, c.m, c.n)));
    out.push_back(std::move(r2));
    return out;
  });
}

inline std::vector<IdentityReport> suite_scrto(const SuiteSettings& s) {
  const Taus t = formal_taus();
  return detail::run_cells(detail::toy_grid(s.window), [&](const detail::ToyCell& c) {
    std::vector<IdentityReport> out;
    const std::vector<int> idx{c.a, c.b, c.m, c.n};
    ZOp lhs = toy_commutator_lhs(t, c.a, c.b, c.m, c.n, false);

    IdentityReport k1 = toy_report("toy-commute", idx, "bosonic-commutator");
    detail::check_zops(k1, lhs, ZOp());
    out.push_back(std::move(k1));
    IdentityReport k2 = toy_report("toy-commute", idx, "mixed-commutator");
    detail::check_zops(k2, toy_commutator_lhs(t, c.a, c.b, c.m, c.n, true), ZOp());
    out.push_back(std::move(k2));
    IdentityReport k3 = toy_report("toy-commute", idx, "fermionic-anticommutator");
    detail::check_zops(k3, toy_anticommutator(t, c.a, c.b, c.m, c.n), ZOp());
    out.push_back(std::move(k3));

    IdentityReport r = toy_report("scrto", idx, "general");
    detail::check_zops(r, lhs, evaluate(t, scrto_rhs(t, c.a, c.b, c.m, c.n)));
    out.push_back(std::move(r));
    if (c.a == c.b) {
      IdentityReport e = toy_report("scrto", idx, "same-level");
      detail::check_zops(e, lhs, evaluate(t, scrto_same_level_rhs(t, c.a, c.m, c.n)));
      out.push_back(std::move(e));
      IdentityReport g = toy_report("scrto", idx, "same-level-vs-general");
      detail::check_zops(g, evaluate(t, scrto_rhs(t, c.a, c.a, c.m, c.n)), evaluate(t, scrto_same_level_rhs(t, c.a, c.m, c.n)));
      out.push_back(std::move(g));
    }
    return out;
  });
}

inline std::vector<IdentityReport> suite_scrgo(const SuiteSettings& s) {
  const Taus t = formal_taus();
  return detail::run_cells(detail::toy_grid(s.window), [&](const detail::ToyCell& c) {
    std::vector<IdentityReport> out;
    const std::vector<int> idx{c.a, c.b, c.m, c.n};
    ZOp lhs = toy_commutator_lhs(t, c.a, c.b, c.m, c.n, true);
    IdentityReport r = toy_report("scrgo", idx, "general");
    detail::check_zops(r, lhs, evaluate(t, scrgo_rhs(t, c.a, c.b, c.m, c.n)));
    out.push_back(std::move(r));
    if (c.a == c.b) {
      IdentityReport e = toy_report("scrgo", idx, "same-level");
      detail::check_zops(e, lhs, evaluate(t, scrgo_same_level_rhs(t, c.a, c.m, c.n)));
      out.push_back(std::move(e));
      IdentityReport g = toy_report("scrgo", idx, "same-level-vs-general");
      detail::check_zops(g, evaluate(t, scrgo_rhs(t, c.a, c.a, c.m, c.n)), evaluate(t, scrgo_same_level_rhs(t, c.a, c.m, c.n)));
      out.push_back(std::move(g));
    }
    return out;
  });
}

inline std::vector<IdentityReport> suite_toy_nbracket(const SuiteSettings& s) {
  const Taus t = formal_taus();
  const auto& w = s.window;
  std::vector<std::pair<int, std::vector<int>>> cells;
  for (int a = 1; a <= 2; ++a) {
    for (const auto& u : detail::all_tuples(3, w.nary_index_min, w.nary_index_max)) {
      if (u[0] < u[1]) cells.emplace_back(a, u);
    }
  }
  return detail::run_cells(cells, [&](const std::pair<int, std::vector<int>>& c) {
    const int a = c.first;
    const auto& ms = c.second;
    std::vector<int> idx{a};
    idx.insert(idx.end(), ms.begin(), ms.end());
    std::vector<IdentityReport> out;
    if (detail::strictly_increasing(ms)) {
      ZOp closed = evaluate(t, toy_n_bracket_bosonic_closed(t, a, ms));
      IdentityReport r = toy_report("toy-nbracket", idx, "bosonic levi-civita");
      detail::check_zops(r, toy_n_bracket_bosonic(t, a, ms), closed);
      out.push_back(std::move(r));
      IdentityReport o = toy_report("toy-nbracket", idx, "bosonic ordered-product");
      detail::check_zops(o, toy_ordered_product(t, a, ms, false), closed);
      out.push_back(std::move(o));
    }
    ZOp closed = evaluate(t, toy_n_bracket_super_closed(t, a, ms));
    IdentityReport r = toy_report("toy-nbracket", idx, "super levi-civita");
    r.conventions["anomaly_index"] = "m = m_1";
    detail::check_zops(r, toy_n_bracket_super(t, a, ms), closed);
    out.push_back(std::move(r));
    IdentityReport o = toy_report("toy-nbracket", idx, "super ordered-product");
    o.conventions["anomaly_index"] = "m = m_1";
    detail::check_zops(o, toy_ordered_product(t, a, ms, true), closed);
    out.push_back(std::move(o));
    return out;
  });
}

inline std::vector<IdentityReport> suite_dictionary(const SuiteSettings& s) {
  const DeformationPtr& d = s.deformation;
  const Truncation tr = s.dictionary_truncation;
  struct Cell {
    int a, b, m, n, gamma;
  };
  std::vector<Cell> cells;
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n)
          for (int g = 0; g <= 1; ++g) cells.push_back({a, b, m, n, g});
  return detail::run_cells(cells, [&](const Cell& c) {
    std::vector<IdentityReport> out;
    for (bool fermionic : {false, true}) {
      IdentityReport r = detail::base("dictionary", *d, {c.a, c.b, c.m, c.n, c.gamma}, fermionic ? "prod2" : "prod1");
      r.window = "N=" + std::to_string(tr.N) + ",D=" + std::to_string(tr.D);
      r.conventions["dictionary"] = "d/dt_k -> x^k/k!, second-order terms as products of markers";
      r.conventions["rhs"] = "product right-hand side at m+gamma, n+gamma with each T^c_k the constraint operator";
      if (fermionic) r.conventions["theta"] = "factored out of both sides";
      detail::guarded(r, [&] {
        DictionaryResult res = dictionary_check(*d, c.m, c.n, c.a, c.b, c.gamma, tr, fermionic);
        if (res.equal) {
          r.verdict = Verdict::Pass;
          return;
        }
        r.verdict = Verdict::Fail;
        r.counterexample = Counterexample{"dictionary image", image_string(res.lhs), image_string(res.rhs), ""};
        DictionaryImage diff = res.lhs;
        for (const auto& [k, v] : res.rhs) {
          auto it = diff.find(k);
          if (it == diff.end()) {
            diff.emplace(k, v.scaled(Scalar(-1L)));
          } else {
            it->second = it->second - v;
          }
        }
        for (auto it = diff.begin(); it != diff.end();) it = it->second.is_zero() ? diff.erase(it) : std::next(it);
        r.counterexample->difference = image_string(diff);
        if (!diff.empty()) r.counterexample->location = "x^" + std::to_string(diff.rbegin()->first);
      });
      out.push_back(std::move(r));
    }
    return out;
  });
}

namespace detail {
/// Specialization consistency: the formal combination evaluated and then
/// substituted equals the combination evaluated directly at the specialized
/// taus. Printed instances are compared against the same specialization.
inline std::vector<IdentityReport> specialization_suite(const SuiteWindow& w, const std::string& id, const std::string& printed_id,
                                                         const std::string& deformation, const Assignment& assignment,
                                                         const Taus& special, bool arik_coon) {
  const Taus formal = formal_taus();
  using Builder = ToyCombination (*)(const Taus&, int, int, int, int);
  using Printed = ToyCombination (*)(int, int, int, int);
  struct Family {
    const char* name;
    Builder general;
    Printed printed;
  };
  const std::vector<Family> families = {
      {"prod1", rpqprod1_rhs, arik_coon ? ac_prod1 : js_prod1},
      {"prod2", rpqprod2_rhs, arik_coon ? ac_prod2 : js_prod2},
      {"scrto", scrto_rhs, arik_coon ? ac_scrto : js_scrto},
      {"scrgo", scrgo_rhs, arik_coon ? ac_scrgo : js_scrgo},
  };
  return run_cells(toy_grid(w), [&](const ToyCell& c) {
    std::vector<IdentityReport> out;
    const std::vector<int> idx{c.a, c.b, c.m, c.n};
    for (const auto& f : families) {
      ZOp substituted = evaluate(formal, f.general(formal, c.a, c.b, c.m, c.n)).substituted(param_vars(), assignment);
      IdentityReport r = toy_report(id, idx, f.name, deformation);
      r.conventions["check"] = "substitute(formal result) vs formula evaluated at specialized taus";
      check_zops(r, substituted, evaluate(special, f.general(special, c.a, c.b, c.m, c.n)));
      out.push_back(std::move(r));

      IdentityReport p = toy_report(printed_id, idx, f.name, deformation);
      p.conventions["check"] = "printed instance vs specialized general formula";
      check_zops(p, evaluate(special, f.printed(c.a, c.b, c.m, c.n)), substituted);
      out.push_back(std::move(p));
    }
    // the left-hand sides specialize consistently too
    for (bool fermionic : {false, true}) {
      IdentityReport r = toy_report(id, idx, fermionic ? "lhs-prod2" : "lhs-prod1", deformation);
      ZOp sub = toy_product_lhs(formal, c.a, c.b, c.m, c.n, fermionic).substituted(param_vars(), assignment);
      check_zops(r, sub, toy_product_lhs(special, c.a, c.b, c.m, c.n, fermionic));
      out.push_back(std::move(r));
    }
    return out;
  });
}
}  // namespace detail

inline std::vector<IdentityReport> suite_ac_specialization(const SuiteSettings& s) {
  return detail::specialization_suite(s.window, "ac-specialization", "ac-printed", "arik-coon", arik_coon_assignment(),
                                      arik_coon_taus(), true);
}

inline std::vector<IdentityReport> suite_js_specialization(const SuiteSettings& s) {
  return detail::specialization_suite(s.window, "js-specialization", "js-printed", "jagannathan-srinivasa",
                                      jagannathan_srinivasa_assignment(), jagannathan_srinivasa_taus(), false);
}

// ---- dispatch ------------------------------------------------------------------

inline std::vector<IdentityReport> run_suite(const std::string& id, const SuiteSettings& s) {
  if (id == "deformed-numbers") return suite_deformed_numbers(s);
  if (id == "sigma-derivation") return suite_sigma_derivation(s);
  if (id == "crochet1") return suite_crochet(s, false);
  if (id == "crochet2") return suite_crochet(s, true);
  if (id == "crochet3") return suite_crochet3(s);
  if (id == "witt3") return suite_witt3(s);
  if (id == "rcom1-vs-rnb1") return suite_rcom1(s);
  if (id == "rcom2-vs-rnb2") return suite_rcom2(s);
  if (id == "nbracket-antisymmetry") return suite_antisymmetry(s);
  if (id == "virasoro-2n") return suite_virasoro(s);
  if (id == "gsva") return suite_gsva(s);
  if (id == "sv2n") return suite_sv2n(s);
  if (id == "super-jacobi") return suite_super_jacobi(s);
  if (id == "tau-identities") return suite_tau_identities(s);
  if (id == "bell") return suite_bell(s);
  if (id == "rpqprod") return suite_rpqprod(s);
  if (id == "scrto") return suite_scrto(s);
  if (id == "scrgo") return suite_scrgo(s);
  if (id == "toy-nbracket") return suite_toy_nbracket(s);
  if (id == "dictionary") return suite_dictionary(s);
  if (id == "ac-specialization") return suite_ac_specialization(s);
  if (id == "js-specialization") return suite_js_specialization(s);
  throw ConfigError("unknown suite id '" + id + "'");
}

/// Runs the suites concurrently; the result is sorted by (id, indices, key).
inline std::vector<IdentityReport> run_suites(const std::vector<std::string>& ids, const SuiteSettings& s) {
  for (const auto& id : ids) {
    if (!is_suite_id(id)) throw ConfigError("unknown suite id '" + id + "'");
  }
  std::vector<std::future<std::vector<IdentityReport>>> futures;
  for (const auto& id : ids) futures.push_back(std::async(std::launch::async, [&s, id] { return run_suite(id, s); }));
  std::vector<IdentityReport> all;
  for (auto& f : futures) {
    auto rs = f.get();
    all.insert(all.end(), std::make_move_iterator(rs.begin()), std::make_move_iterator(rs.end()));
  }
  std::stable_sort(all.begin(), all.end(), report_less);
  return all;
}

}  // namespace rpqvir
