#pragma once

// Bracket descriptors for the eval command:  [l 1, l 0],  [G1,G2],
// [L2, L-2],  [l1, l0, l-1, G2]  ...

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rpqvir/brackets.hpp"
#include "rpqvir/errors.hpp"
#include "rpqvir/operators.hpp"

namespace rpqvir {

struct GenSpec {
  char kind = 'l';  // 'l', 'G' or 'L'
  int m = 0;
};

inline std::vector<GenSpec> parse_descriptor(const std::string& s) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip();
    if (i >= s.size() || s[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
    ++i;
  };
  std::vector<GenSpec> out;
  expect('[');
  skip();
  if (i < s.size() && s[i] == ']') throw ParseError("empty bracket", i);
  while (true) {
    skip();
    if (i >= s.size() || (s[i] != 'l' && s[i] != 'G' && s[i] != 'L')) throw ParseError("expected generator l, G or L", i);
    GenSpec g;
    g.kind = s[i++];
    skip();
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    std::size_t digits = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == digits) throw ParseError("expected integer index", start);
    if (i - digits > 6) throw ParseError("index too large", start);
    g.m = std::stoi(s.substr(start, i - start));
    out.push_back(g);
    skip();
    if (i < s.size() && s[i] == ',') {
      ++i;
      continue;
    }
    expect(']');
    skip();
    if (i != s.size()) throw ParseError("trailing input", i);
    return out;
  }
}

struct EvalResult {
  std::string description;
  GradedOperator op;
  std::optional<Scalar> central;
};

inline EvalResult evaluate_descriptor(const DeformationPtr& d, const std::vector<GenSpec>& gens, SuperPrefactor variant) {
  const std::size_t n = gens.size();
  std::size_t count_l = 0, count_G = 0, count_L = 0;
  for (const auto& g : gens) {
    count_l += g.kind == 'l';
    count_G += g.kind == 'G';
    count_L += g.kind == 'L';
  }
  std::vector<int> ms;
  for (const auto& g : gens) ms.push_back(g.m);
  const bool last_G = gens.back().kind == 'G';

  if (n == 1) throw UnsupportedArity("a bracket needs at least two generators");
  if (n == 2) {
    const GenSpec a = gens[0], b = gens[1];
    auto gen_op = [&](const GenSpec& g) { return g.kind == 'G' ? g_op(d, g.m) : l_op(d, g.m); };
    if (count_L == 2) {
      ExtendedOperator e = super_virasoro_binary(d, a.m, b.m, BinaryKind::LL);
      return {"super Virasoro [L,L]", e.op, e.central};
    }
    if (a.kind == 'L' && b.kind == 'G') {
      ExtendedOperator e = super_virasoro_binary(d, a.m, b.m, BinaryKind::LG);
      return {"super Virasoro [L,G]", e.op, e.central};
    }
    if (count_L) throw UnsupportedArity("L generators pair with L or a trailing G");
    if (a.kind == 'G' && b.kind == 'G') return {"[G,G] anticommutator", anticommutator(gen_op(a), gen_op(b)), std::nullopt};
    if (a.kind == 'l' && b.kind == 'l') {
      return {"chi-weighted [l,l]", weighted_commutator(gen_op(a), gen_op(b), chi_weight(*d, a.m, b.m)), std::nullopt};
    }
    if (a.kind == 'l') {
      return {"tau-weighted [l,G]", weighted_commutator(gen_op(a), gen_op(b), tau_weight(*d, a.m, b.m)), std::nullopt};
    }
    return {"[G,l] = -[l,G]", weighted_commutator(gen_op(b), gen_op(a), tau_weight(*d, b.m, a.m)).scaled(Scalar(-1L)),
            std::nullopt};
  }
  if (count_l == n) return {"bosonic n-bracket", n_bracket_bosonic(d, ms), std::nullopt};
  if (count_l == n - 1 && last_G) return {"super n-bracket", n_bracket_super(d, ms, variant), std::nullopt};
  if (count_L == n && n % 2 == 0) {
    ExtendedOperator e = virasoro_2n_bracket(d, ms);
    return {"Virasoro 2n-bracket", e.op, e.central};
  }
  if (count_L == n - 1 && last_G && n % 2 == 0) {
    ExtendedOperator e = super_virasoro_2n_fermionic(d, ms, variant);
    return {"super Virasoro 2n-bracket", e.op, e.central};
  }
  throw UnsupportedArity("unsupported generator pattern; use all l, l..l G, an even number of L, or L..L G");
}

/// Action of the result on t^n and theta t^n for n in [-W, W].
inline std::string render_eval(const EvalResult& r, int W) {
  std::ostringstream out;
  out << r.description << " (parity " << r.op.parity() << ")\n";
  bool any = false;
  for (int parity = 0; parity < 2; ++parity) {
    for (int n = -W; n <= W; ++n) {
      SuperElement img = r.op.apply_basis(n, parity);
      if (img.is_zero()) continue;
      any = true;
      out << "  " << (parity ? "theta*" : "") << "t^" << n << " -> " << img.to_string() << "\n";
    }
  }
  if (!any) out << "  zero operator on basis window [-" << W << "," << W << "]\n";
  if (r.central) out << "central: " << r.central->to_string() << "\n";
  return out.str();
}

}  // namespace rpqvir
