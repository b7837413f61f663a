#include <gtest/gtest.h>

#include "rpqvir/config.hpp"
#include "rpqvir/eval.hpp"
#include "rpqvir/suites.hpp"

using namespace rpqvir;

TEST(Config, DefaultsToAllSuites) {
  RunConfig cfg = parse_config(json{{"preset", "arik-coon"}});
  EXPECT_EQ(cfg.suites, suite_ids());
  EXPECT_EQ(cfg.prefactor_variant, SuperPrefactor::Rnb2);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW((void)parse_config(json::array()), ConfigError);
  EXPECT_THROW((void)parse_config(json::object()), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"preset", "arik-coon"}, {"suites", {"nope"}}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"preset", "arik-coon"}, {"window", {{"W", 0}}}}), ConfigError);
  EXPECT_THROW((void)parse_config(json{{"preset", "arik-coon"}, {"window", {{"index_min", 2}, {"index_max", 1}}}}),
               ConfigError);
  EXPECT_THROW((void)parse_config(json{{"preset", "arik-coon"}, {"flags", {{"rnb2_prefactor_variant", "x"}}}}), ConfigError);
  EXPECT_THROW((void)build_deformation(parse_config(json{{"preset", "unknown"}})), UnknownPreset);
}

TEST(Config, CustomDeformationReproducesPreset) {
  auto t = [](const char* c, std::vector<int> e) { return json{{"coeff", c}, {"exponents", e}}; };
  json custom = {{"R_num", {t("1", {1, 0, 0, 0}), t("-1", {0, 1, 0, 0})}},
                 {"R_den", {t("1", {0, 0, 1, 0}), t("-1", {0, 0, 0, 1})}},
                 {"phi_num", {t("1", {1, 1})}},
                 {"phi_den", {t("1", {0, 0})}},
                 {"tau1", {t("1", {1, 0})}},
                 {"tau2", {t("1", {0, 1})}}};
  DeformationPtr d = build_deformation(parse_config(json{{"custom", custom}}));
  DeformationPtr js = preset("jagannathan-srinivasa");
  for (int n = -5; n <= 5; ++n) EXPECT_EQ(d->bracket_number(n), js->bracket_number(n));
  EXPECT_EQ(d->phi(), js->phi());
  EXPECT_EQ(d->name(), "custom");
}

TEST(Config, PhiOverride) {
  auto t = [](const char* c, std::vector<int> e) { return json{{"coeff", c}, {"exponents", e}}; };
  RunConfig cfg = parse_config(json{{"preset", "quesne"}, {"flags", {{"phi_override", {t("1", {0, 1})}}}}});
  DeformationPtr d = build_deformation(cfg);
  EXPECT_EQ(d->phi(), pvar("q"));
  EXPECT_FALSE(d->phi_defaulted());
}

TEST(Eval, ParsesDescriptors) {
  auto g = parse_descriptor("[l 1, l 0]");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].kind, 'l');
  EXPECT_EQ(g[0].m, 1);
  g = parse_descriptor(" [ L2 ,L-2, G-1 ] ");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[1].m, -2);
  EXPECT_EQ(g[2].kind, 'G');
}

TEST(Eval, ParseErrorsCarryPositions) {
  auto pos = [](const std::string& s) {
    try {
      parse_descriptor(s);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1L;
  };
  EXPECT_EQ(pos("l1, l2]"), 0);
  EXPECT_EQ(pos("[l1, x2]"), 5);
  EXPECT_EQ(pos("[l, l2]"), 2);
  EXPECT_EQ(pos("[l1 l2]"), 4);
  EXPECT_EQ(pos("[l1] x"), 5);
  EXPECT_EQ(pos("[]"), 1);
}

TEST(Eval, RendersKnownBrackets) {
  auto d = preset("jagannathan-srinivasa");
  EvalResult gg = evaluate_descriptor(d, parse_descriptor("[G 1, G 2]"), SuperPrefactor::Rnb2);
  EXPECT_NE(render_eval(gg, 3).find("zero operator"), std::string::npos);
  EvalResult vir = evaluate_descriptor(d, parse_descriptor("[L2, L-2]"), SuperPrefactor::Rnb2);
  ASSERT_TRUE(vir.central.has_value());
  EXPECT_FALSE(vir.central->is_zero());
  EXPECT_THROW((void)evaluate_descriptor(d, parse_descriptor("[L1, L2, L3]"), SuperPrefactor::Rnb2), UnsupportedArity);
  EXPECT_THROW((void)evaluate_descriptor(d, parse_descriptor("[l1]"), SuperPrefactor::Rnb2), UnsupportedArity);
}

TEST(Suites, MustPassFamiliesPassForArikCoon) {
  SuiteSettings s;
  s.deformation = preset("arik-coon");
  s.window.index_min = -2;
  s.window.index_max = 2;
  s.window.W = 5;
  auto reports = run_suites({"deformed-numbers", "crochet1", "crochet2", "crochet3", "nbracket-antisymmetry", "bell"}, s);
  EXPECT_FALSE(reports.empty());
  EXPECT_FALSE(has_must_pass_failure(reports));
  for (const auto& r : reports) EXPECT_TRUE(r.well_formed());
}

TEST(Suites, FailuresCarryCounterexamples) {
  SuiteSettings s;
  s.deformation = preset("jagannathan-srinivasa");
  s.window.index_min = -1;
  s.window.index_max = 1;
  s.window.W = 3;
  auto reports = run_suites({"crochet1"}, s);
  bool any_fail = false;
  for (const auto& r : reports) {
    EXPECT_TRUE(r.well_formed());
    if (r.failed()) {
      any_fail = true;
      EXPECT_TRUE(is_must_pass(r));
      EXPECT_FALSE(r.counterexample->difference.empty());
    }
  }
  EXPECT_TRUE(any_fail);
  EXPECT_TRUE(has_must_pass_failure(reports));
}

TEST(Suites, CrochetIsNotMustPassForOtherPresets) {
  SuiteSettings s;
  s.deformation = preset("quesne");
  s.window.index_min = -1;
  s.window.index_max = 1;
  s.window.W = 3;
  for (const auto& r : run_suites({"crochet1"}, s)) EXPECT_FALSE(is_must_pass(r));
}

TEST(Suites, OutputIsDeterministic) {
  SuiteSettings s;
  s.deformation = preset("biedenharn-macfarlane");
  s.window.index_min = -1;
  s.window.index_max = 1;
  s.window.nary_index_min = -1;
  s.window.nary_index_max = 1;
  s.window.W = 3;
  s.window.nary_W = 3;
  std::vector<std::string> ids = {"sigma-derivation", "witt3", "rcom1-vs-rnb1", "super-jacobi", "scrto"};
  auto dump = [&] {
    json arr = json::array();
    for (const auto& r : run_suites(ids, s)) arr.push_back(report_to_json(r));
    return arr.dump();
  };
  EXPECT_EQ(dump(), dump());
}

TEST(Suites, UnknownSuiteRejected) {
  SuiteSettings s;
  s.deformation = preset("arik-coon");
  EXPECT_THROW((void)run_suite("nope", s), ConfigError);
}
