#include <doctest.h>

#include <json.hpp>

#include "coevo/evaluate.hpp"
#include "coevo/parser.hpp"
#include "test_support.hpp"

using namespace coevo;
using coevo::testing::load;
using coevo::testing::parse_or_throw;

namespace {

struct Trio {
  Grammar g2, candidate, target;
};

Trio trio(const std::string& name) {
  return {load("trios/" + name + "/g2.xtext"), load("trios/" + name + "/candidate.xtext"),
          load("trios/" + name + "/target.xtext")};
}

}  // namespace

TEST_CASE("format_percent rounds half up to two decimals") {
  CHECK(format_percent(16, 19) == "84.21%");
  CHECK(format_percent(20, 32) == "62.50%");
  CHECK(format_percent(21, 24) == "87.50%");
  CHECK(format_percent(28, 40) == "70.00%");
  CHECK(format_percent(0, 19) == "0.00%");
  CHECK(format_percent(0, 0) == "100.00%");
  CHECK(format_percent(1, 8) == "12.50%");
  CHECK(format_percent(1, 3) == "33.33%");
  CHECK(format_percent(2, 3) == "66.67%");
  // 1/80 = 1.25% exactly; 1/160 = 0.625% rounds up.
  CHECK(format_percent(1, 160) == "0.63%");
}

TEST_CASE("compare_rules") {
  const Grammar l1 = load("corpus/mission_generated.xtext");
  const Grammar l2 = load("corpus/mission_target.xtext");
  auto same = compare_rules(l2, l2);
  REQUIRE(same.size() == 1);
  CHECK(same[0].status == RuleStatus::kSame);
  CHECK(same[0].token_distance == 0);

  auto diff = compare_rules(l1, l2);
  CHECK(diff[0].status == RuleStatus::kDiff);
  CHECK(diff[0].token_distance > 0);

  auto missing = compare_rules(parse_or_throw("A: 'a';"), parse_or_throw("A: 'a';\nB: 'b';"));
  REQUIRE(missing.size() == 2);
  CHECK(missing[1].rule == "B");
  CHECK(missing[1].status == RuleStatus::kMissingInCandidate);

  auto extra = compare_rules(parse_or_throw("A: 'a';\nZ: 'z';"), parse_or_throw("A: 'a';"));
  CHECK(extra.back().status == RuleStatus::kExtraInCandidate);
}

TEST_CASE("quote style does not count as a difference") {
  const Grammar a = parse_or_throw("A: 'a' x=ID (\",\" x=ID)*;");
  const Grammar b = parse_or_throw("A: \"a\" x=ID (',' x=ID)*;");
  CHECK(compare_rules(a, b)[0].status == RuleStatus::kSame);
  CHECK(comparison_tokens(a.rules[0]) == comparison_tokens(b.rules[0]));
}

TEST_CASE("DOT-scale trio") {
  const Trio t = trio("dot");
  const RacResult rac = compute_rac(t.g2, t.candidate, t.target);
  CHECK(rac.n_total == 19);
  CHECK(rac.n_correct == 16);
  CHECK(rac.rac == doctest::Approx(0.8421).epsilon(1e-4));
  const Similarity s = compute_similarity(t.candidate, t.target);
  CHECK(s.same == 21);
  CHECK(s.diff == 3);
  CHECK(s.percent == doctest::Approx(0.875));
}

TEST_CASE("Xcore-scale trio") {
  const Trio t = trio("xcore");
  const RacResult rac = compute_rac(t.g2, t.candidate, t.target);
  CHECK(rac.n_total == 32);
  CHECK(rac.n_correct == 20);
  CHECK(rac.rac == doctest::Approx(0.625));
  const Similarity s = compute_similarity(t.candidate, t.target);
  CHECK(s.same == 28);
  CHECK(s.diff == 12);
  CHECK(s.percent == doctest::Approx(0.70));
}

TEST_CASE("vacuous evolution and unadapted candidates") {
  const Trio v = trio("vacuous");
  const RacResult rac = compute_rac(v.g2, v.candidate, v.target);
  CHECK(rac.n_total == 0);
  CHECK(rac.rac == 1.0);

  const Trio d = trio("dot");
  const RacResult none = compute_rac(d.g2, d.g2, d.target);
  CHECK(none.n_total == 19);
  CHECK(none.n_correct == 0);
  CHECK(none.rac == 0.0);

  const RacResult perfect = compute_rac(d.g2, d.target, d.target);
  CHECK(perfect.rac == 1.0);
}

TEST_CASE("similarity of a grammar with itself") {
  for (const char* name : {"trios/dot/target.xtext", "trios/xcore/g2.xtext", "corpus/port_target.xtext"}) {
    const Grammar g = load(name);
    const Similarity s = compute_similarity(g, g);
    CHECK(s.same == static_cast<int>(g.rules.size()));
    CHECK(s.diff == 0);
    CHECK(s.percent == 1.0);
  }
  CHECK(compute_similarity(Grammar{}, Grammar{}).percent == 1.0);
}

TEST_CASE("Mission adaptation types") {
  const Grammar l1 = load("corpus/mission_generated.xtext");
  const Grammar l2 = load("corpus/mission_target.xtext");
  const auto types = classify_adaptations(l1, l2, l2);
  const TypeCounts one{1, 1, 0};
  CHECK(types.size() == 5);
  CHECK(types.at(AdaptationType::kAttributePromotion) == one);
  CHECK(types.at(AdaptationType::kTypeSystemAdaptation) == one);
  CHECK(types.at(AdaptationType::kSeparatorModification) == one);
  CHECK(types.at(AdaptationType::kKeywordRemoval) == one);
  CHECK(types.at(AdaptationType::kBraceOptionalityRemoval) == one);

  for (const auto& [type, c] : classify_adaptations(l1, l2, l1)) {
    CHECK(c.cor == 0);
    CHECK(c.inc == c.occ);
  }
}

TEST_CASE("partially realized adaptations split into cor and inc") {
  const Trio t = trio("dot");
  const auto types = classify_adaptations(t.g2, t.target, t.candidate);
  int inc = 0;
  for (const auto& [type, c] : types) {
    CHECK(c.occ == c.cor + c.inc);
    inc += c.inc;
  }
  CHECK(inc > 0);
  for (const auto& [type, c] : classify_adaptations(t.g2, t.target, t.target)) CHECK(c.inc == 0);
}

TEST_CASE("fallback rules are classified from residual tokens") {
  const auto types = required_types(load("corpus/generictype_generated.xtext").rules[0],
                                    load("corpus/generictype_target.xtext").rules[0]);
  CHECK(types.count(AdaptationType::kTypeSystemAdaptation) == 1);
  CHECK(types.count(AdaptationType::kBraceOptionalityRemoval) == 1);
}

TEST_CASE("making one more rule correct never lowers the counts") {
  const Trio t = trio("xcore");
  Grammar better = t.candidate;
  for (auto& r : better.rules) {
    const ParserRule* target = find_rule(t.target, r.name);
    if (comparison_tokens(r) != comparison_tokens(*target)) {
      r = *target;
      break;
    }
  }
  CHECK(compute_rac(t.g2, better, t.target).n_correct == 21);
  CHECK(compute_similarity(better, t.target).same == 29);
}

TEST_CASE("report serialization") {
  const Trio t = trio("dot");
  EvaluationReport r = evaluate(t.g2, t.candidate, t.target);
  r.conformance = std::vector<ConformanceFinding>{};
  const auto doc = nlohmann::json::parse(report_to_json(r));
  CHECK(doc["rac"].get<double>() == doctest::Approx(0.8421));
  CHECK(doc["same"] == 21);
  CHECK(doc["diff"] == 3);
  CHECK(doc["percent"].get<double>() == doctest::Approx(0.875));
  CHECK(doc["perType"].is_object());
  CHECK(doc["conformance"]["verdict"] == "PASS");
  CHECK(doc["comparisons"].size() == 24);

  const std::string text = report_to_text(r);
  CHECK(text.find("required adaptations") != std::string::npos);
  CHECK(text.find("84.21%") != std::string::npos);
  CHECK(text.find("87.50%") != std::string::npos);
}
