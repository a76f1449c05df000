#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "coevo/transform.hpp"
#include "test_support.hpp"

// Randomized op-applied mutants of the bundled corpus grammars.
namespace coevo::testing {


inline std::vector<Grammar> corpus() {
  std::vector<Grammar> out;
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(coevo::testing::fixture_path("corpus"))) {
    if (e.path().extension() == ".xtext") names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  for (const auto& n : names) out.push_back(load("corpus/" + n));
  return out;
}

template <typename T>
inline const T& pick(const std::vector<T>& v, std::mt19937& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// A random but well-formed catalog op drawn from the grammar's vocabulary.
inline TransformOp random_op(const Grammar& g, std::mt19937& rng) {
  const ParserRule& rule = pick(g.rules, rng);
  std::vector<std::string> features, keywords, called;
  for (const auto& a : assignments_of(rule)) features.push_back(a.node->text);
  walk(rule.body, [&](const Expression& n, const NodePath&) {
    if (n.is(ExprKind::kKeyword) && n.keyword_value() != "{" && n.keyword_value() != "}") keywords.push_back(n.text);
    if (n.is(ExprKind::kRuleCall)) called.push_back(n.text);
  });
  keywords.push_back("','");
  called.push_back("ID");
  const std::vector<std::string> new_keywords = {"'on'", "'->'", "\"&\"", "';'", "'with'", "\"=\""};
  const std::vector<std::string> new_rules = {"ID", "STRING", "QualifiedName", "EString"};

  static const std::vector<OpKind> kinds = {
      OpKind::kRemoveKeyword,    OpKind::kRemoveBraces,      OpKind::kRemoveOptionality, OpKind::kAddOptionality,
      OpKind::kChangeSeparator,  OpKind::kAddTerminator,     OpKind::kRenameKeyword,     OpKind::kChangeCalledRule,
      OpKind::kPromoteAttribute, OpKind::kMakeBracesOptional, OpKind::kReplaceRule};
  TransformOp op;
  op.kind = pick(kinds, rng);
  if (op.kind == OpKind::kReplaceRule) {
    op.scope = Scope::of_rule(rule.name);
    op.body = print_expression(pick(g.rules, rng).body);
    return op;
  }
  if (!features.empty() && (op.kind == OpKind::kPromoteAttribute || chance(rng, 0.6))) {
    op.scope = Scope::of_attribute(rule.name, pick(features, rng));
  } else if (op.kind == OpKind::kPromoteAttribute) {
    op.kind = OpKind::kRemoveBraces;
    op.scope = Scope::of_rule(rule.name);
  } else {
    op.scope = chance(rng, 0.15) ? Scope::grammar() : Scope::of_rule(rule.name);
  }
  switch (op.kind) {
    case OpKind::kRemoveKeyword:
      if (chance(rng, 0.15)) {
        op.any_keyword = true;
      } else {
        op.text = pick(keywords, rng);
      }
      break;
    case OpKind::kAddTerminator:
      op.text = pick(new_keywords, rng);
      break;
    case OpKind::kChangeSeparator:
      op.from = chance(rng, 0.7) ? "\",\"" : pick(keywords, rng);
      if (chance(rng, 0.6)) op.to = pick(new_keywords, rng);
      break;
    case OpKind::kRenameKeyword:
      op.from = pick(keywords, rng);
      op.to = pick(new_keywords, rng);
      break;
    case OpKind::kChangeCalledRule:
      op.from = pick(called, rng);
      op.to = pick(new_rules, rng);
      if (*op.to == op.from) op.to = "Other";
      break;
    default:
      break;
  }
  return op;
}

struct Mutant {
  Grammar base;
  TransformationConfig config;
  Grammar grammar;
};

inline std::vector<Mutant> mutants(std::size_t count, unsigned seed) {
  const std::vector<Grammar> bases = corpus();
  std::mt19937 rng(seed);
  std::vector<Mutant> out;
  while (out.size() < count) {
    const Grammar& base = pick(bases, rng);
    TransformationConfig c;
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < n; ++i) c.entries.push_back(random_op(base, rng));
    ApplyResult r;
    try {
      r = apply_config(c, base);
    } catch (const TransformError& e) {
      throw std::runtime_error("engine rejected a well-formed config: " + std::string(e.what()) + "\n" +
                               config_to_json(c));
    }
    if (rule_tokens(r.grammar) == rule_tokens(base)) continue;
    out.push_back({base, std::move(c), std::move(r.grammar)});
  }
  return out;
}

}  // namespace coevo::testing
