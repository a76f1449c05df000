#pragma once

#include <map>
#include <string>
#include <vector>

#include "coevo/grammar.hpp"
#include "coevo/token_diff.hpp"
#include "coevo/transform.hpp"

namespace coevo {

/// Rules of two grammars matched by name.
struct RulePairing {
  std::vector<std::string> paired;  // in left order
  std::vector<std::string> unmatched_left;
  std::vector<std::string> unmatched_right;
};

RulePairing pair_rules(const Grammar& left, const Grammar& right);

/// Inference outcome for one paired rule.
struct RuleExtraction {
  std::string rule;
  /// Ops the greedy search accepted. Kept for fallback rules too, where
  /// they describe the part of the diff the catalog could express.
  std::vector<TransformOp> inferred;
  bool fallback = false;
  /// What the inferred ops left unexplained (empty unless fallback).
  TokenDelta residual;
};

struct ExtractionResult {
  TransformationConfig config;
  int fallback_count = 0;
  /// Config entries that act on each rule; grammar-scoped entries are listed
  /// under every rule they were merged from.
  std::map<std::string, std::vector<TransformOp>> per_rule_ops;
  std::vector<RuleExtraction> rules;  // paired rules that needed a change
};

/// Learns a config turning `g1` into `g1prime` on every paired rule.
/// Applying the config to `g1` reproduces the token stream of each paired
/// rule of `g1prime`; rules only present on the right are ignored.
ExtractionResult extract_config(const Grammar& g1, const Grammar& g1prime);

/// Infers ops for a single rule pair (same name assumed).
RuleExtraction extract_rule(const ParserRule& from, const ParserRule& to);

/// One line per config entry, followed by a fallback count line.
std::string summarize(const ExtractionResult& result);

/// Tokens of the printed rule, `returns` clause included.
TokenStream rule_token_stream(const ParserRule& rule);

}  // namespace coevo
