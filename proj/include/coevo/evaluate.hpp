#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coevo/conformance.hpp"
#include "coevo/grammar.hpp"
#include "coevo/token_diff.hpp"

namespace coevo {

enum class RuleStatus { kSame, kDiff, kMissingInCandidate, kExtraInCandidate };

struct RuleComparison {
  std::string rule;
  RuleStatus status = RuleStatus::kSame;
  std::size_t token_distance = 0;
};

enum class AdaptationType {
  kBraceOptionalityRemoval,
  kKeywordRemoval,
  kAttributePromotion,
  kSeparatorModification,
  kTypeSystemAdaptation,
};

struct TypeCounts {
  int occ = 0;
  int cor = 0;
  int inc = 0;

  bool operator==(const TypeCounts&) const = default;
};

struct RacResult {
  int n_total = 0;
  int n_correct = 0;
  double rac = 1.0;
};

struct Similarity {
  int same = 0;
  int diff = 0;
  double percent = 1.0;
};

struct EvaluationReport {
  RacResult rac;
  Similarity similarity;
  std::map<AdaptationType, TypeCounts> per_type;
  std::vector<RuleComparison> comparisons;
  std::optional<std::vector<ConformanceFinding>> conformance;
};

std::string_view to_string(RuleStatus s);
std::string_view to_string(AdaptationType t);

/// Printed rule tokens with `'x'` and `"x"` folded to one spelling.
TokenStream comparison_tokens(const ParserRule& rule);

/// Target rules in order, then candidate-only rules.
std::vector<RuleComparison> compare_rules(const Grammar& candidate, const Grammar& target);

RacResult compute_rac(const Grammar& g2, const Grammar& candidate, const Grammar& target);
Similarity compute_similarity(const Grammar& candidate, const Grammar& target);

/// Adaptation types needed to turn `from` into `to`.
std::set<AdaptationType> required_types(const ParserRule& from, const ParserRule& to);

std::map<AdaptationType, TypeCounts> classify_adaptations(const Grammar& g2, const Grammar& target,
                                                          const Grammar& candidate);

EvaluationReport evaluate(const Grammar& g2, const Grammar& candidate, const Grammar& target);

/// `num/den` as a percentage rounded half-up to two decimals, e.g. "84.21%".
/// A zero denominator reads "100.00%".
std::string format_percent(long num, long den);

std::string report_to_json(const EvaluationReport& report);
std::string report_to_text(const EvaluationReport& report);

}  // namespace coevo
