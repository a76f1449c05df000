#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/grammar.hpp"

namespace coevo {

enum class FindingKind {
  kUnresolvedRuleCall,
  kEmptyCrossrefType,
  kDuplicateRule,
  kMissingEntryRule,
  kInconsistentAssignOperator,
  kUndefinedTerminal,
};

struct ConformanceFinding {
  std::string rule;
  FindingKind kind = FindingKind::kUnresolvedRuleCall;
  std::string detail;

  bool operator==(const ConformanceFinding&) const = default;
};

std::string_view to_string(FindingKind kind);

/// `KIND rule: detail`
std::string format_finding(const ConformanceFinding& f);

/// ID, STRING, INT and EString.
std::set<std::string> default_known_terminals();

/// One identifier per line; blank lines and `#` comments are skipped.
std::set<std::string> parse_terminals_file(std::string_view text);

/// Empty result means PASS. Findings come in rule order, then pre-order.
std::vector<ConformanceFinding> check_conformance(const Grammar& grammar,
                                                  const std::set<std::string>& known_terminals);

}  // namespace coevo
