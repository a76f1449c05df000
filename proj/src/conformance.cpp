#include "coevo/conformance.hpp"

#include <map>
#include <sstream>

#include "coevo/parser.hpp"

namespace coevo {

std::string_view to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::kUnresolvedRuleCall: return "UNRESOLVED_RULE_CALL";
    case FindingKind::kEmptyCrossrefType: return "EMPTY_CROSSREF_TYPE";
    case FindingKind::kDuplicateRule: return "DUPLICATE_RULE";
    case FindingKind::kMissingEntryRule: return "MISSING_ENTRY_RULE";
    case FindingKind::kInconsistentAssignOperator: return "INCONSISTENT_ASSIGN_OPERATOR";
    case FindingKind::kUndefinedTerminal: return "UNDEFINED_TERMINAL";
  }
  return "UNKNOWN";
}

std::string format_finding(const ConformanceFinding& f) {
  std::string out(to_string(f.kind));
  if (!f.rule.empty()) out += " " + f.rule;
  return out + ": " + f.detail;
}

std::set<std::string> default_known_terminals() { return {"ID", "STRING", "INT", "EString"}; }

std::set<std::string> parse_terminals_file(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.insert(line.substr(b, e - b + 1));
  }
  return out;
}

std::vector<ConformanceFinding> check_conformance(const Grammar& grammar,
                                                  const std::set<std::string>& known_terminals) {
  std::vector<ConformanceFinding> out;
  if (grammar.rules.empty()) {
    out.push_back({"", FindingKind::kMissingEntryRule, "grammar declares no parser rule"});
    return out;
  }

  std::set<std::string> names(known_terminals);
  for (const auto& t : grammar.terminals) names.insert(t.name);
  for (const auto& r : grammar.rules) names.insert(r.name);

  std::set<std::string> seen;
  for (const auto& rule : grammar.rules) {
    if (!seen.insert(rule.name).second) {
      out.push_back({rule.name, FindingKind::kDuplicateRule, "rule '" + rule.name + "' is declared more than once"});
    }
    std::map<std::string, std::set<AssignOp>> ops;
    std::set<std::string> reported;
    walk(rule.body, [&](const Expression& n, const NodePath&) {
      switch (n.kind) {
        case ExprKind::kRuleCall:
          if (!names.count(n.text)) {
            out.push_back({rule.name, FindingKind::kUnresolvedRuleCall, "'" + n.text + "' is not a rule or terminal"});
          }
          break;
        case ExprKind::kCrossReference:
          if (n.text.empty()) {
            out.push_back({rule.name, FindingKind::kEmptyCrossrefType, print_expression(n)});
          }
          if (!n.terminal.empty() && !names.count(n.terminal)) {
            out.push_back({rule.name, FindingKind::kUndefinedTerminal,
                           "'" + n.terminal + "' in " + print_expression(n) + " is not defined"});
          }
          break;
        case ExprKind::kAssignment: {
          auto& seen_ops = ops[n.text];
          seen_ops.insert(n.op);
          if (seen_ops.count(AssignOp::kAdd) && seen_ops.count(AssignOp::kAssign) && reported.insert(n.text).second) {
            out.push_back({rule.name, FindingKind::kInconsistentAssignOperator,
                           "feature '" + n.text + "' is assigned with both '+=' and '='"});
          }
          break;
        }
        default:
          break;
      }
    });
  }
  return out;
}

}  // namespace coevo
