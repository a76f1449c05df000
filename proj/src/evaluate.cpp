#include "coevo/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "coevo/extract.hpp"
#include "coevo/parser.hpp"

namespace coevo {

namespace {

bool is_literal(const std::string& t) { return t.size() >= 2 && (t[0] == '\'' || t[0] == '"'); }

std::string literal_value(const std::string& t) { return t.substr(1, t.size() - 2); }

std::string fold_quotes(const std::string& t) {
  if (!is_literal(t) || t[0] == '"') return t;
  std::string out = "\"";
  const std::string inner = literal_value(t);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] == '\\' && i + 1 < inner.size() && inner[i + 1] == '\'') {
      out += '\'';
      ++i;
    } else if (inner[i] == '"') {
      out += "\\\"";
    } else {
      out += inner[i];
      if (inner[i] == '\\' && i + 1 < inner.size()) out += inner[++i];
    }
  }
  return out + "\"";
}

AdaptationType type_of(OpKind kind) {
  switch (kind) {
    case OpKind::kRemoveBraces:
    case OpKind::kMakeBracesOptional:
    case OpKind::kRemoveOptionality:
    case OpKind::kAddOptionality:
      return AdaptationType::kBraceOptionalityRemoval;
    case OpKind::kRemoveKeyword:
    case OpKind::kRenameKeyword:
      return AdaptationType::kKeywordRemoval;
    case OpKind::kPromoteAttribute:
      return AdaptationType::kAttributePromotion;
    case OpKind::kChangeSeparator:
    case OpKind::kAddTerminator:
      return AdaptationType::kSeparatorModification;
    default:
      return AdaptationType::kTypeSystemAdaptation;
  }
}

void collect_names(const ParserRule& rule, std::set<std::string>& features, std::set<std::string>& called) {
  walk(rule.body, [&](const Expression& n, const NodePath&) {
    if (n.is(ExprKind::kAssignment)) features.insert(n.text);
    if (n.is(ExprKind::kRuleCall)) called.insert(n.text);
    if (n.is(ExprKind::kCrossReference)) {
      called.insert(n.text);
      called.insert(n.terminal);
    }
  });
}

// Types whose tokens show up in what the catalog could not express.
std::set<AdaptationType> residual_types(const TokenDelta& delta, const ParserRule& from, const ParserRule& to) {
  std::set<std::string> features, called;
  collect_names(from, features, called);
  collect_names(to, features, called);
  std::set<AdaptationType> out;
  auto classify = [&](const std::string& t, const TokenStream& other) {
    if (is_literal(t)) {
      const std::string v = literal_value(t);
      if (v == "{" || v == "}") {
        out.insert(AdaptationType::kBraceOptionalityRemoval);
      } else if (std::any_of(v.begin(), v.end(), [](unsigned char c) { return std::isalnum(c); })) {
        out.insert(AdaptationType::kKeywordRemoval);
      } else {
        out.insert(AdaptationType::kSeparatorModification);
      }
    } else if (t == "(" || t == ")" || t == "?" || t == "*" || t == "+") {
      out.insert(AdaptationType::kBraceOptionalityRemoval);
    } else if (t == "[" || t == "]" || called.count(t)) {
      out.insert(AdaptationType::kTypeSystemAdaptation);
    } else if (features.count(t) && std::find(other.begin(), other.end(), t) != other.end()) {
      out.insert(AdaptationType::kAttributePromotion);
    }
  };
  for (const auto& t : delta.removed) classify(t, delta.added);
  for (const auto& t : delta.added) classify(t, delta.removed);
  return out;
}

long hundredths_of_percent(long num, long den) {
  if (den <= 0) return 10000;
  return (num * 20000 + den) / (2 * den);
}

double rounded_ratio(long num, long den) { return static_cast<double>(hundredths_of_percent(num, den)) / 10000.0; }

}  // namespace

std::string_view to_string(RuleStatus s) {
  switch (s) {
    case RuleStatus::kSame: return "SAME";
    case RuleStatus::kDiff: return "DIFF";
    case RuleStatus::kMissingInCandidate: return "MISSING_IN_CANDIDATE";
    case RuleStatus::kExtraInCandidate: return "EXTRA_IN_CANDIDATE";
  }
  return "DIFF";
}

std::string_view to_string(AdaptationType t) {
  switch (t) {
    case AdaptationType::kBraceOptionalityRemoval: return "BRACE_OPTIONALITY_REMOVAL";
    case AdaptationType::kKeywordRemoval: return "KEYWORD_REMOVAL";
    case AdaptationType::kAttributePromotion: return "ATTRIBUTE_PROMOTION";
    case AdaptationType::kSeparatorModification: return "SEPARATOR_MODIFICATION";
    case AdaptationType::kTypeSystemAdaptation: return "TYPE_SYSTEM_ADAPTATION";
  }
  return "";
}

TokenStream comparison_tokens(const ParserRule& rule) {
  TokenStream out = rule_token_stream(rule);
  for (auto& t : out) t = fold_quotes(t);
  return out;
}

std::vector<RuleComparison> compare_rules(const Grammar& candidate, const Grammar& target) {
  std::vector<RuleComparison> out;
  for (const auto& t : target.rules) {
    const ParserRule* c = find_rule(candidate, t.name);
    if (c == nullptr) {
      out.push_back({t.name, RuleStatus::kMissingInCandidate, comparison_tokens(t).size()});
      continue;
    }
    const std::size_t d = token_distance(comparison_tokens(*c), comparison_tokens(t));
    out.push_back({t.name, d == 0 ? RuleStatus::kSame : RuleStatus::kDiff, d});
  }
  for (const auto& c : candidate.rules) {
    if (find_rule(target, c.name) == nullptr) {
      out.push_back({c.name, RuleStatus::kExtraInCandidate, comparison_tokens(c).size()});
    }
  }
  return out;
}

namespace {

bool rule_matches(const Grammar& g, const ParserRule& target) {
  const ParserRule* r = find_rule(g, target.name);
  return r != nullptr && comparison_tokens(*r) == comparison_tokens(target);
}

}  // namespace

RacResult compute_rac(const Grammar& g2, const Grammar& candidate, const Grammar& target) {
  RacResult r;
  for (const auto& t : target.rules) {
    if (rule_matches(g2, t)) continue;
    ++r.n_total;
    if (rule_matches(candidate, t)) ++r.n_correct;
  }
  r.rac = r.n_total == 0 ? 1.0 : static_cast<double>(r.n_correct) / r.n_total;
  return r;
}

Similarity compute_similarity(const Grammar& candidate, const Grammar& target) {
  Similarity s;
  for (const auto& t : target.rules) {
    if (rule_matches(candidate, t)) {
      ++s.same;
    } else {
      ++s.diff;
    }
  }
  s.percent = s.same + s.diff == 0 ? 1.0 : static_cast<double>(s.same) / (s.same + s.diff);
  return s;
}

std::set<AdaptationType> required_types(const ParserRule& from, const ParserRule& to) {
  std::set<AdaptationType> out;
  if (comparison_tokens(from) == comparison_tokens(to)) return out;
  const RuleExtraction ext = extract_rule(from, to);
  for (const auto& op : ext.inferred) out.insert(type_of(op.kind));
  if (ext.fallback) {
    for (auto t : residual_types(ext.residual, from, to)) out.insert(t);
  }
  return out;
}

std::map<AdaptationType, TypeCounts> classify_adaptations(const Grammar& g2, const Grammar& target,
                                                          const Grammar& candidate) {
  std::map<AdaptationType, TypeCounts> out;
  for (const auto& t : target.rules) {
    const ParserRule* before = find_rule(g2, t.name);
    if (before == nullptr || rule_matches(g2, t)) continue;
    const ParserRule* after = find_rule(candidate, t.name);
    const std::set<AdaptationType> still_needed =
        after == nullptr ? std::set<AdaptationType>{} : required_types(*after, t);
    for (auto type : required_types(*before, t)) {
      auto& c = out[type];
      ++c.occ;
      if (after != nullptr && !still_needed.count(type)) {
        ++c.cor;
      } else {
        ++c.inc;
      }
    }
  }
  return out;
}

EvaluationReport evaluate(const Grammar& g2, const Grammar& candidate, const Grammar& target) {
  EvaluationReport r;
  r.rac = compute_rac(g2, candidate, target);
  r.similarity = compute_similarity(candidate, target);
  r.per_type = classify_adaptations(g2, target, candidate);
  r.comparisons = compare_rules(candidate, target);
  return r;
}

std::string format_percent(long num, long den) {
  const long h = hundredths_of_percent(num, den);
  std::ostringstream os;
  os << h / 100 << '.' << std::setw(2) << std::setfill('0') << h % 100 << '%';
  return os.str();
}

std::string report_to_json(const EvaluationReport& r) {
  nlohmann::ordered_json doc;
  doc["requiredAdaptations"] = r.rac.n_total;
  doc["correctAdaptations"] = r.rac.n_correct;
  doc["rac"] = rounded_ratio(r.rac.n_correct, r.rac.n_total);
  doc["racText"] = format_percent(r.rac.n_correct, r.rac.n_total);
  doc["same"] = r.similarity.same;
  doc["diff"] = r.similarity.diff;
  doc["percent"] = rounded_ratio(r.similarity.same, r.similarity.same + r.similarity.diff);
  doc["percentText"] = format_percent(r.similarity.same, r.similarity.same + r.similarity.diff);
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (const auto& [type, c] : r.per_type) {
    types[std::string(to_string(type))] = {{"occ", c.occ}, {"cor", c.cor}, {"inc", c.inc}};
  }
  doc["perType"] = std::move(types);
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (const auto& c : r.comparisons) {
    rules.push_back({{"rule", c.rule}, {"status", std::string(to_string(c.status))}, {"tokenDistance", c.token_distance}});
  }
  doc["comparisons"] = std::move(rules);
  if (r.conformance) {
    nlohmann::ordered_json findings = nlohmann::ordered_json::array();
    for (const auto& f : *r.conformance) {
      findings.push_back({{"rule", f.rule}, {"kind", std::string(to_string(f.kind))}, {"detail", f.detail}});
    }
    doc["conformance"] = {{"verdict", r.conformance->empty() ? "PASS" : "FAIL"}, {"findings", std::move(findings)}};
  }
  return doc.dump(2) + "\n";
}

namespace {

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace

std::string report_to_text(const EvaluationReport& r) {
  const int total = r.similarity.same + r.similarity.diff;
  std::string out = table({
      {"required adaptations", "correct adaptations", "RAC", "Same", "Diff", "Percent"},
      {std::to_string(r.rac.n_total), std::to_string(r.rac.n_correct), format_percent(r.rac.n_correct, r.rac.n_total),
       std::to_string(r.similarity.same), std::to_string(r.similarity.diff), format_percent(r.similarity.same, total)},
  });
  if (!r.per_type.empty()) {
    std::vector<std::vector<std::string>> rows{{"adaptation type", "Occ.", "Cor.", "Inc."}};
    for (const auto& [type, c] : r.per_type) {
      rows.push_back({std::string(to_string(type)), std::to_string(c.occ), std::to_string(c.cor), std::to_string(c.inc)});
    }
    out += "\n" + table(rows);
  }
  if (r.conformance) {
    out += "\nconformance: " + std::string(r.conformance->empty() ? "PASS" : "FAIL") + "\n";
    for (const auto& f : *r.conformance) out += "  " + format_finding(f) + "\n";
  }
  return out;
}

}  // namespace coevo
