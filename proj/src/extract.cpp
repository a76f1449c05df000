#include "coevo/extract.hpp"

#include <algorithm>
#include <set>

#include "coevo/parser.hpp"

namespace coevo {

namespace {

std::string unquoted(const std::string& literal) {
  return literal.size() >= 2 ? literal.substr(1, literal.size() - 2) : literal;
}

bool is_brace(const std::string& literal) {
  const std::string v = unquoted(literal);
  return v == "{" || v == "}";
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

struct Vocabulary {
  std::vector<std::string> features;
  std::vector<std::string> keywords;  // brace literals excluded
  std::vector<std::string> separators;  // keywords heading a `*`/`+` group
  std::vector<std::string> called;    // rule calls and cross-reference terminals
};

Vocabulary vocabulary_of(const ParserRule& rule) {
  Vocabulary v;
  for (const auto& a : assignments_of(rule)) push_unique(v.features, a.node->text);
  walk(rule.body, [&](const Expression& n, const NodePath&) {
    if (n.is(ExprKind::kKeyword) && !is_brace(n.text)) push_unique(v.keywords, n.text);
    if (n.is(ExprKind::kGroup) && (n.cardinality == Cardinality::kStar || n.cardinality == Cardinality::kPlus) &&
        n.children.size() >= 2 && n.children[0].is(ExprKind::kKeyword)) {
      push_unique(v.separators, n.children[0].text);
    }
    if (n.is(ExprKind::kRuleCall)) push_unique(v.called, n.text);
    if (n.is(ExprKind::kCrossReference) && !n.terminal.empty()) push_unique(v.called, n.terminal);
  });
  return v;
}

TransformOp make(OpKind kind, Scope scope) {
  TransformOp op;
  op.kind = kind;
  op.scope = std::move(scope);
  return op;
}

// Attribute scopes first, then the rule scope.
std::vector<Scope> scopes_for(const std::string& rule, const Vocabulary& v) {
  std::vector<Scope> out;
  for (const auto& f : v.features) out.push_back(Scope::of_attribute(rule, f));
  out.push_back(Scope::of_rule(rule));
  return out;
}

std::vector<TransformOp> candidates(int phase, const ParserRule& current, const ParserRule& target) {
  const Vocabulary cur = vocabulary_of(current);
  const Vocabulary tgt = vocabulary_of(target);
  const auto scopes = scopes_for(current.name, cur);
  std::vector<TransformOp> out;
  switch (phase) {
    case 2:
      for (const auto& f : cur.features) out.push_back(make(OpKind::kPromoteAttribute, Scope::of_attribute(current.name, f)));
      break;
    case 3:
      for (const auto& s : scopes) {
        out.push_back(make(OpKind::kMakeBracesOptional, s));
        out.push_back(make(OpKind::kAddOptionality, s));
        out.push_back(make(OpKind::kRemoveOptionality, s));
      }
      break;
    case 4:
      for (const auto& s : scopes) out.push_back(make(OpKind::kRemoveBraces, s));
      break;
    case 5:
      for (const auto& s : scopes) {
        for (const auto& k : cur.keywords) {
          // Separators are left to CHANGE_SEPARATOR.
          if (std::find(cur.separators.begin(), cur.separators.end(), k) != cur.separators.end()) continue;
          TransformOp op = make(OpKind::kRemoveKeyword, s);
          op.text = k;
          out.push_back(op);
          for (const auto& t : tgt.keywords) {
            if (unquoted(t) == unquoted(k)) continue;
            TransformOp r = make(OpKind::kRenameKeyword, s);
            r.from = k;
            r.to = t;
            out.push_back(r);
          }
        }
        if (s.kind == ScopeKind::kRule) {
          TransformOp any = make(OpKind::kRemoveKeyword, s);
          any.any_keyword = true;
          out.push_back(any);
        }
      }
      break;
    case 6:
      for (const auto& s : scopes) {
        for (const auto& k : cur.separators) {
          TransformOp none = make(OpKind::kChangeSeparator, s);
          none.from = k;
          out.push_back(none);
          for (const auto& t : tgt.keywords) {
            if (unquoted(t) == unquoted(k)) continue;
            TransformOp op = none;
            op.to = t;
            out.push_back(op);
          }
        }
        for (const auto& t : tgt.keywords) {
          TransformOp op = make(OpKind::kAddTerminator, s);
          op.text = t;
          out.push_back(op);
        }
      }
      break;
    case 7:
      for (const auto& s : scopes) {
        for (const auto& c : cur.called) {
          for (const auto& t : tgt.called) {
            if (c == t) continue;
            TransformOp op = make(OpKind::kChangeCalledRule, s);
            op.from = c;
            op.to = t;
            out.push_back(op);
          }
        }
      }
      break;
    default:
      break;
  }
  return out;
}

TransformOp replacement_for(const ParserRule& from, const ParserRule& to) {
  TransformOp op = make(OpKind::kReplaceRule, Scope::of_rule(to.name));
  op.body = print_expression(to.body);
  if (from.returns_type != to.returns_type) op.returns_type = to.returns_type.value_or("");
  return op;
}

TransformOp with_rule(TransformOp op, const std::string& rule) {
  op.scope.rule = rule;
  return op;
}

class Extractor {
 public:
  Extractor(const Grammar& g1, const Grammar& g1prime) : g1_(g1), g1prime_(g1prime) {}

  ExtractionResult run() {
    const RulePairing pairing = pair_rules(g1_, g1prime_);
    paired_ = pairing.paired;
    for (const auto& name : paired_) {
      const ParserRule& from = *find_rule(g1_, name);
      const ParserRule& to = *find_rule(g1prime_, name);
      if (rule_token_stream(from) == rule_token_stream(to)) continue;
      rules_.push_back(extract_rule(from, to));
    }

    std::vector<TransformOp> merged;
    TransformationConfig config = build(merged);
    for (const auto& name : mismatches(config)) {
      // Inferred ops that pass alone but not in the full config; should not
      // happen, but the fallback keeps the round trip exact regardless.
      for (auto& r : rules_) {
        if (r.rule == name && !r.fallback) {
          r.fallback = true;
          r.residual = token_delta(rule_token_stream(*find_rule(g1_, name)),
                                   rule_token_stream(*find_rule(g1prime_, name)));
        }
      }
      config = build(merged);
    }

    if (pairing.unmatched_left.empty() && rules_.size() >= 2 && rules_.size() == g1_.rules.size()) {
      config = merge_grammar_wide(config, merged);
    }

    ExtractionResult result;
    result.config = std::move(config);
    result.config.identity = result.config.entries.empty();
    result.config.provenance = "structural diff of " + std::to_string(paired_.size()) + " paired rule(s)";
    for (const auto& r : rules_) {
      auto& ops = result.per_rule_ops[r.rule];
      if (r.fallback) {
        ++result.fallback_count;
        ops.push_back(replacement_for(*find_rule(g1_, r.rule), *find_rule(g1prime_, r.rule)));
        continue;
      }
      for (const auto& op : result.config.entries) {
        if (op.scope.kind == ScopeKind::kGrammar || op.scope.rule == r.rule) ops.push_back(op);
      }
    }
    result.rules = std::move(rules_);
    return result;
  }

 private:
  // `merged` holds grammar-scoped ops replacing the rule-scoped copies.
  TransformationConfig build(const std::vector<TransformOp>& merged) const {
    TransformationConfig c;
    for (const auto& op : merged) c.entries.push_back(op);
    for (const auto& r : rules_) {
      if (r.fallback) {
        c.entries.push_back(replacement_for(*find_rule(g1_, r.rule), *find_rule(g1prime_, r.rule)));
        continue;
      }
      for (const auto& op : r.inferred) {
        TransformOp wide = op;
        wide.scope = Scope::grammar();
        const bool absorbed = op.scope.kind == ScopeKind::kRule &&
                              std::find(merged.begin(), merged.end(), wide) != merged.end();
        if (!absorbed) c.entries.push_back(op);
      }
    }
    // Keep per-rule listing order but let phases interleave correctly.
    std::stable_sort(c.entries.begin(), c.entries.end(),
                     [](const TransformOp& a, const TransformOp& b) { return phase_of(a.kind) < phase_of(b.kind); });
    return c;
  }

  std::vector<std::string> mismatches(const TransformationConfig& config) const {
    std::vector<std::string> bad;
    Grammar out;
    try {
      out = apply_config(config, g1_).grammar;
    } catch (const TransformError&) {
      for (const auto& r : rules_) bad.push_back(r.rule);
      return bad;
    }
    for (const auto& name : paired_) {
      const ParserRule* got = find_rule(out, name);
      if (got == nullptr || rule_token_stream(*got) != rule_token_stream(*find_rule(g1prime_, name))) {
        bad.push_back(name);
      }
    }
    return bad;
  }

  TransformationConfig merge_grammar_wide(TransformationConfig config, std::vector<TransformOp>& merged) const {
    if (std::any_of(rules_.begin(), rules_.end(), [](const RuleExtraction& r) { return r.fallback; })) return config;
    const RuleExtraction& first = rules_.front();
    for (const auto& op : first.inferred) {
      if (op.scope.kind != ScopeKind::kRule) continue;
      const bool everywhere = std::all_of(rules_.begin(), rules_.end(), [&](const RuleExtraction& r) {
        return std::any_of(r.inferred.begin(), r.inferred.end(),
                           [&](const TransformOp& o) { return o == with_rule(op, r.rule); });
      });
      if (!everywhere) continue;
      TransformOp wide = op;
      wide.scope = Scope::grammar();
      merged.push_back(wide);
      TransformationConfig trial = build(merged);
      if (mismatches(trial).empty()) {
        config = std::move(trial);
      } else {
        merged.pop_back();
      }
    }
    return config;
  }

  const Grammar& g1_;
  const Grammar& g1prime_;
  std::vector<std::string> paired_;
  std::vector<RuleExtraction> rules_;
};

}  // namespace

TokenStream rule_token_stream(const ParserRule& rule) { return tokenize(print_rule(rule)); }

RulePairing pair_rules(const Grammar& left, const Grammar& right) {
  RulePairing p;
  std::set<std::string> seen;
  for (const auto& r : left.rules) {
    if (!seen.insert(r.name).second) continue;
    if (find_rule(right, r.name) != nullptr) {
      p.paired.push_back(r.name);
    } else {
      p.unmatched_left.push_back(r.name);
    }
  }
  std::set<std::string> right_seen;
  for (const auto& r : right.rules) {
    if (right_seen.insert(r.name).second && find_rule(left, r.name) == nullptr) p.unmatched_right.push_back(r.name);
  }
  return p;
}

RuleExtraction extract_rule(const ParserRule& from, const ParserRule& to) {
  RuleExtraction out;
  out.rule = from.name;
  const TokenStream target = rule_token_stream(to);
  Grammar current;
  current.rules.push_back(from);
  std::size_t distance = token_distance(rule_token_stream(from), target);

  // Among improving candidates, prefer clean ones (every edit they make
  // moves towards the target), then the larger reduction, then the earlier
  // candidate.
  for (int phase = 2; phase <= 7 && distance > 0; ++phase) {
    while (distance > 0) {
      const TokenStream before = rule_token_stream(current.rules[0]);
      std::optional<TransformOp> best;
      Grammar best_grammar;
      std::size_t best_distance = distance;
      bool best_clean = false;
      for (const auto& op : candidates(phase, current.rules[0], to)) {
        SingleResult r;
        try {
          r = apply_single(op, current);
        } catch (const TransformError&) {
          continue;
        }
        if (r.matched == 0 || !validate(r.grammar).empty()) continue;
        const TokenStream after = rule_token_stream(r.grammar.rules[0]);
        const std::size_t d = token_distance(after, target);
        if (d >= distance) continue;
        const bool clean = token_distance(before, after) == distance - d;
        if (!best || (clean && !best_clean) || (clean == best_clean && d < best_distance)) {
          best = op;
          best_grammar = std::move(r.grammar);
          best_distance = d;
          best_clean = clean;
        }
      }
      if (!best) break;
      out.inferred.push_back(*best);
      current = std::move(best_grammar);
      distance = best_distance;
    }
  }

  if (distance > 0 || current.rules[0].returns_type != to.returns_type) {
    out.fallback = true;
    out.residual = token_delta(rule_token_stream(current.rules[0]), target);
  }
  return out;
}

ExtractionResult extract_config(const Grammar& g1, const Grammar& g1prime) { return Extractor(g1, g1prime).run(); }

std::string summarize(const ExtractionResult& result) {
  std::string out;
  for (const auto& op : result.config.entries) out += describe(op) + "\n";
  out += std::to_string(result.config.entries.size()) + " operations, fallbackCount " +
         std::to_string(result.fallback_count) + "\n";
  return out;
}

}  // namespace coevo
