#include "coevo/transform.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "coevo/parser.hpp"

namespace coevo {

namespace {

constexpr std::array<std::pair<OpKind, std::string_view>, 11> kOpNames{{
    {OpKind::kRemoveKeyword, "REMOVE_KEYWORD"},
    {OpKind::kRemoveBraces, "REMOVE_BRACES"},
    {OpKind::kRemoveOptionality, "REMOVE_OPTIONALITY"},
    {OpKind::kAddOptionality, "ADD_OPTIONALITY"},
    {OpKind::kChangeSeparator, "CHANGE_SEPARATOR"},
    {OpKind::kAddTerminator, "ADD_TERMINATOR"},
    {OpKind::kRenameKeyword, "RENAME_KEYWORD"},
    {OpKind::kChangeCalledRule, "CHANGE_CALLED_RULE"},
    {OpKind::kPromoteAttribute, "PROMOTE_ATTRIBUTE"},
    {OpKind::kMakeBracesOptional, "MAKE_BRACES_OPTIONAL"},
    {OpKind::kReplaceRule, "REPLACE_RULE"},
}};

std::string_view unquote(std::string_view lit) {
  if (lit.size() >= 2 && (lit.front() == '\'' || lit.front() == '"') && lit.back() == lit.front()) {
    return lit.substr(1, lit.size() - 2);
  }
  return lit;
}

bool is_quoted(std::string_view lit) { return unquote(lit).size() + 2 == lit.size(); }

bool is_brace_value(std::string_view v) { return v == "{" || v == "}"; }

bool is_brace(const Expression& e) {
  return e.is(ExprKind::kKeyword) && is_brace_value(e.keyword_value());
}

bool keyword_is(const Expression& e, std::string_view value) {
  return e.is(ExprKind::kKeyword) && e.keyword_value() == value;
}

// ---------------------------------------------------------------------------
// Attribute regions

bool only_feature(const Expression& node, std::string_view feature) {
  bool any = false;
  bool others = false;
  walk(node, [&](const Expression& n, const NodePath&) {
    if (!n.is(ExprKind::kAssignment)) return;
    if (n.text == feature) {
      any = true;
    } else {
      others = true;
    }
  });
  return any && !others;
}

NodePath parent_of(const NodePath& p) { return NodePath(p.begin(), p.end() - 1); }

// The largest proper subtree of the body around each assignment of `feature`
// whose assignments all bind that feature. Disjoint, in pre-order.
std::vector<NodePath> regions(const Expression& body, std::string_view feature) {
  std::vector<NodePath> out;
  walk(body, [&](const Expression& n, const NodePath& path) {
    if (!n.is(ExprKind::kAssignment) || n.text != feature) return;
    NodePath r = path;
    while (r.size() > 1) {
      const NodePath up = parent_of(r);
      if (!only_feature(*node_at(body, up), feature)) break;
      r = up;
    }
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  });
  return out;
}

// Keyword sibling directly before a region that names the feature, as in
// `'shortName' shortName=Identifier`.
std::optional<NodePath> leading_keyword(const Expression& body, const NodePath& region,
                                        std::string_view feature) {
  if (region.empty() || region.back() == 0) return std::nullopt;
  const Expression* parent = node_at(body, parent_of(region));
  if (!parent->is(ExprKind::kGroup)) return std::nullopt;
  const Expression& prev = parent->children[region.back() - 1];
  if (!keyword_is(prev, feature)) return std::nullopt;
  NodePath p = parent_of(region);
  p.push_back(region.back() - 1);
  return p;
}

std::vector<std::string> features_of(const Expression& body) {
  std::vector<std::string> out;
  walk(body, [&](const Expression& n, const NodePath&) {
    if (n.is(ExprKind::kAssignment) && std::find(out.begin(), out.end(), n.text) == out.end()) {
      out.push_back(n.text);
    }
  });
  return out;
}

void erase_at(Expression& body, const NodePath& path) {
  Expression* parent = node_at(body, parent_of(path));
  parent->children.erase(parent->children.begin() + static_cast<std::ptrdiff_t>(path.back()));
}

// ---------------------------------------------------------------------------
// Subtree rewrites. Each returns the number of matched nodes.

template <typename Pred>
int remove_keywords(Expression& node, const Pred& pred) {
  if (node.is(ExprKind::kAssignment)) return 0;
  int n = 0;
  auto& kids = node.children;
  for (std::size_t i = 0; i < kids.size();) {
    if (kids[i].is(ExprKind::kKeyword) && !is_brace(kids[i]) && pred(kids[i])) {
      kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(i));
      ++n;
    } else {
      n += remove_keywords(kids[i], pred);
      ++i;
    }
  }
  return n;
}

template <typename Fn>
int for_each_keyword(Expression& node, const Fn& fn) {
  int n = 0;
  if (node.is(ExprKind::kKeyword)) n += fn(node) ? 1 : 0;
  for (auto& c : node.children) n += for_each_keyword(c, fn);
  return n;
}

// Pairs of standalone brace keywords among a group's direct children.
std::vector<std::pair<std::size_t, std::size_t>> brace_pairs(const Expression& group) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < group.children.size(); ++i) {
    const auto& c = group.children[i];
    if (keyword_is(c, "{") && c.cardinality == Cardinality::kOne) {
      open.push_back(i);
    } else if (keyword_is(c, "}") && c.cardinality == Cardinality::kOne && !open.empty()) {
      pairs.emplace_back(open.back(), i);
      open.pop_back();
    }
  }
  return pairs;
}

int remove_braces(Expression& node) {
  if (node.is(ExprKind::kAssignment)) return 0;
  int n = 0;
  for (auto& c : node.children) n += remove_braces(c);
  if (!node.is(ExprKind::kGroup)) return n;
  auto pairs = brace_pairs(node);
  if (pairs.empty()) return n;
  std::vector<std::size_t> drop;
  for (auto [a, b] : pairs) {
    drop.push_back(a);
    drop.push_back(b);
  }
  std::sort(drop.rbegin(), drop.rend());
  for (std::size_t i : drop) node.children.erase(node.children.begin() + static_cast<std::ptrdiff_t>(i));
  return n + static_cast<int>(pairs.size());
}

bool binds(const Expression& node, std::string_view feature) {
  bool found = false;
  walk(node, [&](const Expression& n, const NodePath&) { found = found || (n.is(ExprKind::kAssignment) && n.text == feature); });
  return found;
}

// Innermost brace pairs around assignments of `feature`.
int remove_feature_braces(Expression& node, std::string_view feature) {
  if (node.is(ExprKind::kAssignment)) return 0;
  int n = 0;
  for (auto& c : node.children) n += remove_feature_braces(c, feature);
  if (n > 0 || !node.is(ExprKind::kGroup)) return n;
  std::vector<std::size_t> drop;
  for (auto [a, b] : brace_pairs(node)) {
    for (std::size_t i = a + 1; i < b; ++i) {
      if (binds(node.children[i], feature)) {
        drop.push_back(a);
        drop.push_back(b);
        break;
      }
    }
  }
  std::sort(drop.rbegin(), drop.rend());
  for (std::size_t i : drop) node.children.erase(node.children.begin() + static_cast<std::ptrdiff_t>(i));
  return static_cast<int>(drop.size() / 2);
}

int make_braces_optional(Expression& group, bool is_root) {
  if (!group.is(ExprKind::kGroup)) return 0;
  auto pairs = brace_pairs(group);
  if (pairs.empty()) return 0;
  // Outermost pair that opens first.
  auto [open, close] = *std::min_element(pairs.begin(), pairs.end());
  const bool whole = open == 0 && close + 1 == group.children.size();
  if (whole && !is_root) {
    if (group.cardinality != Cardinality::kOne) return 0;
    group.cardinality = Cardinality::kOptional;
    return 1;
  }
  std::vector<Expression> span(group.children.begin() + static_cast<std::ptrdiff_t>(open),
                               group.children.begin() + static_cast<std::ptrdiff_t>(close) + 1);
  group.children.erase(group.children.begin() + static_cast<std::ptrdiff_t>(open),
                       group.children.begin() + static_cast<std::ptrdiff_t>(close) + 1);
  group.children.insert(group.children.begin() + static_cast<std::ptrdiff_t>(open),
                        Expression::group(std::move(span), Cardinality::kOptional));
  return 1;
}

int change_separator(Expression& node, std::string_view from, const std::optional<std::string>& to) {
  if (node.is(ExprKind::kAssignment)) return 0;
  int n = 0;
  for (auto& c : node.children) n += change_separator(c, from, to);
  const bool repeated = node.cardinality == Cardinality::kStar || node.cardinality == Cardinality::kPlus;
  if (node.is(ExprKind::kGroup) && repeated && node.children.size() >= 2 &&
      keyword_is(node.children.front(), from) && node.children.front().cardinality == Cardinality::kOne) {
    if (to) {
      node.children.front().text = *to;
    } else {
      node.children.erase(node.children.begin());
    }
    ++n;
  }
  return n;
}

int change_called_rule(Expression& node, std::string_view from, const std::string& to) {
  int n = 0;
  if (node.is(ExprKind::kRuleCall) && node.text == from) {
    node.text = to;
    ++n;
  }
  if (node.is(ExprKind::kCrossReference) && node.terminal == from) {
    node.terminal = to;
    ++n;
  }
  for (auto& c : node.children) n += change_called_rule(c, from, to);
  return n;
}

// ---------------------------------------------------------------------------
// Per-rule application

struct RuleContext {
  Expression& body;
  const std::string& rule_name;
};

// Runs `fn(body, region_path)` on each region of each feature selected by the
// scope, later regions first so earlier paths stay valid.
template <typename Fn>
int for_each_region(Expression& body, const Scope& scope, const Fn& fn) {
  std::vector<std::string> feats;
  if (scope.kind == ScopeKind::kAttribute) {
    feats.push_back(scope.feature);
  } else {
    feats = features_of(body);
  }
  int n = 0;
  for (const auto& f : feats) {
    auto rs = regions(body, f);
    for (auto it = rs.rbegin(); it != rs.rend(); ++it) n += fn(body, *it, f);
  }
  return n;
}

int apply_keyword_removal(const TransformOp& op, RuleContext ctx) {
  const auto value = unquote(op.text);
  if (op.scope.kind != ScopeKind::kAttribute) {
    std::set<std::string, std::less<>> names;
    if (op.any_keyword) {
      names.insert(ctx.rule_name);
      for (auto& f : features_of(ctx.body)) names.insert(f);
    }
    return remove_keywords(ctx.body, [&](const Expression& k) {
      return op.any_keyword ? names.count(k.keyword_value()) > 0 : k.keyword_value() == value;
    });
  }
  const std::string& feature = op.scope.feature;
  const std::string_view wanted = op.any_keyword ? std::string_view(feature) : value;
  return for_each_region(ctx.body, op.scope, [&](Expression& body, const NodePath& r, const std::string&) {
    int n = remove_keywords(*node_at(body, r), [&](const Expression& k) { return k.keyword_value() == wanted; });
    if (auto kw = leading_keyword(body, r, feature); kw && node_at(body, *kw)->keyword_value() == wanted) {
      erase_at(body, *kw);
      ++n;
    }
    return n;
  });
}

int apply_rename(const TransformOp& op, RuleContext ctx) {
  const auto from = unquote(op.from);
  auto rename = [&](Expression& k) {
    if (k.keyword_value() != from) return false;
    k.text = *op.to;
    return true;
  };
  if (op.scope.kind != ScopeKind::kAttribute) return for_each_keyword(ctx.body, rename);
  const std::string& feature = op.scope.feature;
  return for_each_region(ctx.body, op.scope, [&](Expression& body, const NodePath& r, const std::string&) {
    int n = for_each_keyword(*node_at(body, r), rename);
    if (auto kw = leading_keyword(body, r, feature)) n += rename(*node_at(body, *kw)) ? 1 : 0;
    return n;
  });
}

int apply_optionality(const TransformOp& op, RuleContext ctx) {
  const bool add = op.kind == OpKind::kAddOptionality;
  return for_each_region(ctx.body, op.scope, [&](Expression& body, const NodePath& r, const std::string& f) {
    Expression& node = *node_at(body, r);
    if (!add) {
      if (node.cardinality != Cardinality::kOptional) return 0;
      node.cardinality = Cardinality::kOne;
      // A card-ONE group inside a group is just parentheses: splice it.
      if (r.empty()) return 1;
      Expression& parent = *node_at(body, parent_of(r));
      if (node.is(ExprKind::kGroup) && parent.is(ExprKind::kGroup)) {
        std::vector<Expression> kids = std::move(node.children);
        const auto at = parent.children.begin() + static_cast<std::ptrdiff_t>(r.back());
        auto pos = parent.children.erase(at);
        parent.children.insert(pos, std::make_move_iterator(kids.begin()),
                               std::make_move_iterator(kids.end()));
      }
      return 1;
    }
    if (node.cardinality != Cardinality::kOne || node.predicated) return 0;
    if (auto kw = leading_keyword(body, r, f)) {
      Expression& parent = *node_at(body, parent_of(r));
      const auto first = parent.children.begin() + static_cast<std::ptrdiff_t>(kw->back());
      std::vector<Expression> pair(std::make_move_iterator(first), std::make_move_iterator(first + 2));
      auto pos = parent.children.erase(first, first + 2);
      parent.children.insert(pos, Expression::group(std::move(pair), Cardinality::kOptional));
      return 1;
    }
    node.cardinality = Cardinality::kOptional;
    return 1;
  });
}

int apply_terminator(const TransformOp& op, RuleContext ctx) {
  const auto value = unquote(op.text);
  return for_each_region(ctx.body, op.scope, [&](Expression& body, const NodePath& r, const std::string&) {
    Expression& node = *node_at(body, r);
    if (node.is(ExprKind::kGroup)) {
      if (!node.children.empty() && keyword_is(node.children.back(), value)) return 0;
      node.children.push_back(Expression::keyword(op.text));
      return 1;
    }
    Expression* parent = r.empty() ? nullptr : node_at(body, parent_of(r));
    if (parent && parent->is(ExprKind::kGroup)) {
      const std::size_t next = r.back() + 1;
      if (next < parent->children.size() && keyword_is(parent->children[next], value)) return 0;
      parent->children.insert(parent->children.begin() + static_cast<std::ptrdiff_t>(next),
                             Expression::keyword(op.text));
      return 1;
    }
    Expression moved = std::move(node);
    node = Expression::group({std::move(moved), Expression::keyword(op.text)});
    return 1;
  });
}

// The brace span the rule's attributes live in: either a root-level
// `'{' ... '}'` run or a root child group that starts with `'{'`.
struct BraceSpan {
  std::size_t open;       // root index of '{' (or of the brace group)
  bool nested;            // true when the span is a child group
};

std::optional<BraceSpan> rule_braces(const Expression& root) {
  if (!root.is(ExprKind::kGroup)) return std::nullopt;
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    const auto& c = root.children[i];
    if (keyword_is(c, "{")) return BraceSpan{i, false};
    if (c.is(ExprKind::kGroup) && !c.children.empty() && keyword_is(c.children.front(), "{")) {
      return BraceSpan{i, true};
    }
  }
  return std::nullopt;
}

int apply_promote(const TransformOp& op, RuleContext ctx) {
  Expression& root = ctx.body;
  auto braces = rule_braces(root);
  if (!braces) return 0;
  const std::string& feature = op.scope.feature;
  std::optional<std::size_t> close;
  if (!braces->nested) {
    for (auto [o, c] : brace_pairs(root)) {
      if (o == braces->open) close = c;
    }
    if (!close) return 0;
  }
  for (const auto& r : regions(root, feature)) {
    const bool inside = braces->nested ? r.front() == braces->open
                                       : r.front() > braces->open && r.front() < *close;
    if (!inside) continue;
    Expression moved = std::move(*node_at(root, r));
    auto kw = leading_keyword(root, r, feature);
    erase_at(root, r);
    if (kw) erase_at(root, *kw);
    if (moved.is_composite()) {
      remove_keywords(moved, [&](const Expression& k) { return k.keyword_value() == feature; });
      moved = normalize(std::move(moved));
    }
    // After the rule's leading keyword, which follows any `{Type}` action.
    std::size_t at = 0;
    while (at < root.children.size() && root.children[at].is(ExprKind::kAction)) ++at;
    if (at < root.children.size() && root.children[at].is(ExprKind::kKeyword) &&
        !is_brace(root.children[at])) {
      ++at;
    }
    root.children.insert(root.children.begin() + static_cast<std::ptrdiff_t>(at), std::move(moved));
    return 1;
  }
  return 0;
}

int apply_to_rule(const TransformOp& op, ParserRule& rule) {
  RuleContext ctx{rule.body, rule.name};
  const bool attr = op.scope.kind == ScopeKind::kAttribute;
  switch (op.kind) {
    case OpKind::kRemoveKeyword:
      return apply_keyword_removal(op, ctx);
    case OpKind::kRemoveBraces:
      if (!attr) return remove_braces(rule.body);
      return for_each_region(rule.body, op.scope, [](Expression& body, const NodePath& r, const std::string& f) {
        return remove_feature_braces(*node_at(body, r), f);
      });
    case OpKind::kRemoveOptionality:
    case OpKind::kAddOptionality:
      return apply_optionality(op, ctx);
    case OpKind::kChangeSeparator: {
      const auto from = unquote(op.from);
      if (!attr) return change_separator(rule.body, from, op.to);
      return for_each_region(rule.body, op.scope, [&](Expression& body, const NodePath& r, const std::string&) {
        return change_separator(*node_at(body, r), from, op.to);
      });
    }
    case OpKind::kAddTerminator:
      return apply_terminator(op, ctx);
    case OpKind::kRenameKeyword:
      return apply_rename(op, ctx);
    case OpKind::kChangeCalledRule: {
      if (!attr) return change_called_rule(rule.body, op.from, *op.to);
      int n = 0;
      for (const auto& a : assignments_of(rule)) {
        if (a.node->text != op.scope.feature) continue;
        n += change_called_rule(*node_at(rule.body, a.path), op.from, *op.to);
      }
      return n;
    }
    case OpKind::kPromoteAttribute:
      return apply_promote(op, ctx);
    case OpKind::kMakeBracesOptional:
      if (!attr) return make_braces_optional(rule.body, true);
      return for_each_region(rule.body, op.scope, [](Expression& body, const NodePath& r, const std::string&) {
        return make_braces_optional(*node_at(body, r), false);
      });
    case OpKind::kReplaceRule: {
      std::vector<ParseDiagnostic> diags;
      auto body = parse_rule_body(op.body, diags);
      if (!body) {
        throw TransformError("REPLACE_RULE for '" + rule.name + "': body does not parse: " +
                             (diags.empty() ? std::string("unknown error") : format_diagnostic(diags.front())));
      }
      rule.body = std::move(*body);
      if (op.returns_type) {
        if (op.returns_type->empty()) {
          rule.returns_type.reset();
        } else {
          rule.returns_type = *op.returns_type;
        }
      }
      return 1;
    }
  }
  return 0;
}

}  // namespace

int phase_of(OpKind kind) {
  switch (kind) {
    case OpKind::kReplaceRule: return 1;
    case OpKind::kPromoteAttribute: return 2;
    case OpKind::kMakeBracesOptional:
    case OpKind::kAddOptionality:
    case OpKind::kRemoveOptionality: return 3;
    case OpKind::kRemoveBraces: return 4;
    case OpKind::kRemoveKeyword:
    case OpKind::kRenameKeyword: return 5;
    case OpKind::kChangeSeparator:
    case OpKind::kAddTerminator: return 6;
    case OpKind::kChangeCalledRule: return 7;
  }
  return 7;
}

std::string_view to_string(OpKind kind) {
  for (const auto& [k, name] : kOpNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<OpKind> op_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kOpNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ScopeKind kind) {
  switch (kind) {
    case ScopeKind::kGrammar: return "GRAMMAR";
    case ScopeKind::kRule: return "RULE";
    case ScopeKind::kAttribute: return "ATTRIBUTE";
  }
  return "?";
}

std::string describe(const TransformOp& op) {
  std::string out(to_string(op.kind));
  switch (op.kind) {
    case OpKind::kRemoveKeyword:
      out += op.any_keyword ? " ANY" : " " + op.text;
      break;
    case OpKind::kAddTerminator:
      out += " " + op.text;
      break;
    case OpKind::kChangeSeparator:
    case OpKind::kRenameKeyword:
    case OpKind::kChangeCalledRule:
      out += " " + op.from + " -> " + (op.to ? *op.to : std::string("NONE"));
      break;
    case OpKind::kReplaceRule:
      out += " <" + std::to_string(op.body.size()) + " chars>";
      break;
    default:
      break;
  }
  out += " @ ";
  switch (op.scope.kind) {
    case ScopeKind::kGrammar: out += "*"; break;
    case ScopeKind::kRule: out += op.scope.rule; break;
    case ScopeKind::kAttribute: out += op.scope.rule + "." + op.scope.feature; break;
  }
  return out;
}

void check_op(const TransformOp& op) {
  const std::string what = describe(op);
  if (op.scope.kind != ScopeKind::kGrammar && op.scope.rule.empty()) {
    throw TransformError(what + ": scope needs a rule name");
  }
  if (op.scope.kind == ScopeKind::kAttribute && op.scope.feature.empty()) {
    throw TransformError(what + ": attribute scope needs a feature name");
  }
  auto need_literal = [&](const std::string& lit, const char* field) {
    if (lit.empty() || !is_quoted(lit)) throw TransformError(what + ": '" + field + "' must be a quoted literal");
    if (is_brace_value(unquote(lit))) throw TransformError(what + ": braces are handled by the brace operations");
  };
  switch (op.kind) {
    case OpKind::kRemoveKeyword:
      if (!op.any_keyword) need_literal(op.text, "text");
      break;
    case OpKind::kAddTerminator:
      need_literal(op.text, "text");
      break;
    case OpKind::kChangeSeparator:
      need_literal(op.from, "from");
      if (op.to) need_literal(*op.to, "to");
      break;
    case OpKind::kRenameKeyword:
      need_literal(op.from, "from");
      if (!op.to) throw TransformError(what + ": missing 'to'");
      need_literal(*op.to, "to");
      break;
    case OpKind::kChangeCalledRule:
      if (op.from.empty() || !op.to || op.to->empty()) throw TransformError(what + ": needs 'from' and 'to'");
      if (op.from == *op.to) throw TransformError(what + ": 'from' equals 'to'");
      break;
    case OpKind::kPromoteAttribute:
      if (op.scope.kind != ScopeKind::kAttribute) throw TransformError(what + ": needs attribute scope");
      break;
    case OpKind::kReplaceRule:
      if (op.scope.kind != ScopeKind::kRule) throw TransformError(what + ": needs rule scope");
      break;
    default:
      break;
  }
}

SingleResult apply_single(const TransformOp& op, const Grammar& grammar) {
  check_op(op);
  SingleResult result{grammar, 0, {}};
  for (auto& rule : result.grammar.rules) {
    if (op.scope.kind != ScopeKind::kGrammar && rule.name != op.scope.rule) continue;
    const int n = apply_to_rule(op, rule);
    if (n > 0) {
      rule.body = normalize(std::move(rule.body));
      result.matched += n;
      result.affected_rules.push_back(rule.name);
    }
  }
  return result;
}

std::vector<std::string> ApplyReport::warnings() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (e.no_match) out.push_back("NO_MATCH: entry " + std::to_string(e.index) + " (" + e.op + ") matched nothing");
  }
  return out;
}

std::vector<std::size_t> execution_order(const std::vector<TransformOp>& entries) {
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return phase_of(entries[a].kind) < phase_of(entries[b].kind);
  });
  return order;
}

ApplyResult apply_config(const TransformationConfig& config, const Grammar& grammar) {
  ApplyResult out{grammar, {}};
  for (std::size_t idx : execution_order(config.entries)) {
    const TransformOp& op = config.entries[idx];
    SingleResult r;
    try {
      r = apply_single(op, out.grammar);
    } catch (const TransformError& e) {
      throw TransformError("entry " + std::to_string(idx) + ": " + e.what());
    }
    out.grammar = std::move(r.grammar);
    out.report.entries.push_back({idx, describe(op), r.matched, std::move(r.affected_rules), r.matched == 0});
  }
  if (auto problems = validate(out.grammar); !problems.empty()) {
    // Only reachable through an engine defect or an invalid input grammar.
    throw TransformError("result violates grammar invariants: " + problems.front());
  }
  return out;
}

}  // namespace coevo
