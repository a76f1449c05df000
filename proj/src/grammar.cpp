#include "coevo/grammar.hpp"

#include <set>

namespace coevo {

Expression Expression::keyword(std::string literal) {
  Expression e;
  e.kind = ExprKind::kKeyword;
  e.text = std::move(literal);
  return e;
}

Expression Expression::rule_call(std::string name) {
  Expression e;
  e.kind = ExprKind::kRuleCall;
  e.text = std::move(name);
  return e;
}

Expression Expression::cross_reference(std::string type_name, std::string terminal_name) {
  Expression e;
  e.kind = ExprKind::kCrossReference;
  e.text = std::move(type_name);
  e.terminal = std::move(terminal_name);
  return e;
}

Expression Expression::action(std::string type_name) {
  Expression e;
  e.kind = ExprKind::kAction;
  e.text = std::move(type_name);
  return e;
}

Expression Expression::assignment(std::string feature, AssignOp op, Expression terminal) {
  Expression e;
  e.kind = ExprKind::kAssignment;
  e.text = std::move(feature);
  e.op = op;
  e.children.push_back(std::move(terminal));
  return e;
}

Expression Expression::group(std::vector<Expression> elements, Cardinality card) {
  Expression e;
  e.kind = ExprKind::kGroup;
  e.cardinality = card;
  e.children = std::move(elements);
  return e;
}

Expression Expression::alternatives(std::vector<Expression> branches, Cardinality card) {
  Expression e;
  e.kind = ExprKind::kAlternatives;
  e.cardinality = card;
  e.children = std::move(branches);
  return e;
}

std::string_view Expression::keyword_value() const {
  std::string_view v = text;
  if (v.size() >= 2 && (v.front() == '\'' || v.front() == '"') && v.back() == v.front()) {
    v.remove_prefix(1);
    v.remove_suffix(1);
  }
  return v;
}

const ParserRule* find_rule(const Grammar& grammar, std::string_view name) {
  for (const auto& rule : grammar.rules) {
    if (rule.name == name) return &rule;
  }
  return nullptr;
}

ParserRule* find_rule(Grammar& grammar, std::string_view name) {
  for (auto& rule : grammar.rules) {
    if (rule.name == name) return &rule;
  }
  return nullptr;
}

std::vector<AssignmentRef> assignments_of(const ParserRule& rule) {
  std::vector<AssignmentRef> out;
  walk(rule.body, [&](const Expression& node, const NodePath& path) {
    if (node.is(ExprKind::kAssignment)) out.push_back({path, &node});
  });
  return out;
}

const Expression* node_at(const Expression& root, const NodePath& path) {
  const Expression* cur = &root;
  for (std::size_t idx : path) {
    if (idx >= cur->children.size()) return nullptr;
    cur = &cur->children[idx];
  }
  return cur;
}

Expression* node_at(Expression& root, const NodePath& path) {
  Expression* cur = &root;
  for (std::size_t idx : path) {
    if (idx >= cur->children.size()) return nullptr;
    cur = &cur->children[idx];
  }
  return cur;
}

namespace {

bool is_empty_composite(const Expression& e) {
  return e.is_composite() && e.children.empty();
}

// Applies a cardinality and predicate to `inner` the way a parenthesized
// expression does in source text.
Expression parenthesize(Expression inner, Cardinality card, bool predicated) {
  if (inner.is_composite() && inner.cardinality == Cardinality::kOne && !inner.predicated) {
    inner.cardinality = card;
    inner.predicated = predicated;
    return inner;
  }
  if (card == Cardinality::kOne && !predicated) return inner;
  Expression g = Expression::group({std::move(inner)}, card);
  g.predicated = predicated;
  return g;
}

}  // namespace

Expression normalize(Expression expr) {
  if (expr.children.empty()) return expr;
  std::vector<Expression> kids;
  kids.reserve(expr.children.size());
  for (auto& child : expr.children) {
    Expression n = normalize(std::move(child));
    if (!is_empty_composite(n)) kids.push_back(std::move(n));
  }
  expr.children = std::move(kids);
  if (expr.is_composite() && expr.children.size() == 1) {
    return parenthesize(std::move(expr.children.front()), expr.cardinality, expr.predicated);
  }
  return expr;
}

namespace {

void validate_node(const Expression& node, const Expression* parent, std::size_t index,
                   const std::string& rule, std::vector<std::string>& out) {
  const std::string where = "rule '" + rule + "': ";
  switch (node.kind) {
    case ExprKind::kGroup:
    case ExprKind::kAlternatives:
      if (node.children.empty()) out.push_back(where + "empty " + std::string(to_string(node.kind)));
      break;
    case ExprKind::kAssignment: {
      if (node.text.empty()) out.push_back(where + "assignment without feature name");
      if (node.children.size() != 1) {
        out.push_back(where + "assignment '" + node.text + "' must have exactly one terminal");
      } else {
        const auto k = node.children.front().kind;
        if (k != ExprKind::kKeyword && k != ExprKind::kRuleCall && k != ExprKind::kCrossReference) {
          out.push_back(where + "assignment '" + node.text + "' terminal must be a keyword, rule call or cross-reference");
        }
      }
      break;
    }
    default:
      if (!node.children.empty()) out.push_back(where + "leaf node with children");
      break;
  }
  if (node.predicated) {
    // `=>` may sit on an alternatives node, on a branch of one, or on the
    // head element of a group.
    const bool ok = node.is(ExprKind::kAlternatives) ||
                    (parent == nullptr) ||
                    parent->is(ExprKind::kAlternatives) ||
                    (parent->is(ExprKind::kGroup) && index == 0);
    if (!ok) out.push_back(where + "misplaced syntactic predicate");
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (node.is(ExprKind::kAssignment)) {
      if (node.children[i].predicated || node.children[i].cardinality != Cardinality::kOne) {
        out.push_back(where + "assignment terminal carries its own cardinality or predicate");
      }
      continue;
    }
    validate_node(node.children[i], &node, i, rule, out);
  }
}

}  // namespace

std::vector<std::string> validate(const Grammar& grammar) {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& rule : grammar.rules) {
    if (rule.name.empty()) out.push_back("rule with empty name");
    if (!names.insert(rule.name).second) out.push_back("duplicate rule '" + rule.name + "'");
    validate_node(rule.body, nullptr, 0, rule.name, out);
  }
  std::set<std::string> terminals;
  for (const auto& t : grammar.terminals) {
    if (!terminals.insert(t.name).second) out.push_back("duplicate terminal '" + t.name + "'");
  }
  return out;
}

std::string_view to_string(Cardinality c) {
  switch (c) {
    case Cardinality::kOne: return "";
    case Cardinality::kOptional: return "?";
    case Cardinality::kStar: return "*";
    case Cardinality::kPlus: return "+";
  }
  return "";
}

std::string_view to_string(AssignOp op) {
  switch (op) {
    case AssignOp::kAssign: return "=";
    case AssignOp::kAdd: return "+=";
    case AssignOp::kBool: return "?=";
  }
  return "=";
}

std::string_view to_string(ExprKind kind) {
  switch (kind) {
    case ExprKind::kKeyword: return "Keyword";
    case ExprKind::kAssignment: return "Assignment";
    case ExprKind::kRuleCall: return "RuleCall";
    case ExprKind::kCrossReference: return "CrossReference";
    case ExprKind::kAction: return "Action";
    case ExprKind::kGroup: return "Group";
    case ExprKind::kAlternatives: return "Alternatives";
  }
  return "?";
}

}  // namespace coevo
