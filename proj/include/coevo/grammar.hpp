#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coevo {

enum class Cardinality { kOne, kOptional, kStar, kPlus };
enum class AssignOp { kAssign, kAdd, kBool };

enum class ExprKind {
  kKeyword,
  kAssignment,
  kRuleCall,
  kCrossReference,
  kAction,
  kGroup,
  kAlternatives,
};

/// One node of a parser-rule body.
///
/// The meaning of `text` depends on `kind`:
///   Keyword        - the literal as written, quotes included (`'{'`, `","`)
///   Assignment     - the feature name; `children[0]` is the assigned terminal
///   RuleCall       - the called rule or terminal name
///   CrossReference - the referenced type (may be empty); `terminal` holds the
///                    token rule after `|` (may be empty when omitted)
///   Action         - the type inside `{...}`
///   Group, Alternatives - unused; `children` holds elements or branches
struct Expression {
  ExprKind kind = ExprKind::kGroup;
  std::string text;
  std::string terminal;
  AssignOp op = AssignOp::kAssign;
  Cardinality cardinality = Cardinality::kOne;
  bool predicated = false;
  std::vector<Expression> children;

  static Expression keyword(std::string literal);
  static Expression rule_call(std::string name);
  static Expression cross_reference(std::string type_name, std::string terminal_name);
  static Expression action(std::string type_name);
  static Expression assignment(std::string feature, AssignOp op, Expression terminal);
  static Expression group(std::vector<Expression> elements,
                          Cardinality card = Cardinality::kOne);
  static Expression alternatives(std::vector<Expression> branches,
                                 Cardinality card = Cardinality::kOne);

  bool is(ExprKind k) const { return kind == k; }
  bool is_composite() const {
    return kind == ExprKind::kGroup || kind == ExprKind::kAlternatives;
  }
  /// Keyword text without its surrounding quotes.
  std::string_view keyword_value() const;

  bool operator==(const Expression&) const = default;
};

struct TerminalDecl {
  std::string name;
  /// Everything between the `terminal` keyword and the closing `;`.
  std::string body_text;

  bool operator==(const TerminalDecl&) const = default;
};

struct ParserRule {
  std::string name;
  std::optional<std::string> returns_type;
  Expression body;

  bool operator==(const ParserRule&) const = default;
};

struct Grammar {
  std::string name;
  std::string header_text;
  std::vector<TerminalDecl> terminals;
  std::vector<ParserRule> rules;

  bool operator==(const Grammar&) const = default;
};

/// Child-index path from a rule body root to a node.
using NodePath = std::vector<std::size_t>;

const ParserRule* find_rule(const Grammar& grammar, std::string_view name);
ParserRule* find_rule(Grammar& grammar, std::string_view name);

struct AssignmentRef {
  NodePath path;
  const Expression* node;
};

/// Every Assignment in the rule body, in pre-order.
std::vector<AssignmentRef> assignments_of(const ParserRule& rule);

/// Resolves a path produced by `assignments_of` (or any child-index walk).
const Expression* node_at(const Expression& root, const NodePath& path);
Expression* node_at(Expression& root, const NodePath& path);

/// Visits every node in pre-order together with its path.
template <typename Fn>
void walk(const Expression& root, Fn&& fn, NodePath& path) {
  fn(root, static_cast<const NodePath&>(path));
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    path.push_back(i);
    walk(root.children[i], fn, path);
    path.pop_back();
  }
}

template <typename Fn>
void walk(const Expression& root, Fn&& fn) {
  NodePath path;
  walk(root, fn, path);
}

/// Rewrites a body into the canonical shape the parser produces: no empty
/// groups, no single-branch alternatives, no redundant card-ONE parentheses
/// around a single element. Rewrites in the transform engine go through this
/// so that printed output re-parses to the same value.
Expression normalize(Expression expr);

/// Model invariant violations; empty when the grammar is well formed.
std::vector<std::string> validate(const Grammar& grammar);

std::string_view to_string(Cardinality c);
std::string_view to_string(AssignOp op);
std::string_view to_string(ExprKind kind);

}  // namespace coevo
