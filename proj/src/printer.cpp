#include <string>
#include <vector>

#include "coevo/parser.hpp"

namespace coevo {

namespace {

// Where an expression sits decides whether a card-ONE composite needs parens.
enum class Position { kRoot, kBranch, kElement };

constexpr std::size_t kInlineWidth = 80;

bool needs_parens(const Expression& e, Position pos) {
  if (!e.is_composite()) return false;
  if (e.cardinality != Cardinality::kOne || e.predicated) return true;
  if (e.is(ExprKind::kGroup)) return pos == Position::kElement || e.children.size() == 1;
  return pos != Position::kRoot;
}

std::string prefix(const Expression& e) { return e.predicated ? "=> " : ""; }

std::string inline_text(const Expression& e, Position pos) {
  std::string out;
  const bool parens = needs_parens(e, pos);
  if (e.predicated) out += "=> ";
  if (parens) out += "(";
  switch (e.kind) {
    case ExprKind::kKeyword:
    case ExprKind::kRuleCall:
      out += e.text;
      break;
    case ExprKind::kCrossReference:
      out += "[" + e.text;
      if (!e.terminal.empty()) out += "|" + e.terminal;
      out += "]";
      break;
    case ExprKind::kAction:
      out += "{" + e.text + "}";
      break;
    case ExprKind::kAssignment:
      out += e.text;
      out += to_string(e.op);
      out += inline_text(e.children.front(), Position::kElement);
      break;
    case ExprKind::kGroup:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i > 0) out += " ";
        out += inline_text(e.children[i], Position::kElement);
      }
      break;
    case ExprKind::kAlternatives:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i > 0) out += " | ";
        out += inline_text(e.children[i], Position::kBranch);
      }
      break;
  }
  if (parens) out += ")";
  out += to_string(e.cardinality);
  return out;
}

bool is_block(const Expression& e, Position pos);

bool group_is_block(const Expression& e) {
  std::size_t composite = 0;
  for (const auto& c : e.children) {
    if (c.is_composite()) ++composite;
    if (is_block(c, Position::kElement)) return true;
  }
  return composite >= 2;
}

// A block spans several lines.
bool is_block(const Expression& e, Position pos) {
  if (e.is(ExprKind::kGroup)) return group_is_block(e);
  if (e.is(ExprKind::kAlternatives)) {
    for (const auto& b : e.children) {
      if (is_block(b, Position::kBranch)) return true;
    }
    return inline_text(e, pos).size() > kInlineWidth;
  }
  return false;
}

using Lines = std::vector<std::string>;

void layout(const Expression& e, Position pos, std::size_t indent, Lines& out);

void append_to_last(Lines& lines, const std::string& s) { lines.back() += s; }

// One element per line, except that a keyword stays on the line of the
// single-line element it introduces (`'shortName' shortName=Identifier`).
void layout_sequence(const std::vector<Expression>& items, std::size_t from, std::size_t to,
                     std::size_t indent, Lines& out) {
  for (std::size_t i = from; i < to; ++i) {
    const auto& item = items[i];
    if (item.is(ExprKind::kKeyword) && i + 1 < to && !is_block(items[i + 1], Position::kElement) &&
        !items[i + 1].is(ExprKind::kKeyword) && !items[i + 1].is_composite()) {
      out.push_back(std::string(indent, ' ') + inline_text(item, Position::kElement) + " " +
                    inline_text(items[i + 1], Position::kElement));
      ++i;
      continue;
    }
    layout(item, Position::kElement, indent, out);
  }
}

void layout_group_block(const Expression& e, Position pos, std::size_t indent, Lines& out) {
  const std::string pad(indent, ' ');
  const bool parens = needs_parens(e, pos);
  if (!parens) {
    layout_sequence(e.children, 0, e.children.size(), indent, out);
    return;
  }
  const auto& first = e.children.front();
  const auto& last = e.children.back();
  const bool head_inline = !is_block(first, Position::kElement);
  std::size_t i = 0;
  if (head_inline) {
    out.push_back(pad + prefix(e) + "(" + inline_text(first, Position::kElement));
    i = 1;
  } else {
    out.push_back(pad + prefix(e) + "(");
  }
  // `('{' ... '}')?` closes at the opening indentation, as in hand-written grammars.
  const bool bracket_pair = head_inline && e.children.size() >= 2 &&
                            first.is(ExprKind::kKeyword) && last.is(ExprKind::kKeyword) &&
                            last.cardinality == Cardinality::kOne && !last.predicated;
  const std::size_t stop = bracket_pair ? e.children.size() - 1 : e.children.size();
  layout_sequence(e.children, i, stop, indent + 4, out);
  const std::string close = ")" + std::string(to_string(e.cardinality));
  if (bracket_pair) {
    out.push_back(pad + last.text + close);
  } else {
    append_to_last(out, close);
  }
}

void layout_alternatives_block(const Expression& e, Position pos, std::size_t indent, Lines& out) {
  const std::string pad(indent, ' ');
  const bool parens = needs_parens(e, pos);
  const std::size_t branch_indent = parens ? indent + 4 : indent;
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    const auto& b = e.children[i];
    const bool last = i + 1 == e.children.size();
    if (i == 0 && parens) {
      if (is_block(b, Position::kBranch)) {
        out.push_back(pad + prefix(e) + "(");
        layout(b, Position::kBranch, branch_indent, out);
      } else {
        out.push_back(pad + prefix(e) + "(" + inline_text(b, Position::kBranch));
      }
    } else {
      layout(b, Position::kBranch, branch_indent, out);
    }
    if (!last) append_to_last(out, " |");
  }
  if (parens) append_to_last(out, ")" + std::string(to_string(e.cardinality)));
}

void layout(const Expression& e, Position pos, std::size_t indent, Lines& out) {
  if (is_block(e, pos)) {
    if (e.is(ExprKind::kGroup)) {
      layout_group_block(e, pos, indent, out);
    } else {
      layout_alternatives_block(e, pos, indent, out);
    }
    return;
  }
  out.push_back(std::string(indent, ' ') + inline_text(e, pos));
}

}  // namespace

std::string print_expression(const Expression& expr) {
  return inline_text(expr, Position::kElement);
}

std::string print_rule(const ParserRule& rule) {
  std::string out = rule.name;
  if (rule.returns_type) out += " returns " + *rule.returns_type;
  out += ":\n";
  Lines lines;
  const Expression& body = rule.body;
  if (body.is(ExprKind::kGroup) && !needs_parens(body, Position::kRoot)) {
    layout_sequence(body.children, 0, body.children.size(), 4, lines);
  } else {
    layout(body, Position::kRoot, 4, lines);
  }
  if (lines.empty()) lines.emplace_back("   ");
  append_to_last(lines, ";");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += lines[i];
    if (i + 1 < lines.size()) out += "\n";
  }
  return out;
}

std::string print_rules(const Grammar& grammar) {
  std::string out;
  for (std::size_t i = 0; i < grammar.rules.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += print_rule(grammar.rules[i]);
  }
  if (!out.empty()) out += "\n";
  return out;
}

std::string print_grammar(const Grammar& grammar) {
  std::string out;
  if (!grammar.header_text.empty()) out += grammar.header_text + "\n\n";
  out += print_rules(grammar);
  if (!grammar.terminals.empty()) {
    if (!grammar.rules.empty()) out += "\n";
    for (const auto& t : grammar.terminals) out += "terminal " + t.body_text + ";\n";
  }
  return out;
}

}  // namespace coevo
