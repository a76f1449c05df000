#include <algorithm>
#include <set>
#include <sstream>

#include "coevo/parser.hpp"

namespace coevo {

std::string format_diagnostic(const ParseDiagnostic& d) {
  std::ostringstream os;
  os << d.span.start_line << ":" << d.span.start_col << ": "
     << (d.severity == Severity::kError ? "error" : "warning") << ": " << d.message;
  return os.str();
}

namespace {

// Thrown to abandon the current rule; the parser resynchronizes at the next `;`.
struct Recover {};

std::string strip_carriage_returns(std::string_view src) {
  std::string out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == '\r' && i + 1 < src.size() && src[i + 1] == '\n') continue;
    out.push_back(src[i]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Expression parenthesize(Expression inner, Cardinality card) {
  if (inner.is_composite() && inner.cardinality == Cardinality::kOne && !inner.predicated) {
    inner.cardinality = card;
    return inner;
  }
  if (card == Cardinality::kOne) return inner;
  return Expression::group({std::move(inner)}, card);
}

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> tokens)
      : src_(src), toks_(std::move(tokens)) {}

  Grammar parse_file() {
    Grammar g;
    parse_header(g);
    while (!at_end()) {
      const std::size_t start = pos_;
      try {
        parse_declaration(g);
      } catch (const Recover&) {
        synchronize(start);
      }
    }
    report_duplicates(g);
    return g;
  }

  std::optional<Expression> parse_body_only() {
    try {
      Expression body = parse_alternatives(0);
      if (!at_end()) {
        error(cur(), "unexpected '" + cur().text + "' after rule body");
        return std::nullopt;
      }
      check_braces(body, "rule body");
      return body;
    } catch (const Recover&) {
      return std::nullopt;
    }
  }

  std::vector<ParseDiagnostic>& diagnostics() { return diags_; }

  bool has_errors() const {
    return std::any_of(diags_.begin(), diags_.end(),
                       [](const auto& d) { return d.severity == Severity::kError; });
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& cur() const { return toks_[pos_]; }
  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }
  bool is_punct(const Token* t, std::string_view text) const {
    return t != nullptr && t->kind == TokenKind::kPunct && t->text == text;
  }
  bool is_word(const Token* t, std::string_view text) const {
    return t != nullptr && t->kind == TokenKind::kWord && t->text == text;
  }
  bool at_punct(std::string_view text) const { return is_punct(peek(), text); }

  SourceSpan end_span() const {
    if (toks_.empty()) return {1, 1, 1, 1};
    SourceSpan s = toks_.back().span;
    s.start_line = s.end_line;
    s.start_col = s.end_col;
    return s;
  }

  void error(const Token& tok, std::string message) {
    diags_.push_back({tok.span, Severity::kError, std::move(message)});
  }

  [[noreturn]] void fail(std::string message) {
    if (at_end()) {
      diags_.push_back({end_span(), Severity::kError, std::move(message)});
    } else {
      error(cur(), std::move(message));
    }
    throw Recover{};
  }

  // A declaration starts with `Name :`, `Name returns`, `terminal` or `enum`.
  bool at_declaration_start() const {
    const Token* t = peek();
    if (t == nullptr || t->kind != TokenKind::kWord) return false;
    if (t->text == "terminal" || t->text == "enum") return true;
    const Token* n = peek(1);
    return is_punct(n, ":") || is_word(n, "returns");
  }

  bool at_header_keyword() const {
    const Token* t = peek();
    return t != nullptr && t->kind == TokenKind::kWord &&
           (t->text == "grammar" || t->text == "import" || t->text == "generate");
  }

  void parse_header(Grammar& g) {
    if (!at_header_keyword()) return;
    const std::size_t begin = cur().begin;
    std::size_t end = begin;
    while (at_header_keyword()) {
      const bool is_grammar = cur().text == "grammar";
      end = cur().end;
      ++pos_;
      if (is_grammar && peek() != nullptr && peek()->kind == TokenKind::kWord) g.name = cur().text;
      while (!at_end() && !at_header_keyword() && !at_declaration_start()) {
        end = cur().end;
        ++pos_;
      }
    }
    g.header_text = std::string(src_.substr(begin, end - begin));
  }

  void parse_declaration(Grammar& g) {
    if (is_word(peek(), "terminal")) {
      parse_terminal(g);
      return;
    }
    if (is_word(peek(), "enum")) ++pos_;
    if (!at_declaration_start()) {
      const Token& t = cur();
      const std::size_t line_begin = src_.rfind('\n', t.begin) == std::string_view::npos
                                         ? 0
                                         : src_.rfind('\n', t.begin) + 1;
      const std::size_t line_end = std::min(src_.find('\n', t.begin), src_.size());
      fail("unknown top-level construct: " +
           std::string(trim(src_.substr(line_begin, line_end - line_begin))));
    }
    ParserRule rule;
    rule.name = cur().text;
    ++pos_;
    if (is_word(peek(), "returns")) {
      ++pos_;
      if (peek() == nullptr || peek()->kind != TokenKind::kWord) fail("expected type name after 'returns'");
      rule.returns_type = cur().text;
      ++pos_;
    }
    if (!at_punct(":")) fail("expected ':' after rule name '" + rule.name + "'");
    ++pos_;
    rule.body = parse_alternatives(0);
    if (!at_punct(";")) {
      if (at_punct(")")) fail("unbalanced parentheses: unexpected ')'");
      fail("missing ';' rule terminator after rule '" + rule.name + "'");
    }
    ++pos_;
    check_braces(rule.body, "rule '" + rule.name + "'");
    g.rules.push_back(std::move(rule));
  }

  void parse_terminal(Grammar& g) {
    const Token& kw = cur();
    ++pos_;
    TerminalDecl decl;
    std::size_t name_at = pos_;
    if (is_word(peek(), "fragment")) ++name_at;
    if (name_at >= toks_.size() || toks_[name_at].kind != TokenKind::kWord) {
      fail("expected terminal name");
    }
    decl.name = toks_[name_at].text;
    while (!at_end() && !at_punct(";")) ++pos_;
    if (at_end()) fail("missing ';' after terminal '" + decl.name + "'");
    decl.body_text = std::string(trim(src_.substr(kw.end, cur().begin - kw.end)));
    ++pos_;
    g.terminals.push_back(std::move(decl));
  }

  void synchronize(std::size_t start) {
    if (pos_ == start && !at_end()) ++pos_;
    while (!at_end()) {
      if (at_punct(";")) {
        ++pos_;
        return;
      }
      // A missing terminator leaves us at the next declaration.
      if (pos_ > start && at_declaration_start()) return;
      ++pos_;
    }
  }

  Expression parse_alternatives(int depth) {
    std::vector<Expression> branches;
    branches.push_back(parse_group(depth));
    while (at_punct("|")) {
      ++pos_;
      branches.push_back(parse_group(depth));
    }
    if (branches.size() == 1) return std::move(branches.front());
    return Expression::alternatives(std::move(branches));
  }

  bool at_group_end() const {
    return at_end() || at_punct("|") || at_punct(")") || at_punct(";") || at_declaration_start();
  }

  Expression parse_group(int depth) {
    std::vector<Expression> elements;
    while (!at_group_end()) elements.push_back(parse_element(depth));
    if (elements.empty()) {
      if (at_end()) fail("unexpected end of input: missing ';' rule terminator");
      if (at_declaration_start()) fail("missing ';' rule terminator");
      fail("empty group or alternative before '" + cur().text + "'");
    }
    if (elements.size() == 1) return std::move(elements.front());
    return Expression::group(std::move(elements));
  }

  Cardinality parse_cardinality() {
    if (at_punct("?")) { ++pos_; return Cardinality::kOptional; }
    if (at_punct("*")) { ++pos_; return Cardinality::kStar; }
    if (at_punct("+")) { ++pos_; return Cardinality::kPlus; }
    return Cardinality::kOne;
  }

  Expression parse_element(int depth) {
    bool predicated = false;
    if (at_punct("=>")) {
      predicated = true;
      ++pos_;
    }
    Expression e;
    if (at_punct("(")) {
      if (depth + 1 > kMaxNestingDepth) {
        fail("nesting depth exceeds " + std::to_string(kMaxNestingDepth));
      }
      ++pos_;
      Expression inner = parse_alternatives(depth + 1);
      if (!at_punct(")")) fail("unbalanced parentheses: expected ')'");
      ++pos_;
      e = parenthesize(std::move(inner), parse_cardinality());
    } else {
      e = parse_primary();
      e.cardinality = parse_cardinality();
    }
    if (predicated) e.predicated = true;
    return e;
  }

  Expression parse_primary() {
    if (at_end()) fail("unexpected end of input");
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::kString:
        ++pos_;
        return Expression::keyword(t.text);
      case TokenKind::kPunct:
        if (t.text == "{") return parse_action();
        if (t.text == "[") fail("cross-reference outside an assignment");
        fail("unexpected '" + t.text + "'");
      case TokenKind::kWord:
        break;
    }
    const Token* op = peek(1);
    if (is_punct(op, "=") || is_punct(op, "+=") || is_punct(op, "?=")) {
      const std::string feature = t.text;
      const AssignOp aop = op->text == "=" ? AssignOp::kAssign
                           : op->text == "+=" ? AssignOp::kAdd
                                              : AssignOp::kBool;
      pos_ += 2;
      return Expression::assignment(feature, aop, parse_assign_terminal(op->text));
    }
    ++pos_;
    return Expression::rule_call(t.text);
  }

  Expression parse_assign_terminal(const std::string& op_text) {
    const Token* t = peek();
    if (t == nullptr) fail("expected assignment terminal");
    if (t->kind == TokenKind::kString) {
      ++pos_;
      return Expression::keyword(t->text);
    }
    if (t->kind == TokenKind::kWord && !at_declaration_start()) {
      ++pos_;
      return Expression::rule_call(t->text);
    }
    if (is_punct(t, "[")) return parse_cross_reference();
    if (is_punct(t, "(")) fail("unsupported assignment terminal: parenthesized alternatives");
    fail("malformed assignment operator '" + op_text + t->text + "'");
  }

  Expression parse_cross_reference() {
    ++pos_;  // [
    std::string type_name, terminal_name;
    if (peek() != nullptr && peek()->kind == TokenKind::kWord) {
      type_name = cur().text;
      ++pos_;
    }
    if (at_punct("|")) {
      ++pos_;
      if (peek() == nullptr || peek()->kind != TokenKind::kWord) fail("expected terminal name in cross-reference");
      terminal_name = cur().text;
      ++pos_;
    }
    if (!at_punct("]")) fail("expected ']' to close cross-reference");
    ++pos_;
    return Expression::cross_reference(std::move(type_name), std::move(terminal_name));
  }

  Expression parse_action() {
    ++pos_;  // {
    if (peek() == nullptr || peek()->kind != TokenKind::kWord) fail("expected type name in action");
    std::string type_name = cur().text;
    ++pos_;
    if (!at_punct("}")) fail("unsupported action form; only '{Type}' is accepted");
    ++pos_;
    return Expression::action(std::move(type_name));
  }

  // Standalone '{' / '}' keywords must pair up in source order.
  void check_braces(const Expression& body, const std::string& where) {
    int depth = 0;
    bool bad = false;
    std::vector<const Expression*> order;
    collect_keywords(body, order);
    for (const Expression* kw : order) {
      const auto v = kw->keyword_value();
      if (v == "{") ++depth;
      if (v == "}") {
        if (--depth < 0) bad = true;
      }
    }
    if (bad || depth != 0) {
      diags_.push_back({last_span(), Severity::kError,
                        "unbalanced braces-as-keywords in " + where});
    }
  }

  static void collect_keywords(const Expression& node, std::vector<const Expression*>& out) {
    if (node.is(ExprKind::kKeyword)) out.push_back(&node);
    if (node.is(ExprKind::kAssignment)) return;
    for (const auto& c : node.children) collect_keywords(c, out);
  }

  SourceSpan last_span() const {
    if (pos_ > 0 && pos_ - 1 < toks_.size()) return toks_[pos_ - 1].span;
    return end_span();
  }

  void report_duplicates(const Grammar& g) {
    std::set<std::string> seen;
    for (const auto& r : g.rules) {
      if (!seen.insert(r.name).second) {
        diags_.push_back({{1, 1, 1, 1}, Severity::kWarning, "duplicate rule '" + r.name + "'"});
      }
    }
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic> diags_;
};

}  // namespace

ParseResult parse_grammar(std::string_view source) {
  const std::string text = strip_carriage_returns(source);
  ParseResult result;
  std::vector<Token> tokens;
  try {
    tokens = lex(text);
  } catch (const TokenizeError& e) {
    result.diagnostics.push_back({e.span(), Severity::kError, e.what()});
    return result;
  }
  Parser parser(text, std::move(tokens));
  Grammar g = parser.parse_file();
  if (!parser.has_errors()) result.grammar = std::move(g);
  result.diagnostics = std::move(parser.diagnostics());
  return result;
}

std::optional<Expression> parse_rule_body(std::string_view body_text,
                                          std::vector<ParseDiagnostic>& diagnostics) {
  const std::string text = strip_carriage_returns(body_text);
  std::vector<Token> tokens;
  try {
    tokens = lex(text);
  } catch (const TokenizeError& e) {
    diagnostics.push_back({e.span(), Severity::kError, e.what()});
    return std::nullopt;
  }
  if (tokens.empty()) {
    diagnostics.push_back({{1, 1, 1, 1}, Severity::kError, "empty rule body"});
    return std::nullopt;
  }
  Parser parser(text, std::move(tokens));
  auto body = parser.parse_body_only();
  const bool failed = parser.has_errors();
  for (auto& d : parser.diagnostics()) diagnostics.push_back(std::move(d));
  if (failed) return std::nullopt;
  return body;
}

}  // namespace coevo
