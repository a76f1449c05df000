#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/grammar.hpp"

namespace coevo {

struct SourceSpan {
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;
};

enum class Severity { kError, kWarning };

struct ParseDiagnostic {
  SourceSpan span;
  Severity severity = Severity::kError;
  std::string message;
};

/// "3:14: error: missing ';' ..."
std::string format_diagnostic(const ParseDiagnostic& d);

/// A grammar is present iff no ERROR diagnostic was produced. Warnings (for
/// example duplicate rule names, which the conformance check reports) may
/// accompany a successful parse.
struct ParseResult {
  std::optional<Grammar> grammar;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return grammar.has_value(); }
};

class TokenizeError : public std::runtime_error {
 public:
  TokenizeError(SourceSpan span, const std::string& what)
      : std::runtime_error(what), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

enum class TokenKind { kWord, kString, kPunct };

struct Token {
  TokenKind kind;
  std::string text;
  SourceSpan span;
  std::size_t begin;  // byte offsets into the (LF-normalized) source
  std::size_t end;
};

/// Splits source text into tokens. Comments are skipped, CRLF is treated as
/// LF. Throws TokenizeError on an unterminated string literal.
std::vector<Token> lex(std::string_view source);

/// Token texts only; the comparison basis for rule equality.
std::vector<std::string> tokenize(std::string_view source);

ParseResult parse_grammar(std::string_view source);

/// Parses the text between `:` and `;` of a parser rule. On failure returns
/// nullopt and appends to `diagnostics`.
std::optional<Expression> parse_rule_body(std::string_view body_text,
                                          std::vector<ParseDiagnostic>& diagnostics);

std::string print_grammar(const Grammar& grammar);
/// Just the parser rules, blank-line separated; no header, no terminals.
std::string print_rules(const Grammar& grammar);
std::string print_rule(const ParserRule& rule);
/// Single-line rendering of an expression, as it would appear inside a rule.
std::string print_expression(const Expression& expr);

/// Maximum parenthesis nesting accepted by the parser.
inline constexpr int kMaxNestingDepth = 64;

}  // namespace coevo
