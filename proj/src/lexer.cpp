#include <cctype>
#include <string>

#include "coevo/parser.hpp"

namespace coevo {

namespace {

bool is_single_punct(char c) {
  switch (c) {
    case '(': case ')': case '?': case '*': case '+': case '=':
    case ';': case ':': case '|': case '[': case ']': case '{': case '}':
      return true;
    default:
      return false;
  }
}

bool is_word_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && !is_single_punct(c) && c != '\'' &&
         c != '"';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (skip_trivia()) {
      const std::size_t begin = pos_;
      const int line = line_, col = col_;
      const char c = src_[pos_];
      TokenKind kind;
      if (c == '\'' || c == '"') {
        kind = TokenKind::kString;
        lex_string(c, line, col);
      } else if (is_two_char_punct()) {
        kind = TokenKind::kPunct;
        advance();
        advance();
      } else if (is_single_punct(c) && !starts_scope_separator()) {
        kind = TokenKind::kPunct;
        advance();
      } else {
        kind = TokenKind::kWord;
        lex_word();
      }
      Token tok{kind, std::string(src_.substr(begin, pos_ - begin)), {}, begin, pos_};
      tok.span = {line, col, end_line_, end_col_};
      out.push_back(std::move(tok));
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    end_line_ = line_;
    end_col_ = col_;
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  // Returns false at end of input.
  bool skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ < src_.size()) {
          advance();
          advance();
        }
      } else {
        return true;
      }
    }
    return false;
  }

  bool is_two_char_punct() const {
    const char a = peek(), b = peek(1);
    return (a == '=' && b == '>') || (a == '+' && b == '=') || (a == '?' && b == '=');
  }

  // `::` inside qualified names such as `ecore::EString`.
  bool starts_scope_separator() const { return peek() == ':' && peek(1) == ':'; }

  void lex_string(char quote, int line, int col) {
    advance();
    while (pos_ < src_.size() && src_[pos_] != quote) {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
      advance();
    }
    if (pos_ >= src_.size()) {
      throw TokenizeError({line, col, end_line_, end_col_}, "unterminated string literal");
    }
    advance();
  }

  void lex_word() {
    while (pos_ < src_.size()) {
      if (starts_scope_separator()) {
        advance();
        advance();
      } else if (is_word_char(src_[pos_]) && !(src_[pos_] == '/' && (peek(1) == '/' || peek(1) == '*'))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int end_line_ = 1, end_col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

std::vector<std::string> tokenize(std::string_view source) {
  std::vector<std::string> out;
  for (auto& tok : lex(source)) out.push_back(std::move(tok.text));
  return out;
}

}  // namespace coevo
