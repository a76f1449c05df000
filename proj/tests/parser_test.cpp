#include <doctest.h>

#include <filesystem>

#include "coevo/parser.hpp"
#include "test_support.hpp"

using namespace coevo;
using coevo::testing::load;
using coevo::testing::parse_or_throw;

namespace {

using Tokens = std::vector<std::string>;

bool has_error_containing(const ParseResult& r, std::string_view needle) {
  for (const auto& d : r.diagnostics) {
    if (d.severity == Severity::kError && d.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("tokenize splits punctuation and keeps literals whole") {
  CHECK(tokenize("'shortName' shortName=Identifier") ==
        Tokens{"'shortName'", "shortName", "=", "Identifier"});
  CHECK(tokenize("( \",\" ownedComment+=Comment)*") ==
        Tokens{"(", "\",\"", "ownedComment", "+=", "Comment", ")", "*"});
  CHECK(tokenize("=> compass_pt=COMPASS_PT") == Tokens{"=>", "compass_pt", "=", "COMPASS_PT"});
  CHECK(tokenize("unique?='unique'?") == Tokens{"unique", "?=", "'unique'", "?"});
  CHECK(tokenize("type=[genmodel::GenBase|XQualifiedName]") ==
        Tokens{"type", "=", "[", "genmodel::GenBase", "|", "XQualifiedName", "]"});
  CHECK(tokenize("{Port} ':' // trailing\n/* block */ x") == Tokens{"{", "Port", "}", "':'", "x"});
  CHECK(tokenize("") == Tokens{});
}

TEST_CASE("tokenize rejects an unterminated literal") {
  CHECK_THROWS_AS(tokenize("name='abc"), TokenizeError);
}

TEST_CASE("Mission rule of the generated grammar") {
  const Grammar g = load("corpus/mission_generated.xtext");
  REQUIRE(g.rules.size() == 1);
  const ParserRule& r = g.rules[0];
  CHECK(r.name == "Mission");
  CHECK(r.returns_type == "Mission");
  REQUIRE(r.body.is(ExprKind::kGroup));
  CHECK(r.body.children[0].text == "'Mission'");
  CHECK(r.body.children[1].text == "'{'");
  CHECK(r.body.children.back().text == "'}'");
  int optional_groups = 0;
  for (const auto& c : r.body.children) {
    if (c.is(ExprKind::kGroup) && c.cardinality == Cardinality::kOptional) ++optional_groups;
  }
  CHECK(optional_groups == 4);
}

TEST_CASE("predicated first branch of the DOT Port rule") {
  const Grammar g = load("corpus/port_target.xtext");
  const ParserRule* port = find_rule(g, "Port");
  REQUIRE(port != nullptr);
  const Expression& alts = port->body.children.back();
  REQUIRE(alts.is(ExprKind::kAlternatives));
  REQUIRE(alts.children.size() == 3);
  CHECK(alts.children[0].predicated);
  CHECK(alts.children[0].is(ExprKind::kAssignment));
  CHECK_FALSE(alts.children[1].predicated);
  CHECK(port->body.children[0].is(ExprKind::kAction));
}

TEST_CASE("empty source yields an empty grammar") {
  auto r = parse_grammar("");
  REQUIRE(r.ok());
  CHECK(r.grammar->rules.empty());
  CHECK(r.grammar->header_text.empty());
}

TEST_CASE("header, terminals and comments") {
  const char* src =
      "grammar org.example.Mission with org.eclipse.xtext.common.Terminals\r\n"
      "import \"http://www.eclipse.org/emf/2002/Ecore\" as ecore\r\n"
      "generate mission \"http://example.org/mission\"\r\n"
      "\r\n"
      "// entry rule\r\n"
      "Model returns Model: missions+=Mission*;\r\n"
      "Mission: 'mission' name=ID;\r\n"
      "terminal UUID returns ecore::EString: ('a'..'f'|'0'..'9')+ ';'?;\r\n"
      "terminal fragment HEX: 'x';\r\n";
  const Grammar g = parse_or_throw(src);
  CHECK(g.name == "org.example.Mission");
  CHECK(g.header_text.find("generate mission") != std::string::npos);
  CHECK(g.header_text.find('\r') == std::string::npos);
  REQUIRE(g.rules.size() == 2);
  REQUIRE(g.terminals.size() == 2);
  CHECK(g.terminals[0].name == "UUID");
  CHECK(g.terminals[0].body_text == "UUID returns ecore::EString: ('a'..'f'|'0'..'9')+ ';'?");
  CHECK(g.terminals[1].name == "HEX");
  CHECK(parse_or_throw(print_grammar(g)) == g);
}

TEST_CASE("printing is canonical and re-parses to the same value") {
  SUBCASE("minimal rule") {
    const Grammar g = parse_or_throw("A returns A: name=ID;");
    CHECK(print_rules(g) == "A returns A:\n    name=ID;\n");
  }
  SUBCASE("Mission target layout") {
    const Grammar g = load("corpus/mission_target.xtext");
    CHECK(print_rules(g) ==
          "Mission returns Mission:\n"
          "    'Mission' shortName=Identifier\n"
          "    ('{'\n"
          "        ('category' category=Identifier ';')?\n"
          "        ('uuid' uuid=UUID ';')?\n"
          "        ('name' name=Identifier ';')?\n"
          "        (ownedComment+=Comment (ownedComment+=Comment)*)?\n"
          "    '}')?;\n");
  }
  SUBCASE("redundant parentheses collapse") {
    const Grammar a = parse_or_throw("R: ((x=ID)) (('a' 'b'))? ((y=ID)?);");
    const Grammar b = parse_or_throw("R: x=ID ('a' 'b')? (y=ID)?;");
    CHECK(a == b);
  }
}

TEST_CASE("parse-print-parse is a fixpoint on the fixture corpus") {
  namespace fs = std::filesystem;
  int checked = 0;
  for (const auto& entry : fs::recursive_directory_iterator(coevo::testing::fixture_path(""))) {
    if (entry.path().extension() != ".xtext") continue;
    CAPTURE(entry.path().string());
    auto first = parse_grammar(coevo::testing::read_fixture(fs::relative(entry.path(), coevo::testing::fixture_path("")).string()));
    if (!first.ok()) continue;  // deliberately malformed fixtures
    const std::string printed = print_grammar(*first.grammar);
    const Grammar second = parse_or_throw(printed);
    CHECK(second == *first.grammar);
    CHECK(print_grammar(second) == printed);
    ++checked;
  }
  CHECK(checked >= 12);
}

TEST_CASE("diagnostics for malformed input") {
  SUBCASE("missing terminator") {
    auto r = parse_grammar("A: 'a' x=ID\nB: 'b';");
    CHECK_FALSE(r.ok());
    CHECK(has_error_containing(r, "missing ';'"));
    CHECK(r.diagnostics.front().span.start_line == 2);
  }
  SUBCASE("unbalanced parentheses") {
    CHECK(has_error_containing(parse_grammar("A: ('a' x=ID;"), "expected ')'"));
    CHECK(has_error_containing(parse_grammar("A: 'a' x=ID);"), "unexpected ')'"));
  }
  SUBCASE("unbalanced brace keywords") {
    CHECK(has_error_containing(parse_grammar("A: 'A' '{' x=ID;"), "unbalanced braces"));
    CHECK(has_error_containing(parse_grammar("A: 'A' '}' x=ID '{';"), "unbalanced braces"));
  }
  SUBCASE("malformed assignment operator") {
    CHECK(has_error_containing(parse_grammar("A: x==ID;"), "malformed assignment operator"));
    CHECK(has_error_containing(parse_grammar("A: x+=?ID;"), "malformed assignment operator"));
  }
  SUBCASE("unknown top-level construct names the line") {
    auto r = parse_grammar("A: x=ID;\nfoo bar baz;\n");
    CHECK(has_error_containing(r, "unknown top-level construct: foo bar baz;"));
  }
  SUBCASE("unterminated literal") {
    auto r = parse_grammar("A: 'abc;\n");
    CHECK(has_error_containing(r, "unterminated"));
  }
  SUBCASE("unsupported action form") {
    CHECK(has_error_containing(parse_grammar("A: {A.left=current} 'x';"), "unsupported action"));
  }
  SUBCASE("several errors are collected") {
    auto r = parse_grammar("A: x==ID;\nB: ('b';\nC: 'c';");
    CHECK(r.diagnostics.size() >= 2);
  }
}

TEST_CASE("every diagnostic span lies inside the input") {
  const std::vector<std::string> inputs = {
      "A: 'a' x=ID", "A: ((((", "A: x==ID;", "X", ")", "A: 'a' |;", "A: [X|ID];", "A returns : x=ID;",
  };
  for (const auto& in : inputs) {
    CAPTURE(in);
    auto r = parse_grammar(in);
    CHECK_FALSE(r.ok());
    int lines = 1;
    for (char c : in) lines += c == '\n';
    for (const auto& d : r.diagnostics) {
      CHECK(!d.message.empty());
      CHECK(d.span.start_line >= 1);
      CHECK(d.span.end_line <= lines);
      CHECK(d.span.start_col >= 1);
      CHECK(d.span.end_col <= static_cast<int>(in.size()) + 1);
      CHECK((d.span.start_line < d.span.end_line ||
             (d.span.start_line == d.span.end_line && d.span.start_col <= d.span.end_col)));
    }
  }
}

TEST_CASE("nesting deeper than the limit is a diagnostic") {
  std::string deep = "A: ";
  for (int i = 0; i < 200; ++i) deep += "(";
  deep += "x=ID";
  for (int i = 0; i < 200; ++i) deep += ")?";
  deep += ";";
  auto r = parse_grammar(deep);
  CHECK(has_error_containing(r, "nesting depth"));

  std::string ok = "A: ";
  for (int i = 0; i < kMaxNestingDepth; ++i) ok += "(";
  ok += "x=ID";
  for (int i = 0; i < kMaxNestingDepth; ++i) ok += ")?";
  ok += ";";
  CHECK(parse_grammar(ok).ok());
}

TEST_CASE("duplicate rules parse with a warning") {
  auto r = parse_grammar("A: 'a';\nA: 'b';");
  REQUIRE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].severity == Severity::kWarning);
}

TEST_CASE("rule body parsing") {
  std::vector<ParseDiagnostic> diags;
  auto body = parse_rule_body("'a' (b=ID)?", diags);
  REQUIRE(body);
  CHECK(print_expression(*body) == "('a' (b=ID)?)");
  CHECK_FALSE(parse_rule_body("'a' (", diags));
  CHECK_FALSE(diags.empty());
}

TEST_CASE("token stability: printed tokens differ iff grammars differ") {
  const std::vector<std::string> names = {
      "corpus/mission_generated.xtext", "corpus/mission_target.xtext", "corpus/port_generated.xtext",
      "corpus/port_target.xtext",       "corpus/typeparam_target.xtext", "corpus/reference_target.xtext",
  };
  for (const auto& a : names) {
    for (const auto& b : names) {
      const Grammar ga = load(a), gb = load(b);
      CHECK((tokenize(print_grammar(ga)) == tokenize(print_grammar(gb))) == (ga == gb));
    }
  }
}
