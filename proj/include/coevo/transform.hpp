#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/grammar.hpp"

namespace coevo {

enum class ScopeKind { kGrammar, kRule, kAttribute };

struct Scope {
  ScopeKind kind = ScopeKind::kGrammar;
  std::string rule;
  std::string feature;

  static Scope grammar() { return {}; }
  static Scope of_rule(std::string rule) { return {ScopeKind::kRule, std::move(rule), {}}; }
  static Scope of_attribute(std::string rule, std::string feature) {
    return {ScopeKind::kAttribute, std::move(rule), std::move(feature)};
  }

  bool operator==(const Scope&) const = default;
};

enum class OpKind {
  kRemoveKeyword,
  kRemoveBraces,
  kRemoveOptionality,
  kAddOptionality,
  kChangeSeparator,
  kAddTerminator,
  kRenameKeyword,
  kChangeCalledRule,
  kPromoteAttribute,
  kMakeBracesOptional,
  kReplaceRule,
};

/// One scoped grammar rewrite.
///
/// Keyword parameters are quoted literals as they appear in grammar text
/// (`"','"`, `"';'"`); matching compares the unquoted values, insertion uses
/// the literal verbatim. Unused parameters stay empty.
struct TransformOp {
  OpKind kind = OpKind::kRemoveKeyword;
  Scope scope;
  std::string text;        // REMOVE_KEYWORD, ADD_TERMINATOR
  bool any_keyword = false;  // REMOVE_KEYWORD(ANY)
  std::string from;        // CHANGE_SEPARATOR, RENAME_KEYWORD, CHANGE_CALLED_RULE
  std::optional<std::string> to;  // nullopt only for CHANGE_SEPARATOR(..., NONE)
  std::string body;        // REPLACE_RULE
  std::optional<std::string> returns_type;  // REPLACE_RULE; "" drops the clause

  bool operator==(const TransformOp&) const = default;
};

struct TransformationConfig {
  std::vector<TransformOp> entries;
  std::string provenance;
  bool identity = false;
};

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical execution phase, 1 (REPLACE_RULE) to 7 (CHANGE_CALLED_RULE).
int phase_of(OpKind kind);

std::string_view to_string(OpKind kind);
std::optional<OpKind> op_kind_from_string(std::string_view name);
std::string_view to_string(ScopeKind kind);

/// One-line human-readable rendering, e.g.
/// `CHANGE_SEPARATOR "," -> NONE @ Mission.ownedComment`.
std::string describe(const TransformOp& op);

/// Throws TransformError when the op's parameters are inconsistent with its
/// kind (missing literal, REPLACE_RULE outside RULE scope, ...).
void check_op(const TransformOp& op);

struct SingleResult {
  Grammar grammar;
  int matched = 0;
  std::vector<std::string> affected_rules;
};

/// Applies one op. Scopes that name absent rules or features match nothing.
SingleResult apply_single(const TransformOp& op, const Grammar& grammar);

struct EntryReport {
  std::size_t index;  // position in the config's entry list
  std::string op;     // describe()
  int matched = 0;
  std::vector<std::string> affected_rules;
  bool no_match = false;
};

struct ApplyReport {
  /// In execution order.
  std::vector<EntryReport> entries;

  std::vector<std::string> warnings() const;
};

struct ApplyResult {
  Grammar grammar;
  ApplyReport report;
};

/// Entries run bucketed by phase_of(), listed order within a phase.
ApplyResult apply_config(const TransformationConfig& config, const Grammar& grammar);

/// Execution order used by apply_config: indices into `entries`.
std::vector<std::size_t> execution_order(const std::vector<TransformOp>& entries);

std::string config_to_json(const TransformationConfig& config);
/// Throws TransformError on malformed documents or unknown kinds.
TransformationConfig config_from_json(std::string_view text);

}  // namespace coevo
