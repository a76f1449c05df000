#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/grammar.hpp"
#include "coevo/parser.hpp"

namespace coevo {

enum class PromptId { kPrompt1, kPrompt2, kFollowUp };

struct PromptTemplate {
  PromptId id;
  std::string text;  // placeholders {G1}, {G1_PRIME}, {G2}, {ISSUES}
};

inline constexpr std::string_view kPrompt1Sentence =
    "The attachment contains two Xtext grammars for the same language: the grammar generated from the metamodel "
    "and the target grammar. Please identify the adaptations required to transform the generated grammar into the "
    "target grammar.";
inline constexpr std::string_view kPrompt2Sentence =
    "Now, I'm sending you the grammar generated from the evolved metamodel. Please adapt it using the adaptations "
    "you learned previously and output the adapted grammar to me.";
inline constexpr std::string_view kFollowUpSentence =
    "The adapted grammar has the following issues: {ISSUES}. Please fix only these issues and output the full "
    "corrected grammar.";

const PromptTemplate& prompt_template(PromptId id);

/// Substitutes `{NAME}` placeholders; unknown placeholders stay as written.
std::string render_prompt(PromptId id, const std::map<std::string, std::string>& values);

enum class Role { kUser, kModel };

struct Turn {
  Role role;
  std::string text;
};

enum class Outcome { kPending, kAccepted, kExhausted, kAborted };

std::string_view to_string(Outcome o);
std::string_view to_string(Role r);

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Produces the next model turn for a transcript ending in a user turn.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const std::vector<Turn>& transcript) = 0;
};

/// Scripted replies; the reply index is the number of model turns so far, so
/// the backend keeps no state between calls and can be shared by sessions.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}

  /// A JSON array of strings. Throws BackendError otherwise.
  static MockBackend from_json(std::string_view text);

  std::string complete(const std::vector<Turn>& transcript) override;

 private:
  std::vector<std::string> replies_;
};

struct HttpBackendConfig {
  std::string url;  // full endpoint, e.g. https://host/v1/chat/completions
  std::string model = "default";
  std::string api_key_env = "LLM_API_KEY";
  double temperature = 0.0;
  int timeout_seconds = 300;
};

/// Chat-completion style endpoint: POSTs {model, messages, temperature} and
/// reads choices[0].message.content. The credential comes from the
/// environment variable named in the config and is sent as a bearer token.
class HttpBackend : public Backend {
 public:
  /// Throws BackendError when the URL is malformed or the variable is unset.
  explicit HttpBackend(HttpBackendConfig config);

  std::string complete(const std::vector<Turn>& transcript) override;

 private:
  HttpBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
};

struct ReplyGrammar {
  std::optional<Grammar> grammar;
  std::string text;  // the region handed to the parser
  std::vector<ParseDiagnostic> diagnostics;
};

/// Largest fenced block, else the text from the first `grammar ` line, else
/// the whole reply if it parses to at least one rule. Otherwise a single
/// NO_GRAMMAR_FOUND diagnostic.
ReplyGrammar extract_grammar_from_reply(std::string_view reply);

struct AdaptationOptions {
  std::string dsl_name;
  std::set<std::string> known_terminals;
  int max_follow_ups = 3;
  /// Rough token estimate (characters / 4) above which the session is
  /// flagged as at risk of truncation.
  std::size_t token_budget = 100000;
};

struct AdaptationSession {
  std::string dsl_name;
  std::vector<Turn> turns;
  int follow_ups_used = 0;
  Outcome outcome = Outcome::kPending;
  std::optional<Grammar> extracted_grammar;
  std::string extracted_text;  // last extracted region, even if invalid
  bool truncation_risk = false;
  std::string error;  // set when aborted
  std::vector<std::string> last_issues;
};

/// Two-prompt protocol with validation-driven follow-ups.
AdaptationSession run_adaptation(const Grammar& g1, const Grammar& g1prime, const Grammar& g2, Backend& backend,
                                 const AdaptationOptions& options);

/// Parse diagnostics and conformance findings for a reply, empty when valid.
std::vector<std::string> validation_issues(const ReplyGrammar& reply, const std::set<std::string>& known_terminals);

std::string transcript_to_json(const AdaptationSession& session);

}  // namespace coevo
