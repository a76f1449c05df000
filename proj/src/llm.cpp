#include "coevo/llm.hpp"

#include <httplib.h>

#include <cstdlib>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "coevo/conformance.hpp"

namespace coevo {

namespace {

const std::vector<PromptTemplate>& templates() {
  static const std::vector<PromptTemplate> all = {
      {PromptId::kPrompt1, std::string(kPrompt1Sentence) +
                               "\n\nGenerated grammar:\n```\n{G1}```\n\nTarget grammar:\n```\n{G1_PRIME}```\n"},
      {PromptId::kPrompt2, std::string(kPrompt2Sentence) + "\n\n```\n{G2}```\n"},
      {PromptId::kFollowUp, std::string(kFollowUpSentence)},
  };
  return all;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_fence(const std::string& line) {
  const auto b = line.find_first_not_of(" \t");
  return b != std::string::npos && line.compare(b, 3, "```") == 0;
}

ReplyGrammar parse_region(std::string text) {
  ReplyGrammar out;
  auto r = parse_grammar(text);
  out.text = std::move(text);
  out.grammar = std::move(r.grammar);
  out.diagnostics = std::move(r.diagnostics);
  return out;
}

}  // namespace

const PromptTemplate& prompt_template(PromptId id) {
  for (const auto& t : templates()) {
    if (t.id == id) return t;
  }
  return templates().front();
}

std::string render_prompt(PromptId id, const std::map<std::string, std::string>& values) {
  const std::string& text = prompt_template(id).text;
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const auto close = text.find('}', i);
      if (close != std::string::npos) {
        auto it = values.find(text.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kPending: return "PENDING";
    case Outcome::kAccepted: return "ACCEPTED";
    case Outcome::kExhausted: return "EXHAUSTED";
    case Outcome::kAborted: return "ABORTED";
  }
  return "PENDING";
}

std::string_view to_string(Role r) { return r == Role::kUser ? "user" : "model"; }

MockBackend MockBackend::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw BackendError(std::string("replay file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw BackendError("replay file must be a JSON array of strings");
  std::vector<std::string> replies;
  for (const auto& r : doc) {
    if (!r.is_string()) throw BackendError("replay file must be a JSON array of strings");
    replies.push_back(r.get<std::string>());
  }
  return MockBackend(std::move(replies));
}

std::string MockBackend::complete(const std::vector<Turn>& transcript) {
  std::size_t index = 0;
  for (const auto& t : transcript) index += t.role == Role::kModel;
  if (index >= replies_.size()) {
    throw BackendError("replay exhausted: no scripted reply #" + std::to_string(index + 1));
  }
  return replies_[index];
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, url_re)) throw BackendError("malformed endpoint URL '" + config_.url + "'");
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw BackendError("credential environment variable " + config_.api_key_env + " is not set");
  }
  api_key_ = key;
}

std::string HttpBackend::complete(const std::vector<Turn>& transcript) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& t : transcript) {
    messages.push_back({{"role", t.role == Role::kUser ? "user" : "assistant"}, {"content", t.text}});
  }
  const nlohmann::json body = {{"model", config_.model}, {"messages", messages}, {"temperature", config_.temperature}};

  httplib::Client client(scheme_host_port_);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);
  const httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw BackendError("request to " + config_.url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw BackendError("endpoint answered HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  try {
    const auto doc = nlohmann::json::parse(res->body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("unexpected response shape: ") + e.what());
  }
}

ReplyGrammar extract_grammar_from_reply(std::string_view reply) {
  const auto lines = split_lines(reply);

  std::optional<std::string> best;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_fence(lines[i])) continue;
    std::size_t j = i + 1;
    std::string block;
    while (j < lines.size() && !is_fence(lines[j])) block += lines[j++] + "\n";
    if (j == lines.size()) break;  // unclosed fence
    if (!best || block.size() > best->size()) best = block;
    i = j;
  }
  if (best) return parse_region(*best);

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].rfind("grammar ", 0) != 0) continue;
    std::string region;
    for (std::size_t j = i; j < lines.size(); ++j) region += lines[j] + "\n";
    return parse_region(region);
  }

  ReplyGrammar whole = parse_region(std::string(reply));
  if (whole.grammar && !whole.grammar->rules.empty()) return whole;

  ReplyGrammar none;
  none.diagnostics.push_back({{1, 1, 1, 1}, Severity::kError, "NO_GRAMMAR_FOUND: the reply contains no grammar"});
  return none;
}

std::vector<std::string> validation_issues(const ReplyGrammar& reply, const std::set<std::string>& known_terminals) {
  std::vector<std::string> issues;
  if (!reply.grammar) {
    for (const auto& d : reply.diagnostics) {
      if (d.severity == Severity::kError) issues.push_back("parse error at " + format_diagnostic(d));
    }
    if (issues.empty()) issues.push_back("parse error");
    return issues;
  }
  for (const auto& f : check_conformance(*reply.grammar, known_terminals)) issues.push_back(format_finding(f));
  return issues;
}

AdaptationSession run_adaptation(const Grammar& g1, const Grammar& g1prime, const Grammar& g2, Backend& backend,
                                 const AdaptationOptions& options) {
  AdaptationSession s;
  s.dsl_name = options.dsl_name;
  const std::string prompt1 =
      render_prompt(PromptId::kPrompt1, {{"G1", print_grammar(g1)}, {"G1_PRIME", print_grammar(g1prime)}});
  const std::string prompt2 = render_prompt(PromptId::kPrompt2, {{"G2", print_grammar(g2)}});
  s.truncation_risk = (prompt1.size() + prompt2.size()) / 4 > options.token_budget;

  auto ask = [&](std::string prompt) {
    s.turns.push_back({Role::kUser, std::move(prompt)});
    try {
      s.turns.push_back({Role::kModel, backend.complete(s.turns)});
      return true;
    } catch (const BackendError& e) {
      s.outcome = Outcome::kAborted;
      s.error = e.what();
      return false;
    }
  };

  if (!ask(prompt1) || !ask(prompt2)) return s;
  while (true) {
    const ReplyGrammar reply = extract_grammar_from_reply(s.turns.back().text);
    s.extracted_text = reply.text;
    if (reply.grammar) s.extracted_grammar = reply.grammar;
    s.last_issues = validation_issues(reply, options.known_terminals);
    if (s.last_issues.empty()) {
      s.outcome = Outcome::kAccepted;
      return s;
    }
    if (s.follow_ups_used >= options.max_follow_ups) {
      s.outcome = Outcome::kExhausted;
      return s;
    }
    std::string joined;
    for (const auto& i : s.last_issues) joined += (joined.empty() ? "" : "; ") + i;
    ++s.follow_ups_used;
    if (!ask(render_prompt(PromptId::kFollowUp, {{"ISSUES", joined}}))) return s;
  }
}

std::string transcript_to_json(const AdaptationSession& s) {
  nlohmann::ordered_json doc;
  doc["dsl"] = s.dsl_name;
  nlohmann::ordered_json turns = nlohmann::ordered_json::array();
  for (const auto& t : s.turns) turns.push_back({{"role", std::string(to_string(t.role))}, {"text", t.text}});
  doc["turns"] = std::move(turns);
  doc["followUpsUsed"] = s.follow_ups_used;
  doc["outcome"] = std::string(to_string(s.outcome));
  doc["truncationRisk"] = s.truncation_risk;
  if (!s.error.empty()) doc["error"] = s.error;
  return doc.dump(2) + "\n";
}

}  // namespace coevo
