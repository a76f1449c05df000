#include "coevo/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "coevo/conformance.hpp"
#include "coevo/evaluate.hpp"
#include "coevo/extract.hpp"
#include "coevo/llm.hpp"
#include "coevo/parser.hpp"
#include "coevo/transform.hpp"

namespace coevo {

namespace {

namespace fs = std::filesystem;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err, bool color) : out_(out), err_(err), color_(color) {}

  std::string read_file(const std::string& path) const {
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path)) throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  void write_file(const fs::path& path, const std::string& text) const {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw InputError("cannot write " + path.string());
    o << text;
    if (!o) throw InputError("cannot write " + path.string());
  }

  Grammar load_grammar(const std::string& path) const {
    auto r = parse_grammar(read_file(path));
    for (const auto& d : r.diagnostics) {
      if (r.ok() && d.severity == Severity::kWarning) err_ << path << ":" << format_diagnostic(d) << "\n";
    }
    if (!r.ok()) {
      for (const auto& d : r.diagnostics) err_ << path << ":" << format_diagnostic(d) << "\n";
      throw InputError(path + ": grammar does not parse");
    }
    return *r.grammar;
  }

  std::set<std::string> terminals(const std::string& path) const {
    return path.empty() ? default_known_terminals() : parse_terminals_file(read_file(path));
  }

  std::string paint(const std::string& text, const char* code) const {
    return color_ ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
  }

  int extract(const std::string& g1_path, const std::string& g1prime_path, const std::string& config_path) const {
    const Grammar g1 = load_grammar(g1_path);
    const Grammar g1prime = load_grammar(g1prime_path);
    ExtractionResult r = extract_config(g1, g1prime);
    r.config.provenance = "extracted from " + fs::path(g1_path).filename().string() + " -> " +
                          fs::path(g1prime_path).filename().string();
    write_file(config_path, config_to_json(r.config));
    out_ << summarize(r);
    return kExitOk;
  }

  int apply(const std::string& config_path, const std::string& g2_path, const std::string& output) const {
    TransformationConfig config;
    try {
      config = config_from_json(read_file(config_path));
    } catch (const TransformError& e) {
      throw InputError(config_path + ": " + e.what());
    }
    const Grammar g2 = load_grammar(g2_path);
    ApplyResult r;
    try {
      r = apply_config(config, g2);
    } catch (const TransformError& e) {
      throw InputError(config_path + ": " + e.what());
    }
    for (const auto& w : r.report.warnings()) err_ << w << "\n";
    write_file(output, print_grammar(r.grammar));
    return kExitOk;
  }

  struct AdaptArgs {
    std::string g1, g1prime, g2, target, backend, out_dir, terminals, dsl, model = "default",
        api_key_env = "LLM_API_KEY";
    std::size_t token_budget = 100000;
  };

  int adapt(const AdaptArgs& a) const {
    const Grammar g1 = load_grammar(a.g1);
    const Grammar g1prime = load_grammar(a.g1prime);
    const Grammar g2 = load_grammar(a.g2);
    std::optional<Grammar> target;
    if (!a.target.empty()) target = load_grammar(a.target);

    AdaptationOptions options;
    options.dsl_name = a.dsl.empty() ? fs::path(a.g2).stem().string() : a.dsl;
    options.known_terminals = terminals(a.terminals);
    options.token_budget = a.token_budget;

    std::unique_ptr<Backend> backend;
    const auto colon = a.backend.find(':');
    const std::string kind = a.backend.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : a.backend.substr(colon + 1);
    try {
      if (kind == "mock") {
        backend = std::make_unique<MockBackend>(MockBackend::from_json(read_file(arg)));
      } else if (kind == "http" || kind == "https") {
        HttpBackendConfig c;
        // Both `http:URL` and a bare URL are accepted.
        c.url = kind == "https" || arg.rfind("//", 0) == 0 ? a.backend : arg;
        c.model = a.model;
        c.api_key_env = a.api_key_env;
        backend = std::make_unique<HttpBackend>(c);
      } else {
        throw InputError("unknown backend '" + a.backend + "' (expected mock:FILE or http:URL)");
      }
    } catch (const BackendError& e) {
      if (kind == "mock") throw InputError(arg + ": " + e.what());
      err_ << "backend error: " << e.what() << "\n";
      return kExitBackendError;
    }

    const AdaptationSession s = run_adaptation(g1, g1prime, g2, *backend, options);
    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    write_file(dir / "transcript.json", transcript_to_json(s));
    write_file(dir / "g2prime.xtext", s.extracted_grammar ? print_grammar(*s.extracted_grammar) : s.extracted_text);
    if (target && s.extracted_grammar) {
      EvaluationReport report = evaluate(g2, *s.extracted_grammar, *target);
      report.conformance = check_conformance(*s.extracted_grammar, options.known_terminals);
      write_file(dir / "report.json", report_to_json(report));
      out_ << report_to_text(report) << "\n";
    }
    out_ << "outcome " << to_string(s.outcome) << ", follow-ups used " << s.follow_ups_used << "\n";
    if (s.truncation_risk) out_ << "TRUNCATION_RISK: prompts exceed the token budget\n";
    switch (s.outcome) {
      case Outcome::kAccepted:
        return kExitOk;
      case Outcome::kExhausted:
        for (const auto& i : s.last_issues) err_ << "unresolved: " << i << "\n";
        return kExitExhausted;
      default:
        err_ << "backend error: " << s.error << "\n";
        return kExitBackendError;
    }
  }

  int evaluate_cmd(const std::string& g2_path, const std::string& candidate_path, const std::string& target_path,
                   const std::string& terminals_path, const std::string& out_dir) const {
    const Grammar g2 = load_grammar(g2_path);
    const Grammar candidate = load_grammar(candidate_path);
    const Grammar target = load_grammar(target_path);
    EvaluationReport report = evaluate(g2, candidate, target);
    report.conformance = check_conformance(candidate, terminals(terminals_path));
    out_ << report_to_text(report);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "report.json", report_to_json(report));
    }
    return kExitOk;
  }

  int check(const std::string& path, const std::string& terminals_path) const {
    const Grammar g = load_grammar(path);
    const auto findings = check_conformance(g, terminals(terminals_path));
    if (findings.empty()) {
      out_ << paint("PASS", "32") << "\n";
      return kExitOk;
    }
    for (const auto& f : findings) out_ << paint(format_finding(f), "31") << "\n";
    return kExitFindings;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  bool color_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Grammar co-evolution: extract, apply, adapt, evaluate and check Xtext grammars", "coevo"};
  app.require_subcommand(1);

  std::string g1, g1prime, g2, config, output, candidate, target, terminals_path, out_dir, check_path;
  Runner::AdaptArgs adapt;

  auto* extract = app.add_subcommand("extract", "Learn a transformation config from G1 and G1'");
  extract->add_option("--g1", g1, "Generated grammar")->required();
  extract->add_option("--g1-prime", g1prime, "Adapted grammar")->required();
  extract->add_option("--config", config, "Config JSON to write")->required();

  auto* apply = app.add_subcommand("apply", "Apply a config to a grammar");
  apply->add_option("--config", config, "Config JSON")->required();
  apply->add_option("--g2", g2, "Grammar to adapt")->required();
  apply->add_option("--output", output, "Adapted grammar to write")->required();

  auto* adapt_cmd = app.add_subcommand("adapt", "Adapt G2 through a language model session");
  adapt_cmd->add_option("--g1", adapt.g1, "Generated grammar")->required();
  adapt_cmd->add_option("--g1-prime", adapt.g1prime, "Adapted grammar")->required();
  adapt_cmd->add_option("--g2", adapt.g2, "Grammar generated from the evolved metamodel")->required();
  adapt_cmd->add_option("--target", adapt.target, "Expected G2' for the evaluation report");
  adapt_cmd->add_option("--backend", adapt.backend, "mock:FILE or http:URL")->required();
  adapt_cmd->add_option("--out", adapt.out_dir, "Output directory")->required();
  adapt_cmd->add_option("--terminals", adapt.terminals, "Known terminals, one per line");
  adapt_cmd->add_option("--dsl", adapt.dsl, "Session name (default: G2 file stem)");
  adapt_cmd->add_option("--model", adapt.model, "Model name sent to the HTTP backend");
  adapt_cmd->add_option("--api-key-env", adapt.api_key_env, "Environment variable holding the credential");
  adapt_cmd->add_option("--token-budget", adapt.token_budget, "Estimated prompt tokens before TRUNCATION_RISK");

  auto* evaluate = app.add_subcommand("evaluate", "Score a candidate G2' against the target");
  evaluate->add_option("--g2", g2, "Grammar before adaptation")->required();
  evaluate->add_option("--candidate", candidate, "Adapted grammar to score")->required();
  evaluate->add_option("--target", target, "Expected grammar")->required();
  evaluate->add_option("--terminals", terminals_path, "Known terminals, one per line");
  evaluate->add_option("--out", out_dir, "Directory for report.json");

  auto* check = app.add_subcommand("check", "Check a grammar for resolvability problems");
  check->add_option("file", check_path, "Grammar file")->required();
  check->add_option("--terminals", terminals_path, "Known terminals, one per line");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  Runner runner(out, err, color);
  try {
    if (*extract) return runner.extract(g1, g1prime, config);
    if (*apply) return runner.apply(config, g2, output);
    if (*adapt_cmd) return runner.adapt(adapt);
    if (*evaluate) return runner.evaluate_cmd(g2, candidate, target, terminals_path, out_dir);
    if (*check) return runner.check(check_path, terminals_path);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace coevo
