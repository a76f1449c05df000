#include <json.hpp>

#include "coevo/transform.hpp"

namespace coevo {

using nlohmann::json;

namespace {

json params_of(const TransformOp& op) {
  json p = json::object();
  switch (op.kind) {
    case OpKind::kRemoveKeyword:
      if (op.any_keyword) {
        p["any"] = true;
      } else {
        p["text"] = op.text;
      }
      break;
    case OpKind::kAddTerminator:
      p["text"] = op.text;
      break;
    case OpKind::kChangeSeparator:
      p["from"] = op.from;
      p["to"] = op.to ? json(*op.to) : json(nullptr);
      break;
    case OpKind::kRenameKeyword:
    case OpKind::kChangeCalledRule:
      p["from"] = op.from;
      p["to"] = op.to.value_or("");
      break;
    case OpKind::kPromoteAttribute:
      p["anchor"] = "BEFORE_BRACES";
      break;
    case OpKind::kReplaceRule:
      p["body"] = op.body;
      if (op.returns_type) p["returns"] = *op.returns_type;
      break;
    default:
      break;
  }
  return p;
}

std::string get_string(const json& obj, const char* key, bool required) {
  if (!obj.contains(key)) {
    if (required) throw TransformError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!obj.at(key).is_string()) throw TransformError(std::string("field '") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

TransformOp op_from_json(const json& entry) {
  if (!entry.is_object()) throw TransformError("entry must be an object");
  TransformOp op;
  const std::string kind = get_string(entry, "kind", true);
  auto k = op_kind_from_string(kind);
  if (!k) throw TransformError("unknown operation kind '" + kind + "'");
  op.kind = *k;

  if (!entry.contains("scope") || !entry.at("scope").is_object()) throw TransformError("missing 'scope' object");
  const json& scope = entry.at("scope");
  const std::string skind = get_string(scope, "kind", true);
  if (skind == "GRAMMAR") {
    op.scope = Scope::grammar();
  } else if (skind == "RULE") {
    op.scope = Scope::of_rule(get_string(scope, "rule", true));
  } else if (skind == "ATTRIBUTE") {
    op.scope = Scope::of_attribute(get_string(scope, "rule", true), get_string(scope, "feature", true));
  } else {
    throw TransformError("unknown scope kind '" + skind + "'");
  }

  const json params = entry.contains("params") ? entry.at("params") : json::object();
  if (!params.is_object()) throw TransformError("'params' must be an object");
  switch (op.kind) {
    case OpKind::kRemoveKeyword:
      op.any_keyword = params.value("any", false);
      if (!op.any_keyword) op.text = get_string(params, "text", true);
      break;
    case OpKind::kAddTerminator:
      op.text = get_string(params, "text", true);
      break;
    case OpKind::kChangeSeparator:
      op.from = get_string(params, "from", true);
      if (params.contains("to") && !params.at("to").is_null()) {
        const std::string to = get_string(params, "to", true);
        if (to != "NONE") op.to = to;
      }
      break;
    case OpKind::kRenameKeyword:
    case OpKind::kChangeCalledRule:
      op.from = get_string(params, "from", true);
      op.to = get_string(params, "to", true);
      break;
    case OpKind::kPromoteAttribute: {
      const std::string anchor = get_string(params, "anchor", false);
      if (!anchor.empty() && anchor != "BEFORE_BRACES") throw TransformError("unsupported anchor '" + anchor + "'");
      break;
    }
    case OpKind::kReplaceRule:
      op.body = get_string(params, "body", true);
      if (params.contains("returns")) op.returns_type = get_string(params, "returns", true);
      break;
    default:
      break;
  }
  check_op(op);
  return op;
}

}  // namespace

std::string config_to_json(const TransformationConfig& config) {
  json doc;
  doc["provenance"] = config.provenance;
  if (config.identity || config.entries.empty()) doc["identity"] = true;
  json entries = json::array();
  for (const auto& op : config.entries) {
    json scope;
    scope["kind"] = std::string(to_string(op.scope.kind));
    if (op.scope.kind != ScopeKind::kGrammar) scope["rule"] = op.scope.rule;
    if (op.scope.kind == ScopeKind::kAttribute) scope["feature"] = op.scope.feature;
    entries.push_back({{"kind", std::string(to_string(op.kind))}, {"scope", scope}, {"params", params_of(op)}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

TransformationConfig config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TransformError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw TransformError("config must be a JSON object");
  TransformationConfig config;
  config.provenance = doc.contains("provenance") && doc.at("provenance").is_string()
                          ? doc.at("provenance").get<std::string>()
                          : std::string();
  config.identity = doc.value("identity", false);
  if (!doc.contains("entries") || !doc.at("entries").is_array()) throw TransformError("missing 'entries' array");
  std::size_t i = 0;
  for (const auto& entry : doc.at("entries")) {
    try {
      config.entries.push_back(op_from_json(entry));
    } catch (const TransformError& e) {
      throw TransformError("entry " + std::to_string(i) + ": " + e.what());
    }
    ++i;
  }
  if (config.entries.empty() && !config.identity) {
    throw TransformError("config has no entries and is not marked identity");
  }
  return config;
}

}  // namespace coevo
