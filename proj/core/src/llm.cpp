#include "finmem/llm.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "finmem/errors.hpp"

namespace finmem::llm {

const char* template_file_name(TemplateId id) {
  switch (id) {
    case TemplateId::Summarize: return "summarize.txt";
    case TemplateId::ImmediateReflectTrain: return "immediate_reflect_train.txt";
    case TemplateId::ImmediateReflectTest: return "immediate_reflect_test.txt";
    case TemplateId::ExtendedReflect: return "extended_reflect.txt";
    case TemplateId::ProfileCompose: return "profile_compose.txt";
  }
  return "summarize.txt";
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr TemplateId kAllTemplates[] = {
    TemplateId::Summarize,           TemplateId::ImmediateReflectTrain,
    TemplateId::ImmediateReflectTest, TemplateId::ExtendedReflect,
    TemplateId::ProfileCompose,
};

}  // namespace

TemplateLibrary TemplateLibrary::load_dir(const std::filesystem::path& dir) {
  TemplateLibrary lib;
  for (TemplateId id : kAllTemplates)
    lib.templates_[id] = read_file(dir / template_file_name(id));
  lib.risk_seeking_ = read_file(dir / "risk_seeking.txt");
  lib.risk_averse_ = read_file(dir / "risk_averse.txt");
  return lib;
}

const std::string& TemplateLibrary::text(TemplateId id) const {
  const auto it = templates_.find(id);
  if (it == templates_.end())
    raise(Errc::UnknownTemplate, std::string("template not loaded: ") + template_file_name(id));
  return it->second;
}

std::string TemplateLibrary::render(TemplateId id, const SlotMap& slots) const {
  const std::string& tmpl = text(id);
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos, std::string::npos);
      break;
    }
    out.append(tmpl, pos, open - pos);
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string::npos)
      raise(Errc::UnknownTemplate,
            std::string(template_file_name(id)) + ": unterminated placeholder");
    const std::string name = tmpl.substr(open + 2, close - open - 2);
    const auto it = slots.find(name);
    if (it == slots.end())
      raise(Errc::MissingSlot,
            std::string(template_file_name(id)) + " requires slot '" + name + "'");
    out += it->second;
    pos = close + 2;
  }
  return out;
}

std::vector<std::int64_t> parse_id_list(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  return out;
}

namespace {

std::optional<std::string> require_string(const nlohmann::json& payload, const char* key) {
  if (!payload.contains(key)) return std::string("missing key '") + key + "'";
  if (!payload[key].is_string() || payload[key].get<std::string>().empty())
    return std::string("key '") + key + "' must be a non-empty string";
  return std::nullopt;
}

std::optional<std::string> check_cited_ids(const nlohmann::json& payload, const SlotMap& slots) {
  if (!payload.contains("cited_ids") || !payload["cited_ids"].is_object())
    return std::string("missing object 'cited_ids'");
  const nlohmann::json& cited = payload["cited_ids"];
  static constexpr std::pair<const char*, const char*> kLayers[] = {
      {"shallow", "shallow_ids"},
      {"intermediate", "intermediate_ids"},
      {"deep", "deep_ids"},
  };
  for (const auto& [layer_key, slot_key] : kLayers) {
    if (!cited.contains(layer_key) || !cited[layer_key].is_array())
      return std::string("cited_ids must contain array '") + layer_key + "'";
    std::vector<std::int64_t> offered;
    if (const auto it = slots.find(slot_key); it != slots.end())
      offered = parse_id_list(it->second);
    for (const nlohmann::json& v : cited[layer_key]) {
      if (!v.is_number_integer())
        return std::string("cited_ids.") + layer_key + " entries must be integers";
      const std::int64_t id = v.get<std::int64_t>();
      if (std::find(offered.begin(), offered.end(), id) == offered.end())
        return std::string("cited id ") + std::to_string(id) + " in '" + layer_key +
               "' was not among the offered ids";
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_payload(TemplateId id, const nlohmann::json& payload,
                                            const SlotMap& slots) {
  if (!payload.is_object()) return std::string("response must be a single JSON object");
  switch (id) {
    case TemplateId::Summarize: {
      if (auto err = require_string(payload, "summary")) return err;
      if (auto err = require_string(payload, "sentiment")) return err;
      const std::string s = payload["sentiment"].get<std::string>();
      if (s != "positive" && s != "negative" && s != "neutral")
        return std::string("sentiment must be one of positive|negative|neutral, got '") + s + "'";
      return std::nullopt;
    }
    case TemplateId::ImmediateReflectTest: {
      if (!payload.contains("direction") || !payload["direction"].is_string())
        return std::string("missing string 'direction'");
      const std::string d = payload["direction"].get<std::string>();
      if (d != "Buy" && d != "Sell" && d != "Hold")
        return std::string("direction must be one of Buy|Sell|Hold, got '") + d + "'";
      if (auto err = require_string(payload, "rationale")) return err;
      return check_cited_ids(payload, slots);
    }
    case TemplateId::ImmediateReflectTrain: {
      if (payload.contains("direction"))
        return std::string("training reflections must not choose a direction");
      if (auto err = require_string(payload, "rationale")) return err;
      return check_cited_ids(payload, slots);
    }
    case TemplateId::ExtendedReflect:
      return require_string(payload, "trend_summary");
    case TemplateId::ProfileCompose:
      return require_string(payload, "profile_text");
  }
  return std::string("unknown template");
}

Gateway::Gateway(TemplateLibrary templates, std::shared_ptr<Provider> provider, int max_retries)
    : templates_(std::move(templates)), provider_(std::move(provider)),
      max_retries_(max_retries) {}

namespace {

// A response should be a single JSON object; tolerate providers that wrap it
// in prose by extracting the outermost braces.
std::optional<nlohmann::json> parse_object(const std::string& text) {
  const auto try_parse = [](const std::string& s) -> std::optional<nlohmann::json> {
    nlohmann::json j = nlohmann::json::parse(s, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
  };
  if (auto j = try_parse(text)) return j;
  const std::size_t open = text.find('{');
  const std::size_t close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close <= open)
    return std::nullopt;
  return try_parse(text.substr(open, close - open + 1));
}

}  // namespace

StructuredResponse Gateway::complete(const PromptRequest& request) const {
  std::string prompt = templates_.render(request.template_id, request.slots);
  std::string last_error = "no attempt made";
  for (int attempt = 1; attempt <= max_retries_ + 1; ++attempt) {
    const std::string raw = provider_->generate(prompt, request);
    const auto parsed = parse_object(raw);
    std::optional<std::string> error;
    if (!parsed) {
      error = "response is not a JSON object";
    } else {
      error = validate_payload(request.template_id, *parsed, request.slots);
    }
    if (!error) {
      StructuredResponse response;
      response.payload = *parsed;
      response.raw_text = raw;
      response.attempts = attempt;
      return response;
    }
    last_error = *error;
    prompt += "\n\nThe previous response was invalid: " + last_error +
              "\nRespond with only the corrected JSON object.";
  }
  raise(Errc::ValidationExhausted,
        "after " + std::to_string(max_retries_ + 1) + " attempts: " + last_error);
}

}  // namespace finmem::llm
