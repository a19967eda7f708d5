#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace finmem::llm {

enum class TemplateId {
  Summarize,
  ImmediateReflectTrain,
  ImmediateReflectTest,
  ExtendedReflect,
  ProfileCompose,
};

const char* template_file_name(TemplateId id);

using SlotMap = std::map<std::string, std::string>;

struct PromptRequest {
  TemplateId template_id = TemplateId::Summarize;
  SlotMap slots;
  double temperature = 0.7;
};

struct StructuredResponse {
  nlohmann::json payload;  // schema-validated
  std::string raw_text;    // provider output of the accepted attempt
  int attempts = 1;
};

/// Chat-completion backend. `prompt` is the fully rendered template; the
/// request is passed alongside so rule-based providers can work from the
/// template id and slots directly.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string generate(const std::string& prompt, const PromptRequest& request) = 0;
};

/// Prompt templates as versioned text files with {{slot}} placeholders, plus
/// the two risk-inclination paragraphs.
class TemplateLibrary {
 public:
  static TemplateLibrary load_dir(const std::filesystem::path& dir);

  const std::string& text(TemplateId id) const;
  /// Substitutes every {{name}}; a placeholder with no matching slot raises
  /// MissingSlot.
  std::string render(TemplateId id, const SlotMap& slots) const;

  const std::string& risk_seeking_text() const { return risk_seeking_; }
  const std::string& risk_averse_text() const { return risk_averse_; }

 private:
  std::map<TemplateId, std::string> templates_;
  std::string risk_seeking_;
  std::string risk_averse_;
};

/// Validates a provider payload against the template's output schema.
/// Reflect templates check cited ids against the ids offered in the request
/// slots ("shallow_ids" etc.). Returns an error description, or nullopt if
/// the payload conforms.
std::optional<std::string> validate_payload(TemplateId id, const nlohmann::json& payload,
                                            const SlotMap& slots);

/// Parses a comma-separated id list slot ("3,5,9"; empty means none).
std::vector<std::int64_t> parse_id_list(const std::string& csv);

/// Renders prompts, invokes the provider, and enforces the output schema.
/// On a validation failure the prompt is re-issued with the validator's
/// message and a correction instruction appended, up to max_retries extra
/// attempts; after that the call raises ValidationExhausted.
class Gateway {
 public:
  Gateway(TemplateLibrary templates, std::shared_ptr<Provider> provider, int max_retries = 2);

  StructuredResponse complete(const PromptRequest& request) const;

  const TemplateLibrary& templates() const { return templates_; }
  int max_retries() const { return max_retries_; }

 private:
  TemplateLibrary templates_;
  std::shared_ptr<Provider> provider_;
  int max_retries_;
};

}  // namespace finmem::llm
