#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "finmem/llm.hpp"

namespace finmem::llm {

/// Fixture driving the deterministic mock provider: a sentiment lexicon,
/// summary length, and the tie rule for a flat signal.
struct Rulebook {
  std::set<std::string> positive_terms;
  std::set<std::string> negative_terms;
  int summary_sentences = 2;
  std::string neutral_direction = "Hold";

  static Rulebook load(const std::filesystem::path& path);
  static Rulebook from_json(const nlohmann::json& j);

  /// Net lexicon score: +1 per positive token, -1 per negative token.
  int sentiment(std::string_view text) const;
};

/// Rule-based provider: responses are a pure function of (template id, slot
/// contents). Summaries echo the leading sentence fragments plus a
/// lexicon-derived sentiment tag; reflections choose the direction from the
/// sign of the summed sentiment of the retrieved memories, falling back to
/// the sign of the trailing return, and cite the top-1 offered id per layer.
class MockProvider final : public Provider {
 public:
  explicit MockProvider(Rulebook rulebook) : rulebook_(std::move(rulebook)) {}

  std::string generate(const std::string& prompt, const PromptRequest& request) override;

  const Rulebook& rulebook() const { return rulebook_; }

 private:
  Rulebook rulebook_;
};

}  // namespace finmem::llm
