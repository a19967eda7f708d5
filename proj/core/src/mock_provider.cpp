#include "finmem/mock_provider.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "finmem/errors.hpp"

namespace finmem::llm {

Rulebook Rulebook::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::MalformedRulebook, "cannot open " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) raise(Errc::MalformedRulebook, path.string() + ": not valid JSON");
  return from_json(j);
}

Rulebook Rulebook::from_json(const nlohmann::json& j) {
  Rulebook rb;
  if (!j.is_object() || !j.contains("positive_terms") || !j.contains("negative_terms"))
    raise(Errc::MalformedRulebook, "rulebook needs positive_terms and negative_terms arrays");
  for (const char* key : {"positive_terms", "negative_terms"}) {
    if (!j[key].is_array())
      raise(Errc::MalformedRulebook, std::string(key) + " must be an array of strings");
  }
  for (const auto& t : j["positive_terms"]) rb.positive_terms.insert(t.get<std::string>());
  for (const auto& t : j["negative_terms"]) rb.negative_terms.insert(t.get<std::string>());
  if (j.contains("summary_sentences")) rb.summary_sentences = j["summary_sentences"].get<int>();
  if (rb.summary_sentences < 1)
    raise(Errc::MalformedRulebook, "summary_sentences must be >= 1");
  if (j.contains("neutral_direction")) {
    rb.neutral_direction = j["neutral_direction"].get<std::string>();
    if (rb.neutral_direction != "Buy" && rb.neutral_direction != "Sell" &&
        rb.neutral_direction != "Hold")
      raise(Errc::MalformedRulebook, "neutral_direction must be Buy|Sell|Hold");
  }
  return rb;
}

namespace {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string token;
  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      token.push_back(static_cast<char>(c));
    } else if (c >= 'A' && c <= 'Z') {
      token.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (!token.empty()) {
      tokens.push_back(std::move(token));
      token.clear();
    }
  }
  if (!token.empty()) tokens.push_back(std::move(token));
  return tokens;
}

std::string slot_or_empty(const SlotMap& slots, const char* name) {
  const auto it = slots.find(name);
  return it == slots.end() ? std::string() : it->second;
}

double parse_double_or_zero(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    return 0.0;
  }
}

std::string format_return(double r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", r);
  return buf;
}

}  // namespace

int Rulebook::sentiment(std::string_view text) const {
  int score = 0;
  for (const std::string& token : tokenize(text)) {
    if (positive_terms.count(token)) ++score;
    if (negative_terms.count(token)) --score;
  }
  return score;
}

std::string MockProvider::generate(const std::string& /*prompt*/, const PromptRequest& request) {
  const SlotMap& slots = request.slots;
  nlohmann::ordered_json out;

  switch (request.template_id) {
    case TemplateId::Summarize: {
      const std::string text = slot_or_empty(slots, "document_text");
      std::vector<std::string> fragments;
      std::string current;
      for (char c : text) {
        if (c == '.' || c == '!' || c == '?' || c == ';' || c == '\n') {
          if (!current.empty()) fragments.push_back(current);
          current.clear();
        } else if (!(current.empty() && c == ' ')) {
          current.push_back(c);
        }
      }
      if (!current.empty()) fragments.push_back(current);

      std::string summary;
      const int take = std::min<int>(rulebook_.summary_sentences,
                                     static_cast<int>(fragments.size()));
      for (int i = 0; i < take; ++i) {
        if (i) summary += ". ";
        summary += fragments[i];
      }
      if (summary.empty()) summary = "(no content)";
      const int score = rulebook_.sentiment(text);
      out["summary"] = summary;
      out["sentiment"] = score > 0 ? "positive" : score < 0 ? "negative" : "neutral";
      break;
    }

    case TemplateId::ImmediateReflectTrain:
    case TemplateId::ImmediateReflectTest: {
      int total = 0;
      int memories = 0;
      for (const char* slot : {"shallow_memories", "intermediate_memories", "deep_memories"}) {
        const std::string block = slot_or_empty(slots, slot);
        if (block.empty() || block == "none") continue;
        total += rulebook_.sentiment(block);
        for (char c : block)
          if (c == '\n') ++memories;
        ++memories;  // last line has no trailing newline
      }

      nlohmann::ordered_json cited = nlohmann::ordered_json::object();
      for (const auto& [layer, slot] : {std::pair{"shallow", "shallow_ids"},
                                        std::pair{"intermediate", "intermediate_ids"},
                                        std::pair{"deep", "deep_ids"}}) {
        const auto ids = parse_id_list(slot_or_empty(slots, slot));
        auto arr = nlohmann::ordered_json::array();
        if (!ids.empty()) arr.push_back(ids.front());  // top-1 per layer
        cited[layer] = arr;
      }

      if (request.template_id == TemplateId::ImmediateReflectTest) {
        const double trailing = parse_double_or_zero(slot_or_empty(slots, "trailing_return"));
        std::string direction;
        if (total > 0) {
          direction = "Buy";
        } else if (total < 0) {
          direction = "Sell";
        } else if (trailing > 0) {
          direction = "Buy";
        } else if (trailing < 0) {
          direction = "Sell";
        } else {
          direction = rulebook_.neutral_direction;
        }
        out["direction"] = direction;
        out["rationale"] = "Lexicon sentiment " + std::to_string(total) + " across " +
                           std::to_string(memories) + " retrieved memories; trailing return " +
                           format_return(trailing) + ".";
      } else {
        out["rationale"] = "Ground label " + slot_or_empty(slots, "train_label") +
                           " aligns with lexicon sentiment " + std::to_string(total) +
                           " across " + std::to_string(memories) + " retrieved memories.";
      }
      out["cited_ids"] = cited;
      break;
    }

    case TemplateId::ExtendedReflect: {
      // Wording deliberately avoids lexicon vocabulary so stored reflections
      // do not feed back into later sentiment sums.
      out["trend_summary"] = "Across the last " + slot_or_empty(slots, "window_days") +
                             " sessions the realized window return was " +
                             slot_or_empty(slots, "window_return") + ".";
      break;
    }

    case TemplateId::ProfileCompose: {
      out["profile_text"] = slot_or_empty(slots, "sector_text") + " " +
                            slot_or_empty(slots, "history_overview");
      break;
    }
  }

  return out.dump();
}

}  // namespace finmem::llm
