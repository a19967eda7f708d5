#include "finmem/config.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "finmem/errors.hpp"

namespace finmem {

void RunConfig::validate() const {
  if (ticker.empty()) raise(Errc::InvalidConfig, "ticker: must be non-empty");
  if (k_top < 1) raise(Errc::InvalidConfig, "k_top: must be >= 1, got " + std::to_string(k_top));
  if (m_window < 1)
    raise(Errc::InvalidConfig, "m_window: must be >= 1, got " + std::to_string(m_window));
  if (switch_window < 1)
    raise(Errc::InvalidConfig,
          "switch_window: must be >= 1, got " + std::to_string(switch_window));
  if (promotion_threshold < 1)
    raise(Errc::InvalidConfig,
          "promotion_threshold: must be >= 1, got " + std::to_string(promotion_threshold));
  if (max_retries < 0) raise(Errc::InvalidConfig, "max_retries: must be >= 0");
  if (embed_dim < 1) raise(Errc::InvalidConfig, "embed_dim: must be >= 1");
  if (temperature < 0.0 || temperature > 2.0)
    raise(Errc::InvalidConfig, "temperature: must be in [0, 2]");
  if (provider != "mock" && provider != "remote")
    raise(Errc::InvalidConfig, "provider: must be 'mock' or 'remote', got '" + provider + "'");
  if (provider == "mock" && !seed_set)
    raise(Errc::InvalidConfig, "seed: required for mock runs");
  if (!(train_start <= train_end))
    raise(Errc::InvalidConfig, "train_start/train_end: start is after end");
  if (!(test_start <= test_end))
    raise(Errc::InvalidConfig, "test_start/test_end: start is after end");
  if (!(train_end < test_start))
    raise(Errc::OverlappingWindows,
          "train_end/test_start: train window must precede the test window");
  for (const auto& [name, value] :
       {std::pair<const char*, const std::filesystem::path&>{"ohlcv_path", ohlcv_path},
        {"documents_path", documents_path},
        {"metadata_path", metadata_path}}) {
    if (value.empty())
      raise(Errc::InvalidConfig, std::string(name) + ": must be set");
  }
  if (provider == "mock" && rulebook_path.empty())
    raise(Errc::InvalidConfig, "rulebook_path: required for mock runs");

  const auto check_probs = [](const char* name, const memory::LayerParams& p) {
    const double sum = p.importance_probs[0] + p.importance_probs[1] + p.importance_probs[2];
    if (std::abs(sum - 1.0) > 1e-12)
      raise(Errc::InvalidConfig,
            std::string(name) + ": importance probabilities must sum to 1");
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
      raise(Errc::InvalidConfig, std::string(name) + ": alpha must be in (0, 1)");
    if (!(p.q_stability > 0.0))
      raise(Errc::InvalidConfig, std::string(name) + ": q_stability must be > 0");
  };
  check_probs("layers.shallow", layers.shallow);
  check_probs("layers.intermediate", layers.intermediate);
  check_probs("layers.deep", layers.deep);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::map<std::string, std::string> RunConfig::to_key_values() const {
  std::map<std::string, std::string> kv;
  kv["ticker"] = ticker;
  kv["ohlcv_path"] = ohlcv_path.string();
  kv["documents_path"] = documents_path.string();
  kv["metadata_path"] = metadata_path.string();
  kv["rulebook_path"] = rulebook_path.string();
  kv["templates_dir"] = templates_dir.string();
  kv["out_dir"] = out_dir.string();
  kv["train_start"] = train_start.to_string();
  kv["train_end"] = train_end.to_string();
  kv["test_start"] = test_start.to_string();
  kv["test_end"] = test_end.to_string();
  kv["k_top"] = std::to_string(k_top);
  kv["m_window"] = std::to_string(m_window);
  kv["switch_window"] = std::to_string(switch_window);
  kv["promotion_threshold"] = std::to_string(promotion_threshold);
  kv["max_retries"] = std::to_string(max_retries);
  kv["embed_dim"] = std::to_string(embed_dim);
  kv["risk"] = agent::risk_mode_name(risk);
  kv["provider"] = provider;
  kv["temperature"] = fmt(temperature);
  kv["risk_free_daily"] = fmt(risk_free_daily);
  kv["annualize_sharpe"] = annualize_sharpe ? "true" : "false";
  kv["seed"] = std::to_string(seed);
  kv["layers.shallow.q"] = fmt(layers.shallow.q_stability);
  kv["layers.shallow.alpha"] = fmt(layers.shallow.alpha);
  kv["layers.intermediate.q"] = fmt(layers.intermediate.q_stability);
  kv["layers.intermediate.alpha"] = fmt(layers.intermediate.alpha);
  kv["layers.deep.q"] = fmt(layers.deep.q_stability);
  kv["layers.deep.alpha"] = fmt(layers.deep.alpha);
  return kv;
}

std::map<std::string, std::string> load_sector_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    raise(Errc::SchemaMismatch, path.string() + ": expected a JSON object of tickers");
  std::map<std::string, std::string> out;
  for (const auto& [ticker, entry] : j.items()) {
    if (!entry.is_object() || !entry.contains("sector_text") ||
        !entry["sector_text"].is_string())
      raise(Errc::SchemaMismatch, path.string() + ": ticker '" + ticker +
                                      "' needs a sector_text string");
    out[ticker] = entry["sector_text"].get<std::string>();
  }
  return out;
}

}  // namespace finmem
