#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "finmem/agent.hpp"
#include "finmem/dates.hpp"
#include "finmem/memory.hpp"

namespace finmem {

/// Fully resolved run configuration. CLI flags and the config file both map
/// onto these fields one-to-one; the resolved values are embedded in every
/// report for provenance.
struct RunConfig {
  std::string ticker;

  std::filesystem::path ohlcv_path;
  std::filesystem::path documents_path;
  std::filesystem::path metadata_path;   // per-ticker sector JSON
  std::filesystem::path rulebook_path;   // mock provider fixture
  std::filesystem::path templates_dir = "templates";
  std::filesystem::path out_dir = "out";

  Date train_start, train_end, test_start, test_end;

  int k_top = 5;
  int m_window = 5;
  int switch_window = 3;
  int promotion_threshold = 3;
  int max_retries = 2;
  int embed_dim = 256;

  agent::RiskMode risk = agent::RiskMode::SelfAdaptive;
  std::string provider = "mock";  // "mock" | "remote"
  double temperature = 0.7;
  double risk_free_daily = 0.0;
  bool annualize_sharpe = true;

  std::uint64_t seed = 0;
  bool seed_set = false;

  memory::LayerParamsSet layers;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;

  /// Key-value view of every field (provenance block in reports).
  std::map<std::string, std::string> to_key_values() const;
};

/// Loads `{"TICKER": {"sector_text": ...}, ...}` metadata.
std::map<std::string, std::string> load_sector_metadata(const std::filesystem::path& path);

}  // namespace finmem
