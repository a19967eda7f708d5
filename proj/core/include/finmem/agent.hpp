#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finmem/dates.hpp"
#include "finmem/embedding.hpp"
#include "finmem/llm.hpp"
#include "finmem/market_data.hpp"
#include "finmem/memory.hpp"

namespace finmem::agent {

enum class Phase { Train, Test };

/// Daily decision. Training days record NoOp (no position change); test days
/// record one of Buy / Sell / Hold.
enum class Action { Buy, Sell, Hold, NoOp };

const char* action_name(Action action);
std::optional<Action> action_from_name(std::string_view name);

enum class RiskMode { RiskSeeking, RiskAverse, SelfAdaptive };
enum class EffectiveRisk { Seeking, Averse };

const char* risk_mode_name(RiskMode mode);
std::optional<RiskMode> risk_mode_from_name(std::string_view name);
const char* effective_risk_name(EffectiveRisk risk);

struct AgentProfile {
  std::string ticker;
  std::string sector_background;
  std::string history_overview;
  RiskMode risk = RiskMode::SelfAdaptive;
  int switch_window = 3;  // trading days for the self-adaptive flip
};

/// Professional-background profile: sector text from per-ticker metadata and
/// a history overview (first/last adjusted close and cumulative return over
/// the training window).
AgentProfile build_profile(const std::string& ticker, const data::Warehouse& warehouse,
                           Date train_start, Date train_end,
                           const std::map<std::string, std::string>& sector_metadata,
                           RiskMode risk = RiskMode::SelfAdaptive, int switch_window = 3);

/// Fixed modes return themselves. SelfAdaptive is Averse exactly when the
/// trailing switch_window-day realized return sum is strictly negative
/// (missing days count as zero), else Seeking.
EffectiveRisk effective_risk(const AgentProfile& profile,
                             std::span<const double> realized_returns);

struct MarketIndication {
  Phase phase = Phase::Train;
  std::optional<data::DirectionLabel> train_label;  // present iff Train
  std::optional<double> trailing_return;            // present iff Test
};

struct CitedIds {
  std::vector<std::int64_t> shallow, intermediate, deep;

  std::vector<std::int64_t> all() const;
  bool empty() const { return shallow.empty() && intermediate.empty() && deep.empty(); }
  /// Compact log form, e.g. "s=3|7;i=12;d=".
  std::string to_log_string() const;
};

struct ImmediateReflection {
  Date date;
  std::optional<Action> direction;  // present iff Test
  std::string rationale;
  CitedIds cited;
};

struct ExtendedReflection {
  int window_m = 0;  // days actually covered (truncated early in the phase)
  std::string trend_summary;
  double window_return = 0.0;
  Date date;
};

struct TradeDecision {
  Date date;
  Action action = Action::Hold;
  EffectiveRisk risk = EffectiveRisk::Seeking;
  std::string rationale;
  CitedIds cited;
  bool degraded = false;  // gateway failure fell back to Hold / NoOp
};

struct RetrievalStats {
  Date date;
  int k = 0;
  std::array<int, 3> layer_sizes{};  // ticker-scoped sizes at retrieval time
  std::array<int, 3> retrieved{};
};

struct SkippedDocument {
  std::string id;
  Date date;
  std::string reason;
};

struct AgentConfig {
  int top_k = 5;
  int observation_window = 5;  // M: trailing-return and extended-reflection span
  double temperature = 0.7;
};

/// The trading agent: owns the day-by-day working-memory cycle (summarize
/// incoming documents, observe the market, reflect, cite memories) on top of
/// a layered MemoryStore. Strictly sequential: day t's memory state feeds
/// day t+1.
class TradingAgent {
 public:
  TradingAgent(AgentProfile profile, AgentConfig config, memory::MemoryStore& store,
               embed::Embedder& embedder, const llm::Gateway& gateway);

  /// One simulated trading day. The view must be clamped by the caller
  /// (train: decision date + next trading day; test: decision date).
  TradeDecision step(Date date, Phase phase, const data::PriceView& prices,
                     std::span<const data::RawDocument* const> documents);

  /// Driver feedback: the realized ledger return of a completed test day.
  /// Feeds the self-adaptive risk switch and the extended-reflection window.
  void record_realized_return(Date date, double value);

  // Working-memory operations, exposed individually for targeted tests.
  void absorb_documents(std::span<const data::RawDocument* const> documents, Date date);
  MarketIndication observe(Phase phase, const data::PriceView& prices, Date date) const;
  ImmediateReflection reflect_immediate(const MarketIndication& indication,
                                        const memory::RetrievalResult& retrieval, Phase phase,
                                        Date date);
  ExtendedReflection reflect_extended(Date date);

  /// Inquiry text + the day's risk paragraph; this exact string is embedded
  /// as the retrieval query (tunable seam).
  std::string query_text(Date date) const;

  EffectiveRisk current_risk() const;

  const AgentProfile& profile() const { return profile_; }
  const AgentConfig& config() const { return config_; }
  const memory::MemoryStore& store() const { return *store_; }
  const std::vector<ImmediateReflection>& reflections() const { return reflections_; }
  const std::vector<ExtendedReflection>& extended_reflections() const {
    return extended_reflections_;
  }
  const std::vector<RetrievalStats>& retrieval_stats() const { return retrieval_stats_; }
  const std::vector<SkippedDocument>& skipped_documents() const { return skipped_; }
  const std::vector<double>& realized_returns() const { return realized_returns_; }
  int documents_ingested() const { return documents_ingested_; }

 private:
  llm::SlotMap common_reflection_slots(const memory::RetrievalResult& retrieval,
                                       Date date) const;

  AgentProfile profile_;
  AgentConfig config_;
  memory::MemoryStore* store_;
  embed::Embedder* embedder_;
  const llm::Gateway* gateway_;

  std::vector<double> realized_returns_;  // completed test days, in date order
  std::vector<ImmediateReflection> reflections_;
  std::vector<ExtendedReflection> extended_reflections_;
  std::vector<RetrievalStats> retrieval_stats_;
  std::vector<SkippedDocument> skipped_;
  int documents_ingested_ = 0;
};

}  // namespace finmem::agent
