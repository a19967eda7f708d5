#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finmem/dates.hpp"
#include "finmem/embedding.hpp"
#include "finmem/rng.hpp"

namespace finmem::memory {

enum class Layer : int { Shallow = 0, Intermediate = 1, Deep = 2 };

inline constexpr std::array<Layer, 3> kAllLayers = {Layer::Shallow, Layer::Intermediate,
                                                    Layer::Deep};

const char* layer_name(Layer layer);  // "shallow" | "intermediate" | "deep"
std::optional<Layer> layer_from_name(std::string_view name);

/// Per-layer constants: stability Q (days) for the forgetting curve, decay
/// base alpha for importance, and the categorical distribution over the base
/// importance values {40, 60, 80}.
struct LayerParams {
  double q_stability;
  double alpha;
  std::array<double, 3> importance_probs;
};

inline constexpr std::array<int, 3> kImportanceValues = {40, 60, 80};

struct LayerParamsSet {
  LayerParams shallow{14.0, 0.9, {0.8, 0.15, 0.05}};
  LayerParams intermediate{90.0, 0.967, {0.05, 0.8, 0.15}};
  LayerParams deep{365.0, 0.988, {0.05, 0.15, 0.8}};

  const LayerParams& layer(Layer l) const {
    switch (l) {
      case Layer::Shallow: return shallow;
      case Layer::Intermediate: return intermediate;
      default: return deep;
    }
  }
};

enum class SourceKind { News, Filing10Q, Filing10K, ExtendedReflection };

const char* source_kind_name(SourceKind kind);
std::optional<SourceKind> source_kind_from_name(std::string_view name);

/// One summarized insight held in long-term memory. importance_value is
/// sampled once at ingestion and never changes; the access bonus grows by 5
/// points per citation. anchor_date is the creation date, reset on promotion
/// so the promoted event's recency restarts at 1.0.
struct MemoryEvent {
  std::int64_t id = 0;
  std::string ticker;
  Layer layer = Layer::Shallow;
  std::string text;
  embed::EmbeddingVector vector;
  Date anchor_date;
  int importance_value = 40;  // one of {40, 60, 80}
  int access_bonus = 0;       // 5 points per lifetime citation
  int access_count = 0;       // citations since creation or last promotion
  SourceKind source_kind = SourceKind::News;
};

/// Sub-scores after scaling to [0,1]; gamma is exactly their sum.
struct ScoredEvent {
  std::int64_t id = 0;
  double recency = 0.0;
  double relevancy = 0.0;
  double importance = 0.0;
  double gamma = 0.0;
};

struct RetrievedEvent {
  MemoryEvent event;  // copy; stable across later store mutations
  ScoredEvent score;
};

/// Per-layer retrieval result, indexed by Layer.
struct RetrievalResult {
  std::array<std::vector<RetrievedEvent>, 3> per_layer;

  const std::vector<RetrievedEvent>& layer(Layer l) const {
    return per_layer[static_cast<int>(l)];
  }
  std::vector<RetrievedEvent>& layer(Layer l) { return per_layer[static_cast<int>(l)]; }
};

/// Layered long-term memory. Single-writer; reads are safe between
/// mutations. Importance values are drawn from a dedicated substream of the
/// run seed, so replays with the same seed and ingestion order are
/// bit-identical.
class MemoryStore {
 public:
  explicit MemoryStore(LayerParamsSet params = {}, std::uint64_t seed = 0,
                       int promotion_threshold = 3);

  const LayerParamsSet& params() const { return params_; }
  int promotion_threshold() const { return promotion_threshold_; }

  const MemoryEvent& ingest(std::string text, std::string ticker, Layer layer, Date date,
                            embed::EmbeddingVector vector,
                            SourceKind source = SourceKind::News);

  // Scoring kernels (importance divides by 100 and clamps to 1; negative
  // cosine clamps to 0; recency is exp(-delta/Q)).
  double recency_score(const MemoryEvent& event, Date query_date) const;
  double relevancy_score(const MemoryEvent& event, const embed::EmbeddingVector& query) const;
  double importance_score_raw(const MemoryEvent& event, Date query_date) const;
  ScoredEvent retrieval_score(const MemoryEvent& event, const embed::EmbeddingVector& query,
                              Date query_date) const;

  /// Top-k per layer by gamma, ties broken toward the newer (higher) id.
  RetrievalResult retrieve_top_k(const std::string& ticker, const embed::EmbeddingVector& query,
                                 Date query_date, int k) const;

  /// Removes every event whose recency dropped below 0.05 or whose raw
  /// importance (value + bonus, decayed) fell under 5. Returns removed ids.
  std::vector<std::int64_t> decay_and_purge(Date query_date);

  /// Records citations: +1 count and +5 bonus each. An event reaching the
  /// promotion threshold moves one layer deeper with its anchor reset to
  /// query_date and its counter cleared (bonus retained); deep events keep
  /// accruing bonus but cannot move. Returns ids promoted this call.
  std::vector<std::int64_t> register_access(std::span<const std::int64_t> ids, Date query_date);

  const MemoryEvent* find(std::int64_t id) const;
  const std::vector<MemoryEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  std::size_t layer_size(const std::string& ticker, Layer layer) const;
  std::int64_t total_purged() const { return total_purged_; }

  /// Inserts a fully-formed event (snapshot load path). Keeps id allocation
  /// ahead of the largest restored id.
  void restore_event(MemoryEvent event);

  /// Newline-delimited JSON, one event per line; load(save(x)) == x bit-exactly.
  void save_snapshot(const std::filesystem::path& path) const;
  std::string snapshot_string() const;
  static MemoryStore load_snapshot(const std::filesystem::path& path, LayerParamsSet params = {},
                                   std::uint64_t seed = 0, int promotion_threshold = 3);

 private:
  LayerParamsSet params_;
  SeededRng importance_rng_;
  int promotion_threshold_;
  std::int64_t next_id_ = 1;
  std::int64_t total_purged_ = 0;
  std::vector<MemoryEvent> events_;  // sorted by id (append-only allocation)
};

}  // namespace finmem::memory
