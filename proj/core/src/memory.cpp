#include "finmem/memory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "finmem/errors.hpp"

namespace finmem::memory {

const char* layer_name(Layer layer) {
  switch (layer) {
    case Layer::Shallow: return "shallow";
    case Layer::Intermediate: return "intermediate";
    case Layer::Deep: return "deep";
  }
  return "shallow";
}

std::optional<Layer> layer_from_name(std::string_view name) {
  if (name == "shallow") return Layer::Shallow;
  if (name == "intermediate") return Layer::Intermediate;
  if (name == "deep") return Layer::Deep;
  return std::nullopt;
}

const char* source_kind_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::News: return "news";
    case SourceKind::Filing10Q: return "10q";
    case SourceKind::Filing10K: return "10k";
    case SourceKind::ExtendedReflection: return "extended_reflection";
  }
  return "news";
}

std::optional<SourceKind> source_kind_from_name(std::string_view name) {
  if (name == "news") return SourceKind::News;
  if (name == "10q") return SourceKind::Filing10Q;
  if (name == "10k") return SourceKind::Filing10K;
  if (name == "extended_reflection") return SourceKind::ExtendedReflection;
  return std::nullopt;
}

MemoryStore::MemoryStore(LayerParamsSet params, std::uint64_t seed, int promotion_threshold)
    : params_(params),
      importance_rng_(substream_seed(seed, "importance")),
      promotion_threshold_(promotion_threshold) {}

const MemoryEvent& MemoryStore::ingest(std::string text, std::string ticker, Layer layer,
                                       Date date, embed::EmbeddingVector vector,
                                       SourceKind source) {
  if (text.empty()) raise(Errc::EmptyText, "memory event text must be non-empty");
  MemoryEvent event;
  event.id = next_id_++;
  event.ticker = std::move(ticker);
  event.layer = layer;
  event.text = std::move(text);
  event.vector = std::move(vector);
  event.anchor_date = date;
  const auto& probs = params_.layer(layer).importance_probs;
  event.importance_value = kImportanceValues[importance_rng_.pick_categorical(probs)];
  event.source_kind = source;
  events_.push_back(std::move(event));
  return events_.back();
}

double MemoryStore::recency_score(const MemoryEvent& event, Date query_date) const {
  const std::int64_t delta = query_date - event.anchor_date;
  if (delta < 0)
    raise(Errc::FutureEvent, "event " + std::to_string(event.id) + " anchored after query date");
  return std::exp(-static_cast<double>(delta) / params_.layer(event.layer).q_stability);
}

double MemoryStore::relevancy_score(const MemoryEvent& event,
                                    const embed::EmbeddingVector& query) const {
  return std::max(0.0, embed::cosine(event.vector, query));
}

double MemoryStore::importance_score_raw(const MemoryEvent& event, Date query_date) const {
  const std::int64_t delta = query_date - event.anchor_date;
  if (delta < 0)
    raise(Errc::FutureEvent, "event " + std::to_string(event.id) + " anchored after query date");
  const double theta = std::pow(params_.layer(event.layer).alpha, static_cast<double>(delta));
  return (event.importance_value + event.access_bonus) * theta;
}

ScoredEvent MemoryStore::retrieval_score(const MemoryEvent& event,
                                         const embed::EmbeddingVector& query,
                                         Date query_date) const {
  ScoredEvent s;
  s.id = event.id;
  s.recency = recency_score(event, query_date);
  s.relevancy = relevancy_score(event, query);
  s.importance = std::min(1.0, importance_score_raw(event, query_date) / 100.0);
  s.gamma = s.recency + s.relevancy + s.importance;
  return s;
}

RetrievalResult MemoryStore::retrieve_top_k(const std::string& ticker,
                                            const embed::EmbeddingVector& query,
                                            Date query_date, int k) const {
  RetrievalResult result;
  if (k < 1) return result;
  std::array<std::vector<std::pair<ScoredEvent, const MemoryEvent*>>, 3> scored;
  for (const MemoryEvent& event : events_) {
    if (event.ticker != ticker) continue;
    scored[static_cast<int>(event.layer)].emplace_back(
        retrieval_score(event, query, query_date), &event);
  }
  for (Layer layer : kAllLayers) {
    auto& candidates = scored[static_cast<int>(layer)];
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      if (a.first.gamma != b.first.gamma) return a.first.gamma > b.first.gamma;
      return a.first.id > b.first.id;  // ties: newer event first
    });
    const std::size_t take = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(k));
    auto& out = result.layer(layer);
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
      out.push_back(RetrievedEvent{*candidates[i].second, candidates[i].first});
  }
  return result;
}

std::vector<std::int64_t> MemoryStore::decay_and_purge(Date query_date) {
  std::vector<std::int64_t> purged;
  std::vector<MemoryEvent> kept;
  kept.reserve(events_.size());
  for (MemoryEvent& event : events_) {
    const double recency = recency_score(event, query_date);
    const double importance = importance_score_raw(event, query_date);
    if (recency < 0.05 || importance < 5.0) {
      purged.push_back(event.id);
    } else {
      kept.push_back(std::move(event));
    }
  }
  events_ = std::move(kept);
  total_purged_ += static_cast<std::int64_t>(purged.size());
  return purged;
}

std::vector<std::int64_t> MemoryStore::register_access(std::span<const std::int64_t> ids,
                                                       Date query_date) {
  std::vector<std::int64_t> promoted;
  for (std::int64_t id : ids) {
    const auto it = std::lower_bound(
        events_.begin(), events_.end(), id,
        [](const MemoryEvent& e, std::int64_t v) { return e.id < v; });
    if (it == events_.end() || it->id != id)
      raise(Errc::UnknownEventId, "no event with id " + std::to_string(id));
    it->access_count += 1;
    it->access_bonus += 5;
    if (it->layer != Layer::Deep && it->access_count >= promotion_threshold_) {
      it->layer = it->layer == Layer::Shallow ? Layer::Intermediate : Layer::Deep;
      it->anchor_date = query_date;  // recency restarts at 1.0
      it->access_count = 0;
      promoted.push_back(id);
    }
  }
  return promoted;
}

const MemoryEvent* MemoryStore::find(std::int64_t id) const {
  const auto it = std::lower_bound(
      events_.begin(), events_.end(), id,
      [](const MemoryEvent& e, std::int64_t v) { return e.id < v; });
  if (it == events_.end() || it->id != id) return nullptr;
  return &*it;
}

std::size_t MemoryStore::layer_size(const std::string& ticker, Layer layer) const {
  std::size_t n = 0;
  for (const MemoryEvent& e : events_)
    if (e.layer == layer && e.ticker == ticker) ++n;
  return n;
}

void MemoryStore::restore_event(MemoryEvent event) {
  if (find(event.id) != nullptr)
    raise(Errc::DuplicateId, "event id " + std::to_string(event.id) + " already present");
  next_id_ = std::max(next_id_, event.id + 1);
  const auto it = std::lower_bound(
      events_.begin(), events_.end(), event.id,
      [](const MemoryEvent& e, std::int64_t v) { return e.id < v; });
  events_.insert(it, std::move(event));
}

namespace {

nlohmann::ordered_json event_to_json(const MemoryEvent& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  j["ticker"] = e.ticker;
  j["layer"] = layer_name(e.layer);
  j["text"] = e.text;
  j["vector"] = std::vector<double>(e.vector.values().begin(), e.vector.values().end());
  j["anchor_date"] = e.anchor_date.to_string();
  j["importance_value"] = e.importance_value;
  j["access_bonus"] = e.access_bonus;
  j["access_count"] = e.access_count;
  j["source_kind"] = source_kind_name(e.source_kind);
  return j;
}

MemoryEvent event_from_json(const nlohmann::json& j) {
  MemoryEvent e;
  e.id = j.at("id").get<std::int64_t>();
  e.ticker = j.at("ticker").get<std::string>();
  const auto layer = layer_from_name(j.at("layer").get<std::string>());
  if (!layer) raise(Errc::SchemaMismatch, "unknown layer in snapshot");
  e.layer = *layer;
  e.text = j.at("text").get<std::string>();
  e.vector = embed::EmbeddingVector(j.at("vector").get<std::vector<double>>());
  const auto date = Date::try_parse(j.at("anchor_date").get<std::string>());
  if (!date) raise(Errc::SchemaMismatch, "bad anchor_date in snapshot");
  e.anchor_date = *date;
  e.importance_value = j.at("importance_value").get<int>();
  e.access_bonus = j.at("access_bonus").get<int>();
  e.access_count = j.at("access_count").get<int>();
  const auto kind = source_kind_from_name(j.at("source_kind").get<std::string>());
  if (!kind) raise(Errc::SchemaMismatch, "unknown source_kind in snapshot");
  e.source_kind = *kind;
  return e;
}

}  // namespace

std::string MemoryStore::snapshot_string() const {
  std::ostringstream out;
  for (const MemoryEvent& e : events_) out << event_to_json(e).dump() << '\n';
  return out.str();
}

void MemoryStore::save_snapshot(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot write " + path.string());
  out << snapshot_string();
}

MemoryStore MemoryStore::load_snapshot(const std::filesystem::path& path, LayerParamsSet params,
                                       std::uint64_t seed, int promotion_threshold) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());
  MemoryStore store(params, seed, promotion_threshold);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      store.restore_event(event_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      raise(Errc::SchemaMismatch,
            path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return store;
}

}  // namespace finmem::memory
