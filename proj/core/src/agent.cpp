#include "finmem/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "finmem/errors.hpp"

namespace finmem::agent {

const char* action_name(Action action) {
  switch (action) {
    case Action::Buy: return "buy";
    case Action::Sell: return "sell";
    case Action::Hold: return "hold";
    case Action::NoOp: return "noop";
  }
  return "hold";
}

std::optional<Action> action_from_name(std::string_view name) {
  if (name == "buy") return Action::Buy;
  if (name == "sell") return Action::Sell;
  if (name == "hold") return Action::Hold;
  if (name == "noop") return Action::NoOp;
  return std::nullopt;
}

const char* risk_mode_name(RiskMode mode) {
  switch (mode) {
    case RiskMode::RiskSeeking: return "risk_seeking";
    case RiskMode::RiskAverse: return "risk_averse";
    case RiskMode::SelfAdaptive: return "self_adaptive";
  }
  return "self_adaptive";
}

std::optional<RiskMode> risk_mode_from_name(std::string_view name) {
  if (name == "risk_seeking") return RiskMode::RiskSeeking;
  if (name == "risk_averse") return RiskMode::RiskAverse;
  if (name == "self_adaptive") return RiskMode::SelfAdaptive;
  return std::nullopt;
}

const char* effective_risk_name(EffectiveRisk risk) {
  return risk == EffectiveRisk::Seeking ? "seeking" : "averse";
}

namespace {

std::string format_fraction(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::string format_pct(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f%%", value);
  return buf;
}

std::string join_ids(const std::vector<std::int64_t>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

AgentProfile build_profile(const std::string& ticker, const data::Warehouse& warehouse,
                           Date train_start, Date train_end,
                           const std::map<std::string, std::string>& sector_metadata,
                           RiskMode risk, int switch_window) {
  const auto meta = sector_metadata.find(ticker);
  if (meta == sector_metadata.end())
    raise(Errc::UnknownTicker, "no sector metadata for '" + ticker + "'");

  const data::PriceSeries& prices = warehouse.prices(ticker);
  const auto days = prices.trading_dates(train_start, train_end);
  if (days.size() < 2)
    raise(Errc::EmptyWindow, "training window " + train_start.to_string() + ".." +
                                 train_end.to_string() + " has " +
                                 std::to_string(days.size()) + " trading day(s); need >= 2");

  const double first = prices.row_at(days.front()).adj_close;
  const double last = prices.row_at(days.back()).adj_close;
  const double window_return_pct = 100.0 * std::log(last / first);

  AgentProfile profile;
  profile.ticker = ticker;
  profile.sector_background = meta->second;
  profile.history_overview =
      "Over the training window " + days.front().to_string() + " to " +
      days.back().to_string() + ", " + ticker + " moved from an adjusted close of " +
      format_fraction(first) + " to " + format_fraction(last) +
      ", a cumulative return of " + format_pct(window_return_pct) + ".";
  profile.risk = risk;
  profile.switch_window = switch_window;
  return profile;
}

EffectiveRisk effective_risk(const AgentProfile& profile,
                             std::span<const double> realized_returns) {
  switch (profile.risk) {
    case RiskMode::RiskSeeking: return EffectiveRisk::Seeking;
    case RiskMode::RiskAverse: return EffectiveRisk::Averse;
    case RiskMode::SelfAdaptive: break;
  }
  const std::size_t n = std::min<std::size_t>(realized_returns.size(),
                                              static_cast<std::size_t>(profile.switch_window));
  double sum = 0.0;  // days with no history count as zero return
  for (std::size_t i = realized_returns.size() - n; i < realized_returns.size(); ++i)
    sum += realized_returns[i];
  return sum < 0.0 ? EffectiveRisk::Averse : EffectiveRisk::Seeking;
}

std::vector<std::int64_t> CitedIds::all() const {
  std::vector<std::int64_t> out;
  out.reserve(shallow.size() + intermediate.size() + deep.size());
  out.insert(out.end(), shallow.begin(), shallow.end());
  out.insert(out.end(), intermediate.begin(), intermediate.end());
  out.insert(out.end(), deep.begin(), deep.end());
  return out;
}

std::string CitedIds::to_log_string() const {
  std::string out = "s=";
  for (std::size_t i = 0; i < shallow.size(); ++i)
    out += (i ? "|" : "") + std::to_string(shallow[i]);
  out += ";i=";
  for (std::size_t i = 0; i < intermediate.size(); ++i)
    out += (i ? "|" : "") + std::to_string(intermediate[i]);
  out += ";d=";
  for (std::size_t i = 0; i < deep.size(); ++i)
    out += (i ? "|" : "") + std::to_string(deep[i]);
  return out;
}

TradingAgent::TradingAgent(AgentProfile profile, AgentConfig config, memory::MemoryStore& store,
                           embed::Embedder& embedder, const llm::Gateway& gateway)
    : profile_(std::move(profile)), config_(config), store_(&store), embedder_(&embedder),
      gateway_(&gateway) {}

EffectiveRisk TradingAgent::current_risk() const {
  return effective_risk(profile_, realized_returns_);
}

std::string TradingAgent::query_text(Date date) const {
  const auto& templates = gateway_->templates();
  const std::string& risk_text = current_risk() == EffectiveRisk::Seeking
                                     ? templates.risk_seeking_text()
                                     : templates.risk_averse_text();
  return "Trading inquiry: choose an action for " + profile_.ticker + " on " +
         date.to_string() + ".\n" + risk_text;
}

void TradingAgent::record_realized_return(Date, double value) {
  realized_returns_.push_back(value);
}

void TradingAgent::absorb_documents(std::span<const data::RawDocument* const> documents,
                                    Date date) {
  std::vector<const data::RawDocument*> ordered(documents.begin(), documents.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const data::RawDocument* a, const data::RawDocument* b) { return a->id < b->id; });

  for (const data::RawDocument* doc : ordered) {
    if (doc->date > date)
      raise(Errc::FutureEvent, "document " + doc->id + " dated after decision day");
    llm::PromptRequest request;
    request.template_id = llm::TemplateId::Summarize;
    request.temperature = config_.temperature;
    request.slots = {
        {"ticker", profile_.ticker},
        {"kind", data::doc_kind_name(doc->kind)},
        {"date", doc->date.to_string()},
        {"document_text", doc->text},
    };
    llm::StructuredResponse response;
    try {
      response = gateway_->complete(request);
    } catch (const Error& e) {
      if (e.code() != Errc::ValidationExhausted) throw;
      skipped_.push_back({doc->id, date, e.what()});
      continue;
    }
    const std::string insight = response.payload["summary"].get<std::string>() +
                                " (sentiment: " +
                                response.payload["sentiment"].get<std::string>() + ")";
    memory::Layer layer = memory::Layer::Shallow;
    memory::SourceKind source = memory::SourceKind::News;
    switch (doc->kind) {
      case data::DocKind::News: break;
      case data::DocKind::Filing10Q:
        layer = memory::Layer::Intermediate;
        source = memory::SourceKind::Filing10Q;
        break;
      case data::DocKind::Filing10K:
        layer = memory::Layer::Deep;
        source = memory::SourceKind::Filing10K;
        break;
    }
    store_->ingest(insight, profile_.ticker, layer, date, embedder_->embed(insight), source);
    ++documents_ingested_;
  }
}

MarketIndication TradingAgent::observe(Phase phase, const data::PriceView& prices,
                                       Date date) const {
  MarketIndication indication;
  indication.phase = phase;
  if (phase == Phase::Train) {
    indication.train_label = prices.direction_label(date);
  } else {
    indication.trailing_return =
        prices.trailing_cumulative_return(date, config_.observation_window);
  }
  return indication;
}

llm::SlotMap TradingAgent::common_reflection_slots(const memory::RetrievalResult& retrieval,
                                                   Date date) const {
  llm::SlotMap slots;
  slots["ticker"] = profile_.ticker;
  slots["date"] = date.to_string();
  slots["profile"] = profile_.sector_background + "\n" + profile_.history_overview;
  const auto& templates = gateway_->templates();
  slots["risk_paragraph"] = current_risk() == EffectiveRisk::Seeking
                                ? templates.risk_seeking_text()
                                : templates.risk_averse_text();

  static constexpr std::pair<memory::Layer, const char*> kLayerSlots[] = {
      {memory::Layer::Shallow, "shallow"},
      {memory::Layer::Intermediate, "intermediate"},
      {memory::Layer::Deep, "deep"},
  };
  for (const auto& [layer, name] : kLayerSlots) {
    std::string block;
    std::vector<std::int64_t> ids;
    for (const memory::RetrievedEvent& r : retrieval.layer(layer)) {
      if (!block.empty()) block += '\n';
      block += "[" + std::to_string(r.event.id) + "] " + r.event.text;
      ids.push_back(r.event.id);
    }
    slots[std::string(name) + "_memories"] = block.empty() ? "none" : block;
    slots[std::string(name) + "_ids"] = join_ids(ids);
  }
  return slots;
}

ImmediateReflection TradingAgent::reflect_immediate(const MarketIndication& indication,
                                                    const memory::RetrievalResult& retrieval,
                                                    Phase phase, Date date) {
  llm::PromptRequest request;
  request.template_id = phase == Phase::Train ? llm::TemplateId::ImmediateReflectTrain
                                              : llm::TemplateId::ImmediateReflectTest;
  request.temperature = config_.temperature;
  request.slots = common_reflection_slots(retrieval, date);
  if (phase == Phase::Train) {
    request.slots["train_label"] =
        data::direction_label_name(indication.train_label.value());
  } else {
    request.slots["trailing_return"] = format_fraction(indication.trailing_return.value());
    request.slots["window_days"] = std::to_string(config_.observation_window);
  }

  const llm::StructuredResponse response = gateway_->complete(request);

  ImmediateReflection reflection;
  reflection.date = date;
  if (phase == Phase::Test) {
    const std::string d = response.payload["direction"].get<std::string>();
    reflection.direction = d == "Buy" ? Action::Buy : d == "Sell" ? Action::Sell : Action::Hold;
  }
  reflection.rationale = response.payload["rationale"].get<std::string>();
  const auto& cited = response.payload["cited_ids"];
  for (const auto& v : cited["shallow"]) reflection.cited.shallow.push_back(v.get<std::int64_t>());
  for (const auto& v : cited["intermediate"])
    reflection.cited.intermediate.push_back(v.get<std::int64_t>());
  for (const auto& v : cited["deep"]) reflection.cited.deep.push_back(v.get<std::int64_t>());

  const auto all = reflection.cited.all();
  store_->register_access(all, date);

  reflections_.push_back(reflection);
  return reflection;
}

ExtendedReflection TradingAgent::reflect_extended(Date date) {
  if (reflections_.empty())
    raise(Errc::InsufficientHistory, "extended reflection needs a prior immediate reflection");

  const int m = config_.observation_window;
  const int covered = std::min<int>(m, static_cast<int>(realized_returns_.size()));
  double window_return = 0.0;
  for (int i = 0; i < covered; ++i)
    window_return += realized_returns_[realized_returns_.size() - 1 - i];

  std::string history;
  const int reflections = std::min<int>(m, static_cast<int>(reflections_.size()));
  for (int i = reflections; i > 0; --i) {
    const ImmediateReflection& r = reflections_[reflections_.size() - i];
    if (!history.empty()) history += '\n';
    history += r.date.to_string() + ": " + r.rationale;
  }

  llm::PromptRequest request;
  request.template_id = llm::TemplateId::ExtendedReflect;
  request.temperature = config_.temperature;
  request.slots = {
      {"ticker", profile_.ticker},
      {"date", date.to_string()},
      {"window_days", std::to_string(covered)},
      {"window_return", format_fraction(window_return)},
      {"reflection_history", history.empty() ? "none" : history},
  };

  ExtendedReflection extended;
  extended.window_m = covered;
  extended.window_return = window_return;
  extended.date = date;
  extended.trend_summary =
      gateway_->complete(request).payload["trend_summary"].get<std::string>();

  store_->ingest(extended.trend_summary, profile_.ticker, memory::Layer::Deep, date,
                 embedder_->embed(extended.trend_summary),
                 memory::SourceKind::ExtendedReflection);
  extended_reflections_.push_back(extended);
  return extended;
}

TradeDecision TradingAgent::step(Date date, Phase phase, const data::PriceView& prices,
                                 std::span<const data::RawDocument* const> documents) {
  TradeDecision decision;
  decision.date = date;
  decision.risk = current_risk();

  absorb_documents(documents, date);
  store_->decay_and_purge(date);

  const MarketIndication indication = observe(phase, prices, date);

  const embed::EmbeddingVector query = embedder_->embed(query_text(date));
  const memory::RetrievalResult retrieval =
      store_->retrieve_top_k(profile_.ticker, query, date, config_.top_k);

  RetrievalStats stats;
  stats.date = date;
  stats.k = config_.top_k;
  for (memory::Layer layer : memory::kAllLayers) {
    stats.layer_sizes[static_cast<int>(layer)] =
        static_cast<int>(store_->layer_size(profile_.ticker, layer));
    stats.retrieved[static_cast<int>(layer)] =
        static_cast<int>(retrieval.layer(layer).size());
  }
  retrieval_stats_.push_back(stats);

  try {
    const ImmediateReflection reflection = reflect_immediate(indication, retrieval, phase, date);
    decision.action = phase == Phase::Train ? Action::NoOp
                                            : reflection.direction.value_or(Action::Hold);
    decision.rationale = reflection.rationale;
    decision.cited = reflection.cited;
  } catch (const Error& e) {
    if (e.code() != Errc::ValidationExhausted) throw;
    decision.action = phase == Phase::Train ? Action::NoOp : Action::Hold;
    decision.rationale = "validation failure";
    decision.degraded = true;
    reflections_.push_back({date, std::nullopt, decision.rationale, {}});
  }

  if (phase == Phase::Test) {
    try {
      reflect_extended(date);
    } catch (const Error& e) {
      if (e.code() != Errc::ValidationExhausted) throw;
      // Record the window locally so each test day still leaves one deep event.
      const int covered = std::min<int>(config_.observation_window,
                                        static_cast<int>(realized_returns_.size()));
      double window_return = 0.0;
      for (int i = 0; i < covered; ++i)
        window_return += realized_returns_[realized_returns_.size() - 1 - i];
      const std::string text = "Across the last " + std::to_string(covered) +
                               " sessions the realized window return was " +
                               format_fraction(window_return) + ".";
      store_->ingest(text, profile_.ticker, memory::Layer::Deep, date,
                     embedder_->embed(text), memory::SourceKind::ExtendedReflection);
      extended_reflections_.push_back({covered, text, window_return, date});
      decision.degraded = true;
    }
  }

  return decision;
}

}  // namespace finmem::agent
