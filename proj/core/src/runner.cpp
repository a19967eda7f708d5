#include "finmem/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "finmem/errors.hpp"
#include "finmem/mock_provider.hpp"
#include "finmem/remote.hpp"
#include "finmem/rng.hpp"

namespace finmem::runner {

data::Warehouse load_warehouse(const RunConfig& config) {
  data::Warehouse warehouse;
  warehouse.add_prices(data::load_ohlcv(config.ohlcv_path, config.ticker));
  warehouse.add_documents(data::load_documents(config.documents_path));
  return warehouse;
}

RunOutcome execute(const RunConfig& config, const data::Warehouse& warehouse,
                   backtest::CausalityTrace* trace) {
  config.validate();

  memory::MemoryStore store(config.layers, config.seed, config.promotion_threshold);

  auto embedder = std::make_unique<embed::MemoizingEmbedder>(
      std::make_unique<embed::HashedTokenEmbedder>(config.embed_dim));

  std::shared_ptr<llm::Provider> provider;
  if (config.provider == "mock") {
    provider = std::make_shared<llm::MockProvider>(llm::Rulebook::load(config.rulebook_path));
  } else {
    provider = llm::make_remote_provider({});
  }

  llm::Gateway gateway(llm::TemplateLibrary::load_dir(config.templates_dir), provider,
                       config.max_retries);

  const auto metadata = load_sector_metadata(config.metadata_path);
  const agent::AgentProfile profile =
      agent::build_profile(config.ticker, warehouse, config.train_start, config.train_end,
                           metadata, config.risk, config.switch_window);

  agent::AgentConfig agent_config;
  agent_config.top_k = config.k_top;
  agent_config.observation_window = config.m_window;
  agent_config.temperature = config.temperature;
  agent::TradingAgent trader(profile, agent_config, store, *embedder, gateway);

  backtest::SimulationSpec spec;
  spec.ticker = config.ticker;
  spec.train_start = config.train_start;
  spec.train_end = config.train_end;
  spec.test_start = config.test_start;
  spec.test_end = config.test_end;
  spec.risk_free_daily = config.risk_free_daily;
  spec.annualize_sharpe = config.annualize_sharpe;

  RunOutcome outcome;
  outcome.result = backtest::run(spec, trader, warehouse, trace);
  outcome.retrieval_stats = trader.retrieval_stats();
  outcome.skipped_documents = trader.skipped_documents();
  outcome.documents_ingested = trader.documents_ingested();
  outcome.events_final = store.size();
  outcome.events_purged = store.total_purged();
  outcome.memory_snapshot = store.snapshot_string();
  return outcome;
}

RunOutcome execute(const RunConfig& config) {
  config.validate();
  const data::Warehouse warehouse = load_warehouse(config);
  return execute(config, warehouse);
}

namespace {

nlohmann::ordered_json metrics_json(const backtest::PerformanceReport& report) {
  nlohmann::ordered_json j;
  j["cumulative_return_pct"] = report.cumulative_return_pct;
  j["sharpe"] = report.sharpe;
  j["daily_volatility_pct"] = report.daily_volatility_pct;
  j["annualized_volatility_pct"] = report.annualized_volatility_pct;
  j["max_drawdown_pct"] = report.max_drawdown_pct;
  j["degenerate"] = report.degenerate;
  return j;
}

nlohmann::ordered_json report_json(const RunConfig& config, const RunOutcome& outcome,
                                   const std::string& label,
                                   const backtest::PerformanceReport& report) {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["metrics"] = metrics_json(report);
  nlohmann::ordered_json meta;
  meta["ticker"] = config.ticker;
  meta["seed"] = config.seed;
  meta["provider"] = config.provider;
  meta["k_top"] = config.k_top;
  meta["m_window"] = config.m_window;
  meta["switch_window"] = config.switch_window;
  meta["promotion_threshold"] = config.promotion_threshold;
  meta["risk"] = agent::risk_mode_name(config.risk);
  meta["temperature"] = config.temperature;
  meta["train_start"] = config.train_start.to_string();
  meta["train_end"] = config.train_end.to_string();
  meta["test_start"] = config.test_start.to_string();
  meta["test_end"] = config.test_end.to_string();
  meta["sharpe_annualized"] = config.annualize_sharpe;
  meta["risk_free_daily"] = config.risk_free_daily;
  nlohmann::ordered_json resolved;
  for (const auto& [k, v] : config.to_key_values()) resolved[k] = v;
  meta["config"] = resolved;
  j["meta"] = meta;
  nlohmann::ordered_json counts;
  counts["train_days"] = outcome.result.train_days;
  counts["test_days"] = outcome.result.test_days;
  counts["documents_ingested"] = outcome.documents_ingested;
  counts["documents_skipped"] = outcome.skipped_documents.size();
  counts["events_final"] = outcome.events_final;
  counts["events_purged"] = outcome.events_purged;
  j["counts"] = counts;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot write " + path.string());
  out << text;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunArtifacts write_outputs(const RunConfig& config, const RunOutcome& outcome,
                           const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunArtifacts artifacts;

  artifacts.report = out_dir / "report.json";
  write_text(artifacts.report,
             report_json(config, outcome, "agent", outcome.result.agent_report).dump(2) + "\n");

  artifacts.baseline_report = out_dir / "baseline_report.json";
  write_text(
      artifacts.baseline_report,
      report_json(config, outcome, "buy_and_hold", outcome.result.baseline_report).dump(2) +
          "\n");

  artifacts.ledger_csv = out_dir / "ledger.csv";
  {
    std::ostringstream csv;
    csv << "date,action,daily_return,equity\n";
    double log_sum = 0.0;
    for (const backtest::LedgerEntry& e : outcome.result.ledger.entries) {
      log_sum += e.daily_return;
      csv << e.date.to_string() << ',' << e.action << ',' << format_g(e.daily_return) << ','
          << format_g(std::exp(log_sum)) << '\n';
    }
    write_text(artifacts.ledger_csv, csv.str());
  }

  artifacts.decisions_csv = out_dir / "decisions.csv";
  {
    std::ostringstream csv;
    csv << "date,action,effective_risk,rationale_hash,cited_ids\n";
    for (const agent::TradeDecision& d : outcome.result.decisions) {
      char hash[32];
      std::snprintf(hash, sizeof(hash), "%016llx",
                    static_cast<unsigned long long>(fnv1a64(d.rationale)));
      csv << d.date.to_string() << ',' << agent::action_name(d.action) << ','
          << agent::effective_risk_name(d.risk) << ',' << hash << ','
          << d.cited.to_log_string() << '\n';
    }
    write_text(artifacts.decisions_csv, csv.str());
  }

  artifacts.snapshot = out_dir / "memory_snapshot.ndjson";
  write_text(artifacts.snapshot, outcome.memory_snapshot);
  return artifacts;
}

namespace {

struct ReportRow {
  std::string label;
  double values[5];
  bool degenerate;
};

constexpr const char* kMetricKeys[5] = {"cumulative_return_pct", "sharpe",
                                        "daily_volatility_pct", "annualized_volatility_pct",
                                        "max_drawdown_pct"};
constexpr const char* kMetricHeaders[5] = {"CumReturn%", "Sharpe", "DailyVol%", "AnnVol%",
                                           "MaxDD%"};
constexpr bool kHigherIsBetter[5] = {true, true, false, false, false};

ReportRow parse_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("label") || !j.contains("metrics"))
    raise(Errc::SchemaMismatch, path.string() + ": not a report file");
  ReportRow row;
  row.label = j["label"].get<std::string>();
  const nlohmann::json& metrics = j["metrics"];
  for (int i = 0; i < 5; ++i) {
    if (!metrics.contains(kMetricKeys[i]) || !metrics[kMetricKeys[i]].is_number())
      raise(Errc::SchemaMismatch,
            path.string() + ": metrics missing '" + kMetricKeys[i] + "'");
    row.values[i] = metrics[kMetricKeys[i]].get<double>();
  }
  row.degenerate = metrics.value("degenerate", false);
  return row;
}

}  // namespace

std::string compare_reports(const std::vector<std::filesystem::path>& report_paths) {
  if (report_paths.size() < 2)
    raise(Errc::InvalidConfig, "compare needs at least 2 report files");
  std::vector<ReportRow> rows;
  rows.reserve(report_paths.size());
  for (const auto& path : report_paths) rows.push_back(parse_report(path));

  // Best row per column; ties leave the column unmarked.
  int best[5];
  for (int c = 0; c < 5; ++c) {
    best[c] = 0;
    bool tie = false;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double lhs = rows[r].values[c], rhs = rows[best[c]].values[c];
      if (lhs == rhs) {
        tie = tie || static_cast<int>(r) != best[c];
      } else if (kHigherIsBetter[c] ? lhs > rhs : lhs < rhs) {
        best[c] = static_cast<int>(r);
        tie = false;
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) != best[c] && rows[r].values[c] == rows[best[c]].values[c])
        tie = true;
    }
    if (tie) best[c] = -1;
  }

  std::size_t label_width = 5;
  for (const ReportRow& row : rows) label_width = std::max(label_width, row.label.size());

  std::ostringstream out;
  out << std::string(label_width, ' ');
  for (int c = 0; c < 5; ++c) {
    char cell[32];
    std::snprintf(cell, sizeof(cell), "  %12s", kMetricHeaders[c]);
    out << cell;
  }
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r].label << std::string(label_width - rows[r].label.size(), ' ');
    for (int c = 0; c < 5; ++c) {
      char value[32];
      std::snprintf(value, sizeof(value), "%.4f%s", rows[r].values[c],
                    best[c] == static_cast<int>(r) ? "*" : " ");
      char cell[48];
      std::snprintf(cell, sizeof(cell), "  %12s", value);
      out << cell;
    }
    if (rows[r].degenerate) out << "  (degenerate)";
    out << '\n';
  }
  return out.str();
}

TrialStats run_trials(const RunConfig& config, int trials, bool parallel,
                      const std::filesystem::path& out_dir) {
  if (trials < 1) raise(Errc::InvalidConfig, "trials: must be >= 1");
  const data::Warehouse warehouse = load_warehouse(config);

  std::vector<backtest::PerformanceReport> reports(trials);
  const auto one_trial = [&](int i) {
    RunConfig trial_config = config;
    trial_config.seed = config.seed + static_cast<std::uint64_t>(i);
    RunOutcome outcome = execute(trial_config, warehouse);
    write_outputs(trial_config, outcome, out_dir / ("trial_" + std::to_string(i)));
    return outcome.result.agent_report;
  };

  if (parallel) {
    std::vector<std::future<backtest::PerformanceReport>> futures;
    futures.reserve(trials);
    for (int i = 0; i < trials; ++i)
      futures.push_back(std::async(std::launch::async, one_trial, i));
    for (int i = 0; i < trials; ++i) reports[i] = futures[i].get();
  } else {
    for (int i = 0; i < trials; ++i) reports[i] = one_trial(i);
  }

  TrialStats stats;
  stats.trials = trials;
  for (const backtest::PerformanceReport& r : reports) {
    stats.mean_cumulative_return_pct += r.cumulative_return_pct / trials;
    stats.mean_sharpe += r.sharpe / trials;
    stats.mean_daily_volatility_pct += r.daily_volatility_pct / trials;
    stats.mean_annualized_volatility_pct += r.annualized_volatility_pct / trials;
    stats.mean_max_drawdown_pct += r.max_drawdown_pct / trials;
  }
  return stats;
}

}  // namespace finmem::runner
