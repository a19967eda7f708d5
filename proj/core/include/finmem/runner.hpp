#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "finmem/backtest.hpp"
#include "finmem/config.hpp"
#include "finmem/market_data.hpp"

namespace finmem::runner {

struct RunOutcome {
  backtest::RunResult result;
  std::vector<agent::RetrievalStats> retrieval_stats;
  std::vector<agent::SkippedDocument> skipped_documents;
  int documents_ingested = 0;
  std::size_t events_final = 0;
  std::int64_t events_purged = 0;
  std::string memory_snapshot;  // NDJSON
};

data::Warehouse load_warehouse(const RunConfig& config);

/// Builds the full component stack (store, embedder, gateway, profile,
/// agent) from a validated config and executes train-then-test. The optional
/// trace enables the causality instrumentation.
RunOutcome execute(const RunConfig& config, const data::Warehouse& warehouse,
                   backtest::CausalityTrace* trace = nullptr);
RunOutcome execute(const RunConfig& config);

struct RunArtifacts {
  std::filesystem::path report;           // report.json (agent metrics + meta)
  std::filesystem::path baseline_report;  // baseline_report.json
  std::filesystem::path ledger_csv;       // date,action,daily_return,equity
  std::filesystem::path decisions_csv;    // date,action,effective_risk,rationale_hash,cited_ids
  std::filesystem::path snapshot;         // memory_snapshot.ndjson
};

RunArtifacts write_outputs(const RunConfig& config, const RunOutcome& outcome,
                           const std::filesystem::path& out_dir);

/// Aligned metric table for >= 2 report files; the best value per column is
/// marked (higher is better for return and sharpe, lower for volatility and
/// drawdown; ties leave a column unmarked). Throws SchemaMismatch on
/// malformed reports.
std::string compare_reports(const std::vector<std::filesystem::path>& report_paths);

struct TrialStats {
  int trials = 0;
  double mean_cumulative_return_pct = 0.0;
  double mean_sharpe = 0.0;
  double mean_daily_volatility_pct = 0.0;
  double mean_annualized_volatility_pct = 0.0;
  double mean_max_drawdown_pct = 0.0;
};

/// Runs `trials` seeds (seed, seed+1, ...) and reports per-metric means.
/// Trials are independent; `parallel` opts in to concurrent execution.
TrialStats run_trials(const RunConfig& config, int trials, bool parallel,
                      const std::filesystem::path& out_dir);

}  // namespace finmem::runner
