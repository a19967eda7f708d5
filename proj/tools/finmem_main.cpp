// finmem command-line front end: ingest / run / compare.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 provider error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finmem/config.hpp"
#include "finmem/errors.hpp"
#include "finmem/market_data.hpp"
#include "finmem/runner.hpp"

namespace {

int exit_code_for(const finmem::Error& e) {
  switch (e.category()) {
    case finmem::ErrorCategory::Config: return 2;
    case finmem::ErrorCategory::Data: return 3;
    case finmem::ErrorCategory::Provider: return 4;
    case finmem::ErrorCategory::Internal: return 1;
  }
  return 1;
}

finmem::Date parse_date_option(const std::string& value, const char* name) {
  const auto date = finmem::Date::try_parse(value);
  if (!date)
    finmem::raise(finmem::Errc::InvalidConfig,
                  std::string(name) + ": expected YYYY-MM-DD, got '" + value + "'");
  return *date;
}

struct RunCliState {
  std::string ticker, ohlcv, documents, metadata, rulebook;
  std::string templates = "templates";
  std::string out = "out";
  std::string train_start, train_end, test_start, test_end;
  std::string risk = "self_adaptive";
  std::string provider = "mock";
  int k_top = 5, m_window = 5, switch_window = 3, promotion_threshold = 3;
  int max_retries = 2, embed_dim = 256, trials = 1;
  double temperature = 0.7, risk_free_daily = 0.0;
  bool no_annualize_sharpe = false;
  bool parallel = false;
  bool print_config = false;
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;

  finmem::RunConfig to_config() const {
    finmem::RunConfig cfg;
    cfg.ticker = ticker;
    cfg.ohlcv_path = ohlcv;
    cfg.documents_path = documents;
    cfg.metadata_path = metadata;
    cfg.rulebook_path = rulebook;
    cfg.templates_dir = templates;
    cfg.out_dir = out;
    cfg.train_start = parse_date_option(train_start, "train-start");
    cfg.train_end = parse_date_option(train_end, "train-end");
    cfg.test_start = parse_date_option(test_start, "test-start");
    cfg.test_end = parse_date_option(test_end, "test-end");
    cfg.k_top = k_top;
    cfg.m_window = m_window;
    cfg.switch_window = switch_window;
    cfg.promotion_threshold = promotion_threshold;
    cfg.max_retries = max_retries;
    cfg.embed_dim = embed_dim;
    const auto mode = finmem::agent::risk_mode_from_name(risk);
    if (!mode)
      finmem::raise(finmem::Errc::InvalidConfig,
                    "risk: must be risk_seeking|risk_averse|self_adaptive, got '" + risk + "'");
    cfg.risk = *mode;
    cfg.provider = provider;
    cfg.temperature = temperature;
    cfg.risk_free_daily = risk_free_daily;
    cfg.annualize_sharpe = !no_annualize_sharpe;
    cfg.seed = seed;
    cfg.seed_set = seed_option && seed_option->count() > 0;
    return cfg;
  }
};

void add_run_options(CLI::App* run, RunCliState& s) {
  run->add_option("--ticker", s.ticker, "Ticker symbol to trade");
  run->add_option("--ohlcv", s.ohlcv, "OHLCV CSV path");
  run->add_option("--documents", s.documents, "Documents NDJSON path");
  run->add_option("--metadata", s.metadata, "Per-ticker sector metadata JSON");
  run->add_option("--rulebook", s.rulebook, "Mock provider rulebook JSON");
  run->add_option("--templates", s.templates, "Prompt template directory");
  run->add_option("--out", s.out, "Output directory");
  run->add_option("--train-start", s.train_start, "Train window start (YYYY-MM-DD)");
  run->add_option("--train-end", s.train_end, "Train window end");
  run->add_option("--test-start", s.test_start, "Test window start");
  run->add_option("--test-end", s.test_end, "Test window end");
  run->add_option("--k-top", s.k_top, "Memories retrieved per layer");
  run->add_option("--m-window", s.m_window, "Observation / extended-reflection window (days)");
  run->add_option("--switch-window", s.switch_window, "Self-adaptive risk switch window (days)");
  run->add_option("--promotion-threshold", s.promotion_threshold,
                  "Citations required for layer promotion");
  run->add_option("--max-retries", s.max_retries, "Gateway validation retries");
  run->add_option("--embed-dim", s.embed_dim, "Local embedder dimension");
  run->add_option("--risk", s.risk, "risk_seeking|risk_averse|self_adaptive");
  run->add_option("--provider", s.provider, "mock|remote");
  run->add_option("--temperature", s.temperature, "Sampling temperature");
  run->add_option("--risk-free-daily", s.risk_free_daily, "Daily risk-free rate");
  run->add_flag("--no-annualize-sharpe", s.no_annualize_sharpe,
                "Report the unannualized Sharpe ratio");
  s.seed_option = run->add_option("--seed", s.seed, "Run seed (required for mock runs)");
  run->add_option("--trials", s.trials, "Repeat the run over consecutive seeds");
  run->add_flag("--parallel", s.parallel, "Run trials concurrently");
  run->add_flag("--print-config", s.print_config,
                "Print the resolved configuration and exit");
  run->set_config("--config", "", "Read options from a config file");
}

int cmd_ingest(const std::string& ohlcv, const std::string& documents,
               const std::string& ticker) {
  finmem::data::Warehouse warehouse;
  warehouse.add_prices(finmem::data::load_ohlcv(ohlcv, ticker));
  if (!documents.empty())
    warehouse.add_documents(finmem::data::load_documents(documents));
  const auto summary = warehouse.summarize(ticker);
  std::printf("ticker          %s\n", summary.ticker.c_str());
  std::printf("price rows      %zu\n", summary.price_rows);
  if (summary.first_date && summary.last_date)
    std::printf("date coverage   %s .. %s\n", summary.first_date->to_string().c_str(),
                summary.last_date->to_string().c_str());
  std::printf("news            %zu\n", summary.news);
  std::printf("10-Q filings    %zu\n", summary.filings_10q);
  std::printf("10-K filings    %zu\n", summary.filings_10k);
  if (summary.unassigned_documents)
    std::printf("unassigned      %zu (dated after the last trading day)\n",
                summary.unassigned_documents);
  return 0;
}

int cmd_run(CLI::App* run, RunCliState& s) {
  if (s.print_config) {
    std::cout << run->config_to_str(true, true);
    return 0;
  }
  const finmem::RunConfig config = s.to_config();
  config.validate();

  if (s.trials > 1) {
    const auto stats = finmem::runner::run_trials(config, s.trials, s.parallel, config.out_dir);
    std::printf("trials                      %d (seeds %llu..%llu)\n", stats.trials,
                static_cast<unsigned long long>(config.seed),
                static_cast<unsigned long long>(config.seed + stats.trials - 1));
    std::printf("mean cumulative return %%    %.4f\n", stats.mean_cumulative_return_pct);
    std::printf("mean sharpe                 %.4f\n", stats.mean_sharpe);
    std::printf("mean daily volatility %%     %.4f\n", stats.mean_daily_volatility_pct);
    std::printf("mean annualized vol %%       %.4f\n", stats.mean_annualized_volatility_pct);
    std::printf("mean max drawdown %%         %.4f\n", stats.mean_max_drawdown_pct);
    return 0;
  }

  const finmem::runner::RunOutcome outcome = finmem::runner::execute(config);
  const auto artifacts = finmem::runner::write_outputs(config, outcome, config.out_dir);
  std::cout << finmem::runner::compare_reports({artifacts.report, artifacts.baseline_report});
  std::printf("\ntrain days %d, test days %d, documents ingested %d (skipped %zu)\n",
              outcome.result.train_days, outcome.result.test_days, outcome.documents_ingested,
              outcome.skipped_documents.size());
  std::printf("memory events: %zu live, %lld purged\n", outcome.events_final,
              static_cast<long long>(outcome.events_purged));
  std::printf("outputs in %s\n", config.out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered-memory trading agent backtester"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_ohlcv, ingest_documents, ingest_ticker;
  CLI::App* ingest = app.add_subcommand("ingest", "Load and summarize a data warehouse");
  ingest->add_option("--ohlcv", ingest_ohlcv, "OHLCV CSV path")->required();
  ingest->add_option("--documents", ingest_documents, "Documents NDJSON path");
  ingest->add_option("--ticker", ingest_ticker, "Ticker symbol")->required();

  // run
  RunCliState run_state;
  CLI::App* run = app.add_subcommand("run", "Execute a train-then-test simulation");
  add_run_options(run, run_state);

  // compare
  std::vector<std::string> report_paths;
  CLI::App* compare = app.add_subcommand("compare", "Tabulate metrics from report files");
  compare->add_option("reports", report_paths, "report.json files")->expected(2, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_ohlcv, ingest_documents, ingest_ticker);
    if (*run) return cmd_run(run, run_state);
    if (*compare) {
      std::vector<std::filesystem::path> paths(report_paths.begin(), report_paths.end());
      std::cout << finmem::runner::compare_reports(paths);
      return 0;
    }
  } catch (const finmem::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
