#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finmem/agent.hpp"
#include "finmem/dates.hpp"
#include "finmem/market_data.hpp"

namespace finmem::backtest {

/// One test trading day: the position taken (+1 buy, 0 hold, -1 sell) and
/// the resulting daily return r_t = ln(p_{t+1}/p_t) * action_t.
struct LedgerEntry {
  Date date;
  int action = 0;
  double daily_return = 0.0;
};

struct TradeLedger {
  std::vector<LedgerEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

/// 100 * sum of daily returns.
double cumulative_return_pct(const TradeLedger& ledger);

struct SharpeResult {
  double value = 0.0;
  bool degenerate = false;  // zero return variance
};

/// mean(r - rf) / std(r), unbiased (n-1) standard deviation, scaled by
/// sqrt(252) when annualize is set.
SharpeResult sharpe(const TradeLedger& ledger, double risk_free_daily = 0.0,
                    bool annualize = true);

struct VolatilityResult {
  double daily_pct = 0.0;
  double annualized_pct = 0.0;  // daily * sqrt(252)
};

VolatilityResult volatility(const TradeLedger& ledger);

/// Largest peak-to-trough decline of the compounded equity curve
/// V_t = exp(sum r), including the V_0 = 1 origin, in percent.
double max_drawdown_pct(const TradeLedger& ledger);

struct PerformanceReport {
  double cumulative_return_pct = 0.0;
  double sharpe = 0.0;
  double daily_volatility_pct = 0.0;
  double annualized_volatility_pct = 0.0;
  double max_drawdown_pct = 0.0;
  bool degenerate = false;  // zero-variance ledger; sharpe reported as 0
  bool sharpe_annualized = true;
  double risk_free_daily = 0.0;
};

PerformanceReport performance(const TradeLedger& ledger, double risk_free_daily = 0.0,
                              bool annualize_sharpe = true);

struct SimulationSpec {
  std::string ticker;
  Date train_start, train_end, test_start, test_end;
  double risk_free_daily = 0.0;
  bool annualize_sharpe = true;
};

/// Per-day trace from the test phase causality instrumentation.
struct CausalityTrace {
  struct Day {
    Date decision_date;
    agent::Phase phase = agent::Phase::Test;
    int price_reads = 0;
    std::optional<Date> max_price_read;
    std::optional<Date> max_document_date;
  };
  std::vector<Day> days;
};

struct RunResult {
  TradeLedger ledger;                      // test days
  PerformanceReport agent_report;
  PerformanceReport baseline_report;       // buy-and-hold: +1 every test day
  std::vector<agent::TradeDecision> decisions;  // train + test days
  int train_days = 0;
  int test_days = 0;
};

/// Drives the train loop (memory building, NoOp ledger) then the test loop
/// (decisions), finalizes the ledger against realized prices, and computes
/// both reports. The agent only ever sees clamped PriceViews: train days may
/// read one day ahead (the ground label), test days nothing beyond the
/// decision date.
RunResult run(const SimulationSpec& spec, agent::TradingAgent& trader,
              const data::Warehouse& warehouse, CausalityTrace* trace = nullptr);

}  // namespace finmem::backtest
