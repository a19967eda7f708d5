#include "finmem/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "finmem/errors.hpp"

namespace finmem::backtest {

namespace {

constexpr double kTradingDaysPerYear = 252.0;

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;  // unbiased (n-1)
};

Moments moments(const std::vector<LedgerEntry>& entries) {
  Moments m;
  const std::size_t n = entries.size();
  for (const LedgerEntry& e : entries) m.mean += e.daily_return;
  m.mean /= static_cast<double>(n);
  if (n < 2) return m;
  double ss = 0.0;
  for (const LedgerEntry& e : entries) {
    const double d = e.daily_return - m.mean;
    ss += d * d;
  }
  m.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  return m;
}

}  // namespace

double cumulative_return_pct(const TradeLedger& ledger) {
  if (ledger.empty()) raise(Errc::EmptyLedger, "cumulative return of an empty ledger");
  double sum = 0.0;
  for (const LedgerEntry& e : ledger.entries) sum += e.daily_return;
  return 100.0 * sum;
}

SharpeResult sharpe(const TradeLedger& ledger, double risk_free_daily, bool annualize) {
  if (ledger.size() < 2)
    raise(Errc::InsufficientData, "sharpe needs at least 2 ledger entries");
  const Moments m = moments(ledger.entries);
  if (m.stddev == 0.0) return {0.0, true};
  double value = (m.mean - risk_free_daily) / m.stddev;
  if (annualize) value *= std::sqrt(kTradingDaysPerYear);
  return {value, false};
}

VolatilityResult volatility(const TradeLedger& ledger) {
  if (ledger.size() < 2)
    raise(Errc::InsufficientData, "volatility needs at least 2 ledger entries");
  const Moments m = moments(ledger.entries);
  const double daily = 100.0 * m.stddev;
  return {daily, daily * std::sqrt(kTradingDaysPerYear)};
}

double max_drawdown_pct(const TradeLedger& ledger) {
  if (ledger.empty()) raise(Errc::EmptyLedger, "max drawdown of an empty ledger");
  double equity = 1.0;  // V_0
  double peak = 1.0;
  double worst = 0.0;
  double log_sum = 0.0;
  for (const LedgerEntry& e : ledger.entries) {
    log_sum += e.daily_return;
    equity = std::exp(log_sum);
    peak = std::max(peak, equity);
    worst = std::max(worst, (peak - equity) / peak);
  }
  return 100.0 * worst;
}

PerformanceReport performance(const TradeLedger& ledger, double risk_free_daily,
                              bool annualize_sharpe) {
  PerformanceReport report;
  report.sharpe_annualized = annualize_sharpe;
  report.risk_free_daily = risk_free_daily;
  report.cumulative_return_pct = cumulative_return_pct(ledger);
  report.max_drawdown_pct = max_drawdown_pct(ledger);
  if (ledger.size() >= 2) {
    const VolatilityResult vol = volatility(ledger);
    report.daily_volatility_pct = vol.daily_pct;
    report.annualized_volatility_pct = vol.annualized_pct;
    const SharpeResult s = sharpe(ledger, risk_free_daily, annualize_sharpe);
    report.sharpe = s.value;
    report.degenerate = s.degenerate;
  } else {
    report.degenerate = true;
  }
  return report;
}

namespace {

int action_position(agent::Action action) {
  switch (action) {
    case agent::Action::Buy: return 1;
    case agent::Action::Sell: return -1;
    default: return 0;
  }
}

}  // namespace

RunResult run(const SimulationSpec& spec, agent::TradingAgent& trader,
              const data::Warehouse& warehouse, CausalityTrace* trace) {
  const data::PriceSeries& prices = warehouse.prices(spec.ticker);
  if (prices.empty()) raise(Errc::WindowOutOfRange, spec.ticker + " has no price rows");

  if (!(spec.train_start <= spec.train_end))
    raise(Errc::WindowOutOfRange, "train window start is after its end");
  if (!(spec.test_start <= spec.test_end))
    raise(Errc::WindowOutOfRange, "test window start is after its end");
  if (!(spec.train_end < spec.test_start))
    raise(Errc::OverlappingWindows, "train window must precede the test window");

  const auto train_days = prices.trading_dates(spec.train_start, spec.train_end);
  const auto test_days = prices.trading_dates(spec.test_start, spec.test_end);
  if (train_days.empty())
    raise(Errc::WindowOutOfRange, "no trading days in the train window");
  if (test_days.empty())
    raise(Errc::WindowOutOfRange, "no trading days in the test window");
  if (!prices.next_trading_date_after(test_days.back()))
    raise(Errc::WindowOutOfRange,
          "the ledger needs one trading day after the test window end " +
              test_days.back().to_string());

  // The first test day's observation looks back M steps.
  const int m = trader.config().observation_window;
  const auto first_test_idx = prices.index_of(test_days.front());
  if (!first_test_idx || *first_test_idx < static_cast<std::size_t>(m))
    raise(Errc::WindowOutOfRange,
          "test window start needs " + std::to_string(m + 1) + " trading days of history");

  RunResult result;
  result.train_days = static_cast<int>(train_days.size());
  result.test_days = static_cast<int>(test_days.size());

  for (Date day : train_days) {
    const auto next = prices.next_trading_date_after(day);
    data::AccessMonitor monitor;
    const data::PriceView view(prices, next.value(), trace ? &monitor : nullptr);
    const auto docs = warehouse.documents_for(spec.ticker, day);
    result.decisions.push_back(trader.step(day, agent::Phase::Train, view, docs));
    if (trace) {
      CausalityTrace::Day t;
      t.decision_date = day;
      t.phase = agent::Phase::Train;
      t.price_reads = monitor.reads;
      t.max_price_read = monitor.max_requested;
      for (const auto* doc : docs)
        if (!t.max_document_date || doc->date > *t.max_document_date)
          t.max_document_date = doc->date;
      trace->days.push_back(t);
    }
  }

  std::vector<int> positions;
  positions.reserve(test_days.size());
  for (std::size_t i = 0; i < test_days.size(); ++i) {
    const Date day = test_days[i];
    if (i > 0) {
      // The previous day's return materializes with today's price.
      const Date prev = test_days[i - 1];
      const double r = std::log(prices.row_at(day).adj_close / prices.row_at(prev).adj_close) *
                       positions[i - 1];
      trader.record_realized_return(prev, r);
      result.ledger.entries.push_back({prev, positions[i - 1], r});
    }
    data::AccessMonitor monitor;
    const data::PriceView view(prices, day, trace ? &monitor : nullptr);
    const auto docs = warehouse.documents_for(spec.ticker, day);
    const agent::TradeDecision decision = trader.step(day, agent::Phase::Test, view, docs);
    positions.push_back(action_position(decision.action));
    result.decisions.push_back(decision);
    if (trace) {
      CausalityTrace::Day t;
      t.decision_date = day;
      t.phase = agent::Phase::Test;
      t.price_reads = monitor.reads;
      t.max_price_read = monitor.max_requested;
      for (const auto* doc : docs)
        if (!t.max_document_date || doc->date > *t.max_document_date)
          t.max_document_date = doc->date;
      trace->days.push_back(t);
    }
  }

  // Final test day settles against the next trading day after the window.
  {
    const Date last = test_days.back();
    const Date next = prices.next_trading_date_after(last).value();
    const double r = std::log(prices.row_at(next).adj_close / prices.row_at(last).adj_close) *
                     positions.back();
    result.ledger.entries.push_back({last, positions.back(), r});
  }

  TradeLedger baseline;
  baseline.entries.reserve(test_days.size());
  for (std::size_t i = 0; i < test_days.size(); ++i) {
    const Date day = test_days[i];
    const Date next = i + 1 < test_days.size()
                          ? test_days[i + 1]
                          : prices.next_trading_date_after(test_days.back()).value();
    baseline.entries.push_back(
        {day, 1, std::log(prices.row_at(next).adj_close / prices.row_at(day).adj_close)});
  }

  result.agent_report = performance(result.ledger, spec.risk_free_daily, spec.annualize_sharpe);
  result.baseline_report = performance(baseline, spec.risk_free_daily, spec.annualize_sharpe);
  return result;
}

}  // namespace finmem::backtest
