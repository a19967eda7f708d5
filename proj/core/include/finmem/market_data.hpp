#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finmem/dates.hpp"

namespace finmem::data {

struct PriceRow {
  Date date;
  double open = 0;
  double high = 0;
  double low = 0;
  double close = 0;
  double adj_close = 0;
  std::int64_t volume = 0;
};

/// Daily OHLCV series for one ticker. Immutable after construction;
/// rows strictly ascending by date, all prices positive.
class PriceSeries {
 public:
  PriceSeries() = default;
  PriceSeries(std::string ticker, std::vector<PriceRow> rows);

  const std::string& ticker() const { return ticker_; }
  const std::vector<PriceRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }

  std::optional<std::size_t> index_of(Date date) const;
  bool has(Date date) const { return index_of(date).has_value(); }
  const PriceRow& row_at(Date date) const;  // throws DateNotFound

  /// First trading date >= date, if any.
  std::optional<Date> next_trading_date_on_or_after(Date date) const;
  /// First trading date strictly after date, if any.
  std::optional<Date> next_trading_date_after(Date date) const;

  std::vector<Date> trading_dates(Date begin, Date end) const;  // inclusive window

 private:
  std::string ticker_;
  std::vector<PriceRow> rows_;
};

enum class DocKind { News, Filing10Q, Filing10K };

const char* doc_kind_name(DocKind kind);                     // "news" | "10q" | "10k"
std::optional<DocKind> doc_kind_from_name(std::string_view);

struct RawDocument {
  std::string id;
  std::string ticker;
  Date date;
  DocKind kind = DocKind::News;
  std::string text;
};

struct DailyBundle {
  Date date;  // trading day the documents are attributed to
  std::optional<PriceRow> price_row;
  std::vector<const RawDocument*> documents;
};

/// CSV schema: header `date,open,high,low,close,adj_close,volume`,
/// ISO-8601 dates, plain decimals.
PriceSeries load_ohlcv(const std::filesystem::path& path, const std::string& ticker);
void save_ohlcv(const PriceSeries& series, const std::filesystem::path& path);

/// Newline-delimited JSON records with fields id, ticker, date, kind, text.
std::vector<RawDocument> load_documents(const std::filesystem::path& path);
void save_documents(const std::vector<RawDocument>& docs, const std::filesystem::path& path);

enum class DirectionLabel { Buy, Sell };

inline const char* direction_label_name(DirectionLabel label) {
  return label == DirectionLabel::Buy ? "Buy" : "Sell";
}

/// Ground label from the next trading day's adjusted close: Sell iff it is
/// strictly below today's, Buy on an increase or no change.
DirectionLabel direction_label(const PriceSeries& prices, Date date);

/// Sum of log(adj_close_t / adj_close_{t-1}) over the last m steps ending at
/// date. Requires m+1 trading days of history.
double trailing_cumulative_return(const PriceSeries& prices, Date date, int m);

/// Multi-ticker store of prices and documents, immutable once loaded.
/// Documents dated on non-trading days are attributed to the next trading
/// day's bundle; queries are always ticker-scoped.
class Warehouse {
 public:
  void add_prices(PriceSeries series);
  void add_documents(std::vector<RawDocument> docs);

  bool has_ticker(const std::string& ticker) const;
  const PriceSeries& prices(const std::string& ticker) const;  // throws UnknownTicker

  /// Documents attributed to the given trading day, ordered by id.
  std::vector<const RawDocument*> documents_for(const std::string& ticker, Date trading_day) const;
  DailyBundle bundle(const std::string& ticker, Date trading_day) const;

  struct Summary {
    std::string ticker;
    std::size_t price_rows = 0;
    std::optional<Date> first_date, last_date;
    std::size_t news = 0, filings_10q = 0, filings_10k = 0;
    std::size_t unassigned_documents = 0;  // dated after the last trading day
  };
  Summary summarize(const std::string& ticker) const;
  std::vector<std::string> tickers() const;

 private:
  void assign_documents(const std::string& ticker);

  std::map<std::string, PriceSeries> prices_;
  std::map<std::string, std::vector<RawDocument>> documents_;  // by ticker, sorted by id
  // ticker -> trading day -> indices into documents_[ticker]
  std::map<std::string, std::map<Date, std::vector<std::size_t>>> bundles_;
  std::map<std::string, std::size_t> unassigned_;
};

/// Counts reads made through a PriceView, used by the causality harness.
struct AccessMonitor {
  int reads = 0;
  std::optional<Date> max_requested;
  void record(Date date) {
    ++reads;
    if (!max_requested || date > *max_requested) max_requested = date;
  }
};

/// Read-only view of a PriceSeries clamped to dates <= max_visible. The
/// simulation hands the agent one of these per day, so test-phase code cannot
/// observe future rows by construction; the monitor records what was asked.
class PriceView {
 public:
  PriceView(const PriceSeries& series, Date max_visible, AccessMonitor* monitor = nullptr);

  Date max_visible() const { return max_visible_; }
  const std::string& ticker() const { return series_->ticker(); }

  bool has(Date date) const;
  const PriceRow& row_at(Date date) const;  // throws DateNotFound
  double adj_close(Date date) const { return row_at(date).adj_close; }

  DirectionLabel direction_label(Date date) const;
  double trailing_cumulative_return(Date date, int m) const;

 private:
  const PriceSeries* series_;
  Date max_visible_;
  std::size_t visible_count_;  // rows [0, visible_count_) are <= max_visible_
  AccessMonitor* monitor_;
};

}  // namespace finmem::data
