#include "finmem/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "finmem/errors.hpp"

namespace finmem::data {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_price(const std::string& s, int line_no, const char* column) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": bad " +
                                  std::string(column) + " value '" + s + "'");
  }
}

}  // namespace

PriceSeries::PriceSeries(std::string ticker, std::vector<PriceRow> rows)
    : ticker_(std::move(ticker)), rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end(),
            [](const PriceRow& a, const PriceRow& b) { return a.date < b.date; });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const PriceRow& r = rows_[i];
    if (i > 0 && rows_[i - 1].date == r.date)
      raise(Errc::DuplicateDate, ticker_ + ": duplicate date " + r.date.to_string());
    const double prices[] = {r.open, r.high, r.low, r.close, r.adj_close};
    for (double p : prices) {
      if (!(p > 0.0))
        raise(Errc::NonPositivePrice,
              ticker_ + " " + r.date.to_string() + ": price must be > 0");
    }
  }
}

std::optional<std::size_t> PriceSeries::index_of(Date date) const {
  const auto it = std::lower_bound(
      rows_.begin(), rows_.end(), date,
      [](const PriceRow& row, Date d) { return row.date < d; });
  if (it == rows_.end() || it->date != date) return std::nullopt;
  return static_cast<std::size_t>(it - rows_.begin());
}

const PriceRow& PriceSeries::row_at(Date date) const {
  if (auto i = index_of(date)) return rows_[*i];
  raise(Errc::DateNotFound, ticker_ + ": no row for " + date.to_string());
}

std::optional<Date> PriceSeries::next_trading_date_on_or_after(Date date) const {
  const auto it = std::lower_bound(
      rows_.begin(), rows_.end(), date,
      [](const PriceRow& row, Date d) { return row.date < d; });
  if (it == rows_.end()) return std::nullopt;
  return it->date;
}

std::optional<Date> PriceSeries::next_trading_date_after(Date date) const {
  return next_trading_date_on_or_after(date + 1);
}

std::vector<Date> PriceSeries::trading_dates(Date begin, Date end) const {
  std::vector<Date> out;
  for (const PriceRow& r : rows_) {
    if (r.date < begin) continue;
    if (r.date > end) break;
    out.push_back(r.date);
  }
  return out;
}

const char* doc_kind_name(DocKind kind) {
  switch (kind) {
    case DocKind::News: return "news";
    case DocKind::Filing10Q: return "10q";
    case DocKind::Filing10K: return "10k";
  }
  return "news";
}

std::optional<DocKind> doc_kind_from_name(std::string_view name) {
  if (name == "news") return DocKind::News;
  if (name == "10q") return DocKind::Filing10Q;
  if (name == "10k") return DocKind::Filing10K;
  return std::nullopt;
}

PriceSeries load_ohlcv(const std::filesystem::path& path, const std::string& ticker) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    raise(Errc::MalformedRow, path.string() + ": missing header");
  if (strip_cr(line) != "date,open,high,low,close,adj_close,volume")
    raise(Errc::MalformedRow, path.string() + ": unexpected header '" + line + "'");

  std::vector<PriceRow> rows;
  std::set<Date> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 7)
      raise(Errc::MalformedRow,
            "line " + std::to_string(line_no) + ": expected 7 fields, got " +
                std::to_string(fields.size()));
    PriceRow row;
    const auto date = Date::try_parse(fields[0]);
    if (!date)
      raise(Errc::MalformedRow,
            "line " + std::to_string(line_no) + ": bad date '" + fields[0] + "'");
    row.date = *date;
    row.open = parse_price(fields[1], line_no, "open");
    row.high = parse_price(fields[2], line_no, "high");
    row.low = parse_price(fields[3], line_no, "low");
    row.close = parse_price(fields[4], line_no, "close");
    row.adj_close = parse_price(fields[5], line_no, "adj_close");
    try {
      row.volume = std::stoll(fields[6]);
    } catch (const std::exception&) {
      raise(Errc::MalformedRow,
            "line " + std::to_string(line_no) + ": bad volume '" + fields[6] + "'");
    }
    if (!seen.insert(row.date).second)
      raise(Errc::DuplicateDate, "line " + std::to_string(line_no) + ": duplicate date " +
                                     row.date.to_string());
    const double prices[] = {row.open, row.high, row.low, row.close, row.adj_close};
    for (double p : prices) {
      if (!(p > 0.0))
        raise(Errc::NonPositivePrice,
              "line " + std::to_string(line_no) + ": price must be > 0");
    }
    rows.push_back(row);
  }
  return PriceSeries(ticker, std::move(rows));
}

void save_ohlcv(const PriceSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot write " + path.string());
  out << "date,open,high,low,close,adj_close,volume\n";
  char buf[256];
  for (const PriceRow& r : series.rows()) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%lld\n",
                  r.date.to_string().c_str(), r.open, r.high, r.low, r.close,
                  r.adj_close, static_cast<long long>(r.volume));
    out << buf;
  }
}

std::vector<RawDocument> load_documents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());

  std::vector<RawDocument> docs;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": " + e.what());
    }
    for (const char* field : {"id", "ticker", "date", "kind", "text"}) {
      if (!j.contains(field) || !j[field].is_string())
        raise(Errc::MissingField,
              "line " + std::to_string(line_no) + ": missing field '" + field + "'");
    }
    RawDocument doc;
    doc.id = j["id"].get<std::string>();
    doc.ticker = j["ticker"].get<std::string>();
    const auto date = Date::try_parse(j["date"].get<std::string>());
    if (!date)
      raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": bad date '" +
                                    j["date"].get<std::string>() + "'");
    doc.date = *date;
    const auto kind = doc_kind_from_name(j["kind"].get<std::string>());
    if (!kind)
      raise(Errc::UnknownKind, "line " + std::to_string(line_no) + ": kind '" +
                                   j["kind"].get<std::string>() + "'");
    doc.kind = *kind;
    doc.text = j["text"].get<std::string>();
    if (doc.text.empty())
      raise(Errc::MissingField, "line " + std::to_string(line_no) + ": empty text");
    if (!ids.insert(doc.id).second)
      raise(Errc::DuplicateId, "line " + std::to_string(line_no) + ": id '" + doc.id + "'");
    docs.push_back(std::move(doc));
  }
  return docs;
}

void save_documents(const std::vector<RawDocument>& docs, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot write " + path.string());
  for (const RawDocument& d : docs) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["ticker"] = d.ticker;
    j["date"] = d.date.to_string();
    j["kind"] = doc_kind_name(d.kind);
    j["text"] = d.text;
    out << j.dump() << '\n';
  }
}

DirectionLabel direction_label(const PriceSeries& prices, Date date) {
  const auto idx = prices.index_of(date);
  if (!idx) raise(Errc::DateNotFound, prices.ticker() + ": no row for " + date.to_string());
  if (*idx + 1 >= prices.size())
    raise(Errc::NoNextDay, date.to_string() + " is the last trading day");
  const double today = prices.rows()[*idx].adj_close;
  const double next = prices.rows()[*idx + 1].adj_close;
  return next < today ? DirectionLabel::Sell : DirectionLabel::Buy;
}

double trailing_cumulative_return(const PriceSeries& prices, Date date, int m) {
  const auto idx = prices.index_of(date);
  if (!idx) raise(Errc::DateNotFound, prices.ticker() + ": no row for " + date.to_string());
  if (m < 1) raise(Errc::InsufficientHistory, "window must be >= 1");
  if (*idx < static_cast<std::size_t>(m))
    raise(Errc::InsufficientHistory,
          "need " + std::to_string(m + 1) + " trading days ending at " + date.to_string());
  double sum = 0.0;
  for (std::size_t i = *idx - m + 1; i <= *idx; ++i) {
    sum += std::log(prices.rows()[i].adj_close / prices.rows()[i - 1].adj_close);
  }
  return sum;
}

void Warehouse::add_prices(PriceSeries series) {
  const std::string ticker = series.ticker();
  prices_[ticker] = std::move(series);
  if (documents_.count(ticker)) assign_documents(ticker);
}

void Warehouse::add_documents(std::vector<RawDocument> docs) {
  std::set<std::string> ids;
  for (const auto& [ticker, existing] : documents_) {
    for (const RawDocument& d : existing) ids.insert(d.id);
  }
  for (const RawDocument& d : docs) {
    if (!ids.insert(d.id).second)
      raise(Errc::DuplicateId, "document id '" + d.id + "' already in warehouse");
  }
  for (RawDocument& d : docs) documents_[d.ticker].push_back(std::move(d));
  for (auto& [ticker, list] : documents_) {
    std::sort(list.begin(), list.end(),
              [](const RawDocument& a, const RawDocument& b) { return a.id < b.id; });
    if (prices_.count(ticker)) assign_documents(ticker);
  }
}

void Warehouse::assign_documents(const std::string& ticker) {
  auto& bundles = bundles_[ticker];
  bundles.clear();
  unassigned_[ticker] = 0;
  const PriceSeries& series = prices_.at(ticker);
  const auto& docs = documents_.at(ticker);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto day = series.next_trading_date_on_or_after(docs[i].date);
    if (!day) {
      ++unassigned_[ticker];
      continue;
    }
    bundles[*day].push_back(i);
  }
}

bool Warehouse::has_ticker(const std::string& ticker) const {
  return prices_.count(ticker) > 0;
}

const PriceSeries& Warehouse::prices(const std::string& ticker) const {
  const auto it = prices_.find(ticker);
  if (it == prices_.end()) raise(Errc::UnknownTicker, "no prices for '" + ticker + "'");
  return it->second;
}

std::vector<const RawDocument*> Warehouse::documents_for(const std::string& ticker,
                                                         Date trading_day) const {
  std::vector<const RawDocument*> out;
  const auto tit = bundles_.find(ticker);
  if (tit == bundles_.end()) return out;
  const auto dit = tit->second.find(trading_day);
  if (dit == tit->second.end()) return out;
  const auto& docs = documents_.at(ticker);
  out.reserve(dit->second.size());
  for (std::size_t i : dit->second) out.push_back(&docs[i]);
  return out;
}

DailyBundle Warehouse::bundle(const std::string& ticker, Date trading_day) const {
  DailyBundle b;
  b.date = trading_day;
  const PriceSeries& series = prices(ticker);
  if (auto i = series.index_of(trading_day)) b.price_row = series.rows()[*i];
  b.documents = documents_for(ticker, trading_day);
  return b;
}

Warehouse::Summary Warehouse::summarize(const std::string& ticker) const {
  Summary s;
  s.ticker = ticker;
  if (const auto it = prices_.find(ticker); it != prices_.end()) {
    s.price_rows = it->second.size();
    if (!it->second.empty()) {
      s.first_date = it->second.rows().front().date;
      s.last_date = it->second.rows().back().date;
    }
  }
  if (const auto it = documents_.find(ticker); it != documents_.end()) {
    for (const RawDocument& d : it->second) {
      switch (d.kind) {
        case DocKind::News: ++s.news; break;
        case DocKind::Filing10Q: ++s.filings_10q; break;
        case DocKind::Filing10K: ++s.filings_10k; break;
      }
    }
  }
  if (const auto it = unassigned_.find(ticker); it != unassigned_.end())
    s.unassigned_documents = it->second;
  return s;
}

std::vector<std::string> Warehouse::tickers() const {
  std::vector<std::string> out;
  for (const auto& [ticker, _] : prices_) out.push_back(ticker);
  return out;
}

PriceView::PriceView(const PriceSeries& series, Date max_visible, AccessMonitor* monitor)
    : series_(&series), max_visible_(max_visible), monitor_(monitor) {
  const auto& rows = series.rows();
  const auto it = std::upper_bound(
      rows.begin(), rows.end(), max_visible,
      [](Date d, const PriceRow& row) { return d < row.date; });
  visible_count_ = static_cast<std::size_t>(it - rows.begin());
}

bool PriceView::has(Date date) const {
  if (monitor_) monitor_->record(date);
  if (date > max_visible_) return false;
  return series_->has(date);
}

const PriceRow& PriceView::row_at(Date date) const {
  if (monitor_) monitor_->record(date);
  if (date > max_visible_)
    raise(Errc::DateNotFound, "date " + date.to_string() + " not visible");
  return series_->row_at(date);
}

DirectionLabel PriceView::direction_label(Date date) const {
  const auto idx = series_->index_of(date);
  if (!idx) raise(Errc::DateNotFound, ticker() + ": no row for " + date.to_string());
  if (*idx + 1 >= visible_count_)
    raise(Errc::NoNextDay, "no visible trading day after " + date.to_string());
  if (monitor_) {
    monitor_->record(date);
    monitor_->record(series_->rows()[*idx + 1].date);
  }
  const double today = series_->rows()[*idx].adj_close;
  const double next = series_->rows()[*idx + 1].adj_close;
  return next < today ? DirectionLabel::Sell : DirectionLabel::Buy;
}

double PriceView::trailing_cumulative_return(Date date, int m) const {
  if (date > max_visible_)
    raise(Errc::DateNotFound, "date " + date.to_string() + " not visible");
  if (monitor_) {
    const auto idx = series_->index_of(date);
    if (idx && *idx >= static_cast<std::size_t>(m)) {
      for (std::size_t i = *idx - m; i <= *idx; ++i)
        monitor_->record(series_->rows()[i].date);
    } else if (idx) {
      monitor_->record(date);
    }
  }
  return data::trailing_cumulative_return(*series_, date, m);
}

}  // namespace finmem::data
