#include "modent/cli/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace modent::cli {
namespace {

constexpr std::size_t kMaxPrintedSeriesRows = 200;

std::string cell_text(const Cell& cell, const char* empty) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return empty;
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return v ? "true" : "false";
      },
      cell);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) return std::stod(format_number(v));
        else return v;
      },
      cell);
}

void print_aligned(std::ostringstream& out, const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
  std::vector<std::vector<std::string>> text;
  for (const auto& row : t.rows) {
    auto& line = text.emplace_back();
    for (std::size_t j = 0; j < row.size(); ++j) {
      line.push_back(cell_text(row[j], "-"));
      width[j] = std::max(width[j], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      line += cells[j];
      if (j + 1 < cells.size()) line += std::string(width[j] - cells[j].size() + 2, ' ');
    }
    out << line << '\n';
  };
  emit(t.columns);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
  for (const auto& line : text) emit(line);
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  std::array<char, 40> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string render_table(const Report& report) {
  std::ostringstream out;
  out << report.experiment << "\n\n";
  print_aligned(out, report.summary);
  if (report.series) {
    out << '\n';
    if (report.series->rows.size() <= kMaxPrintedSeriesRows) print_aligned(out, *report.series);
    else out << report.series->rows.size() << " series rows; use --format csv or json to export them\n";
  }
  return out.str();
}

std::string render_csv(const Report& report) {
  const Table& t = report.series ? *report.series : report.summary;
  std::ostringstream out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << csv_field(t.columns[j]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_field(cell_text(row[j], ""));
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Report& report, const RunConfig& config) {
  auto rows_json = [](const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json o = nlohmann::json::array();
      for (std::size_t j = 0; j < row.size(); ++j) o.push_back(cell_json(row[j]));
      rows.push_back(std::move(o));
    }
    return nlohmann::json{{"columns", t.columns}, {"rows", rows}};
  };
  nlohmann::json config_doc = to_json(config);
  config_doc.erase("out");
  config_doc.erase("plot");
  nlohmann::json doc{{"experiment", report.experiment}, {"config", config_doc}, {"summary", rows_json(report.summary)}};
  if (report.series) doc["series"] = rows_json(*report.series);
  return doc.dump(2) + "\n";
}

std::string render(const Report& report, const RunConfig& config) {
  switch (config.output.format) {
    case Format::table: return render_table(report);
    case Format::csv: return render_csv(report);
    case Format::json: return render_json(report, config);
  }
  return render_table(report);
}

}  // namespace modent::cli
