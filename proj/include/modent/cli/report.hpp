#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "modent/cli/config.hpp"

namespace modent::cli {

/// Empty cells render as "-" in tables, "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::string, double, long long, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Report {
  std::string experiment;
  Table summary;
  std::optional<Table> series;
};

/// 12 significant digits, trailing zeros dropped, "-0" printed as "0".
std::string format_number(double x);

std::string render_table(const Report& report);
/// The series when present, otherwise the summary.  Header row first.
std::string render_csv(const Report& report);
std::string render_json(const Report& report, const RunConfig& config);
std::string render(const Report& report, const RunConfig& config);

}  // namespace modent::cli
