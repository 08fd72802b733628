#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "modent/cli/config.hpp"
#include "modent/cli/report.hpp"

namespace modent::cli {

struct Artifacts {
  Report report;
  std::optional<std::string> plot;  ///< SVG document when config.output.plot is set
};

/// Runs the experiment; throws on computation failure.
Artifacts execute(const RunConfig& config);

/// Writes to `path` through a temporary sibling and a rename; the temporary is
/// removed if anything fails.
void write_atomically(const std::string& path, const std::string& content);

/// Emits the rendered report to config.output.path (or `out`) and the plot.
/// Returns 0, or 1 after printing the failure to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// argv without the program name.  0 success, 2 usage error, 1 failure.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modent::cli
