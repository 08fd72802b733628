#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "modent/hilbert.hpp"

namespace modent::cli {

enum class Experiment {
  table1,
  rotate,
  rotate_sweep,
  collective_check,
  fermion_sweep,
  bell,
  absorption,
  coherent_rotation,
};

enum class Format { table, csv, json };

std::string to_string(Experiment e);  ///< subcommand spelling, e.g. "rotate-sweep"
std::string to_string(Format f);

struct Parameters {
  std::optional<int> n;
  std::optional<Complex> alpha;
  std::optional<Complex> beta;
  std::optional<double> gamma;
  std::optional<int> pairs;
  std::optional<int> grid;
  std::optional<int> refine;
  std::optional<Complex> eta;
  std::optional<int> cutoff;
  std::optional<std::vector<int>> n_list;
  bool operator==(const Parameters&) const = default;
};

struct OutputSpec {
  Format format = Format::table;
  std::optional<std::string> path;
  std::optional<std::string> plot;
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  Experiment experiment = Experiment::table1;
  Parameters params;
  OutputSpec output;
  bool operator==(const RunConfig&) const = default;
};

/// Bad flag, unknown key, missing or out-of-range parameter.  Exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for --help; what() holds the help text.  Exit status 0.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// argv without the program name.  A --config file is read first and the
/// flags given on the command line override its values.
RunConfig parse_args(const std::vector<std::string>& args);

/// Config document on its own; `experiment` is required in it.
RunConfig parse_config_json(const nlohmann::json& doc);

/// Flags that parse back to an equal config.
std::vector<std::string> render_args(const RunConfig& config);

/// Config document that parse_config_json accepts.
nlohmann::json to_json(const RunConfig& config);

/// Shortest decimal that round-trips.
std::string format_exact(double x);

}  // namespace modent::cli
