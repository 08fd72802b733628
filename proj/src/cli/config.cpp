#include "modent/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace modent::cli {
namespace {

using Raw = std::map<std::string, std::string>;

struct ExperimentInfo {
  Experiment experiment;
  const char* name;
  const char* description;
  std::vector<std::string> keys;
};

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> table{
      {Experiment::table1, "table1", "target-pair concurrence for the four particle classes", {"n"}},
      {Experiment::rotate, "rotate", "sequential rotation with N fermionic ancillas", {"n", "alpha", "beta"}},
      {Experiment::rotate_sweep, "rotate-sweep", "sequential-rotation infidelity over a list of N",
       {"n_list", "alpha", "beta"}},
      {Experiment::collective_check, "collective-check", "simultaneous coupling versus one collective mode",
       {"n", "alpha", "beta"}},
      {Experiment::fermion_sweep, "fermion-sweep", "mixing-angle search for massive fermions",
       {"pairs", "grid", "refine"}},
      {Experiment::bell, "bell", "Horodecki criterion for the target-pair state", {"gamma"}},
      {Experiment::absorption, "absorption", "absorption of a delocalized photon", {}},
      {Experiment::coherent_rotation, "coherent-rotation", "rotation driven by a bosonic coherent field",
       {"eta", "alpha", "beta", "cutoff"}},
  };
  return table;
}

const ExperimentInfo& info(Experiment e) {
  for (const auto& i : experiments())
    if (i.experiment == e) return i;
  throw std::logic_error("unknown experiment");
}

const std::array<const char*, 10> kParameterKeys{"n",     "alpha", "beta",   "gamma",  "pairs",
                                                  "grid",  "refine", "eta",   "cutoff", "n_list"};
const std::array<const char*, 3> kOutputKeys{"format", "out", "plot"};

std::string flag_of(const std::string& key) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

// ---------------------------------------------------------------------------
// Value parsing.  Every message names the key and the accepted range.

constexpr int kMaxN = 1000000;
constexpr int kMaxCollective = 10;
constexpr int kMaxPairs = 4;
constexpr int kMinGrid = 8;
constexpr int kMaxGrid = 1024;
constexpr int kMaxRefine = 30;
constexpr long long kMaxCells = 4000000;
constexpr double kMaxEta = 20.0;
constexpr int kMaxCutoff = 2000;
constexpr std::size_t kMaxListLength = 64;

std::string range_text(long long lo, long long hi) {
  return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
}

int parse_int(const std::string& key, const std::string& text, int lo, int hi) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw UsageError(key + " must be an integer in " + range_text(lo, hi) + ", got '" + text + "'");
  if (value < lo || value > hi) throw UsageError(key + " out of range " + range_text(lo, hi) + ": " + text);
  return value;
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw UsageError(key + " must be a finite real number, got '" + text + "'");
  return value;
}

Complex parse_complex(const std::string& key, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(key, text), 0.0};
  try {
    return {parse_double(key, text.substr(0, comma)), parse_double(key, text.substr(comma + 1))};
  } catch (const UsageError&) {
    throw UsageError(key + " must be 're' or 're,im', got '" + text + "'");
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text, int lo, int hi) {
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_int(key, text.substr(start, comma - start), lo, hi));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() > kMaxListLength)
    throw UsageError(key + " accepts at most " + std::to_string(kMaxListLength) + " entries");
  return out;
}

Format parse_format(const std::string& text) {
  if (text == "table") return Format::table;
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw UsageError("format must be one of {table, csv, json}, got '" + text + "'");
}

Experiment parse_experiment(const std::string& text) {
  for (const auto& i : experiments())
    if (text == i.name) return i.experiment;
  std::string names;
  for (const auto& i : experiments()) names += (names.empty() ? "" : ", ") + std::string(i.name);
  throw UsageError("experiment must be one of {" + names + "}, got '" + text + "'");
}

// ---------------------------------------------------------------------------

RunConfig validate(Experiment experiment, const Raw& raw) {
  const auto& allowed = info(experiment).keys;
  for (const auto& [key, value] : raw) {
    const bool output_key = std::find(kOutputKeys.begin(), kOutputKeys.end(), key) != kOutputKeys.end();
    if (!output_key && std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw UsageError("parameter '" + key + "' does not apply to experiment '" + to_string(experiment) + "'");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };

  RunConfig config;
  config.experiment = experiment;
  Parameters& p = config.params;

  switch (experiment) {
    case Experiment::table1:
    case Experiment::rotate:
      p.n = get("n") ? parse_int("n", *get("n"), 1, kMaxN) : 1;
      break;
    case Experiment::collective_check:
      p.n = get("n") ? parse_int("n", *get("n"), 1, kMaxCollective) : 4;
      break;
    case Experiment::rotate_sweep:
      p.n_list = get("n_list") ? parse_int_list("n_list", *get("n_list"), 1, kMaxN) : std::vector<int>{4, 8, 16, 32, 64};
      break;
    case Experiment::fermion_sweep: {
      p.pairs = get("pairs") ? parse_int("pairs", *get("pairs"), 1, kMaxPairs) : 2;
      p.grid = get("grid") ? parse_int("grid", *get("grid"), kMinGrid, kMaxGrid) : 64;
      p.refine = get("refine") ? parse_int("refine", *get("refine"), 0, kMaxRefine) : 3;
      long long cells = 1;
      for (int k = 0; k < *p.pairs; ++k) cells *= *p.grid + 1;
      if (cells > kMaxCells)
        throw UsageError("grid out of range for pairs = " + std::to_string(*p.pairs) + ": (grid+1)^pairs = " +
                         std::to_string(cells) + " exceeds " + std::to_string(kMaxCells));
      break;
    }
    case Experiment::bell: {
      if (!get("gamma")) throw UsageError("missing required parameter gamma, range [0,1]");
      const double g = parse_double("gamma", *get("gamma"));
      if (!(g >= 0.0 && g <= 1.0)) throw UsageError("gamma out of range [0,1]: " + *get("gamma"));
      p.gamma = g;
      break;
    }
    case Experiment::absorption:
      break;
    case Experiment::coherent_rotation: {
      if (!get("eta")) throw UsageError("missing required parameter eta, range |eta| <= 20");
      p.eta = parse_complex("eta", *get("eta"));
      if (std::abs(*p.eta) > kMaxEta) throw UsageError("eta out of range |eta| <= 20: " + *get("eta"));
      if (get("cutoff")) p.cutoff = parse_int("cutoff", *get("cutoff"), 1, kMaxCutoff);
      break;
    }
  }

  if (std::find(allowed.begin(), allowed.end(), "alpha") != allowed.end()) {
    if (static_cast<bool>(get("alpha")) != static_cast<bool>(get("beta")))
      throw UsageError("alpha and beta must be given together");
    p.alpha = get("alpha") ? parse_complex("alpha", *get("alpha")) : Complex{1.0, 0.0};
    p.beta = get("beta") ? parse_complex("beta", *get("beta")) : Complex{0.0, 0.0};
    const double norm = std::norm(*p.alpha) + std::norm(*p.beta);
    if (std::abs(norm - 1.0) > 1e-12)
      throw UsageError("alpha, beta out of range: |alpha|^2 + |beta|^2 must equal 1 within 1e-12, got " +
                       format_exact(norm));
  }

  if (get("format")) config.output.format = parse_format(*get("format"));
  if (get("out")) {
    if (get("out")->empty()) throw UsageError("out must be a non-empty path");
    config.output.path = *get("out");
  }
  if (get("plot")) {
    if (get("plot")->empty()) throw UsageError("plot must be a non-empty path");
    const bool plottable = experiment == Experiment::rotate_sweep ||
                           (experiment == Experiment::fermion_sweep && *p.pairs <= 2);
    if (!plottable) throw UsageError("plot is only available for rotate-sweep and fermion-sweep with pairs <= 2");
    config.output.plot = *get("plot");
  }
  return config;
}

std::string json_scalar_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) return format_exact(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  throw UsageError("config key '" + key + "' must be a number or string");
}

Raw raw_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw UsageError("config document must be a JSON object");
  std::set<std::string> known{"experiment"};
  for (const char* k : kParameterKeys) known.insert(k);
  for (const char* k : kOutputKeys) known.insert(k);

  Raw raw;
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
    if (key == "experiment") {
      if (!value.is_string()) throw UsageError("config key 'experiment' must be a string");
      raw[key] = value.get<std::string>();
    } else if (value.is_array()) {
      if (key != "n_list" && key != "alpha" && key != "beta" && key != "eta")
        throw UsageError("config key '" + key + "' does not take an array");
      if ((key != "n_list" && value.size() != 2) || value.empty())
        throw UsageError("config key '" + key + "' must be " + (key == "n_list" ? "a non-empty array" : "[re, im]"));
      std::string joined;
      for (const auto& item : value) {
        if (!item.is_number()) throw UsageError("config key '" + key + "' must contain numbers");
        joined += (joined.empty() ? "" : ",") + json_scalar_text(key, item);
      }
      raw[key] = joined;
    } else {
      raw[key] = json_scalar_text(key, value);
    }
  }
  return raw;
}

Raw raw_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config cannot be read: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config is not valid JSON: " + path + ": " + e.what());
  }
  return raw_from_json(doc);
}

std::string complex_text(Complex z) {
  if (z.imag() == 0.0) return format_exact(z.real());
  return format_exact(z.real()) + "," + format_exact(z.imag());
}

nlohmann::json complex_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return nlohmann::json::array({z.real(), z.imag()});
}

// Ordered (key, text) pairs of everything set in the config.
std::vector<std::pair<std::string, std::string>> entries(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  const Parameters& p = c.params;
  if (p.n) out.emplace_back("n", std::to_string(*p.n));
  if (p.alpha) out.emplace_back("alpha", complex_text(*p.alpha));
  if (p.beta) out.emplace_back("beta", complex_text(*p.beta));
  if (p.gamma) out.emplace_back("gamma", format_exact(*p.gamma));
  if (p.pairs) out.emplace_back("pairs", std::to_string(*p.pairs));
  if (p.grid) out.emplace_back("grid", std::to_string(*p.grid));
  if (p.refine) out.emplace_back("refine", std::to_string(*p.refine));
  if (p.eta) out.emplace_back("eta", complex_text(*p.eta));
  if (p.cutoff) out.emplace_back("cutoff", std::to_string(*p.cutoff));
  if (p.n_list) {
    std::string joined;
    for (int n : *p.n_list) joined += (joined.empty() ? "" : ",") + std::to_string(n);
    out.emplace_back("n_list", joined);
  }
  out.emplace_back("format", to_string(c.output.format));
  if (c.output.path) out.emplace_back("out", *c.output.path);
  if (c.output.plot) out.emplace_back("plot", *c.output.plot);
  return out;
}


std::string describe(const std::string& key) {
  static const std::map<std::string, std::string> text{
      {"n", "number of ancillas (collective-check: modes, <= 10)"},
      {"n_list", "comma-separated list of N"},
      {"alpha", "target amplitude on |g>, re or re,im; give with --beta"},
      {"beta", "target amplitude on |e>, re or re,im; give with --alpha"},
      {"gamma", "coherence of the target-pair state, [0,1]"},
      {"pairs", "number of ancilla pairs, [1,4]"},
      {"grid", "grid intervals per angle axis, [8,1024]"},
      {"refine", "local refinement rounds, [0,30]"},
      {"eta", "coherent-field amplitude, re or re,im, |eta| <= 20"},
      {"cutoff", "Fock cutoff of the field mode, [1,2000]"},
      {"format", "table | csv | json"},
      {"out", "write the output here instead of stdout"},
      {"plot", "write an SVG chart here"},
  };
  return text.at(key);
}

std::string type_name_of(const std::string& key) {
  if (key == "alpha" || key == "beta" || key == "eta") return "COMPLEX";
  if (key == "gamma") return "FLOAT";
  if (key == "n_list") return "LIST";
  if (key == "format") return "FORMAT";
  if (key == "out" || key == "plot") return "PATH";
  return "INT";
}
}  // namespace

std::string to_string(Experiment e) { return info(e).name; }

std::string to_string(Format f) {
  switch (f) {
    case Format::table: return "table";
    case Format::csv: return "csv";
    case Format::json: return "json";
  }
  return "table";
}

std::string format_exact(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Detection of mode entanglement: protocol simulations", "modent"};
  app.require_subcommand(1, 1);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> config_paths;
  for (const auto& i : experiments()) {
    auto* sub = app.add_subcommand(i.name, i.description);
    auto& vals = values[i.name];
    auto& opts = options[i.name];
    std::vector<std::string> keys = i.keys;
    keys.insert(keys.end(), kOutputKeys.begin(), kOutputKeys.end());
    for (const auto& key : keys)
      opts[key] = sub->add_option(flag_of(key), vals[key], describe(key))->type_name(type_name_of(key));
    sub->add_option("--config", config_paths[i.name], "JSON config file; flags override its values");
  }

  std::vector<const char*> argv{"modent"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    if (e.get_exit_code() == 0) throw HelpRequested(out.str());
    throw UsageError(e.what());
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const Experiment experiment = parse_experiment(name);

  Raw raw;
  if (chosen->count("--config")) {
    raw = raw_from_file(config_paths[name]);
    const auto it = raw.find("experiment");
    if (it != raw.end()) {
      if (it->second != name)
        throw UsageError("config experiment '" + it->second + "' does not match subcommand '" + name + "'");
      raw.erase(it);
    }
  }
  for (const auto& [key, opt] : options[name])
    if (opt->count()) raw[key] = values[name][key];
  return validate(experiment, raw);
}

RunConfig parse_config_json(const nlohmann::json& doc) {
  Raw raw = raw_from_json(doc);
  const auto it = raw.find("experiment");
  if (it == raw.end()) throw UsageError("missing required config key 'experiment'");
  const Experiment experiment = parse_experiment(it->second);
  raw.erase(it);
  return validate(experiment, raw);
}

std::vector<std::string> render_args(const RunConfig& config) {
  std::vector<std::string> out{to_string(config.experiment)};
  for (const auto& [key, text] : entries(config)) out.push_back(flag_of(key) + "=" + text);
  return out;
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json doc = nlohmann::json::object();
  doc["experiment"] = to_string(config.experiment);
  const Parameters& p = config.params;
  if (p.n) doc["n"] = *p.n;
  if (p.alpha) doc["alpha"] = complex_json(*p.alpha);
  if (p.beta) doc["beta"] = complex_json(*p.beta);
  if (p.gamma) doc["gamma"] = *p.gamma;
  if (p.pairs) doc["pairs"] = *p.pairs;
  if (p.grid) doc["grid"] = *p.grid;
  if (p.refine) doc["refine"] = *p.refine;
  if (p.eta) doc["eta"] = complex_json(*p.eta);
  if (p.cutoff) doc["cutoff"] = *p.cutoff;
  if (p.n_list) doc["n_list"] = *p.n_list;
  doc["format"] = to_string(config.output.format);
  if (config.output.path) doc["out"] = *config.output.path;
  if (config.output.plot) doc["plot"] = *config.output.plot;
  return doc;
}

}  // namespace modent::cli
