#include "modent/cli/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "modent/cli/svg.hpp"
#include "modent/entanglement.hpp"
#include "modent/kernels.hpp"
#include "modent/protocols.hpp"

namespace modent::cli {
namespace {

Table key_value_table(const ExperimentResult& result) {
  Table t{{"key", "value"}, {}};
  for (const auto& [k, v] : result.params) t.add({k, v});
  for (const auto& [k, v] : result.scalars) t.add({k, v});
  return t;
}

Report table1_report(const RunConfig& c) {
  Table t{{"particle_type", "concurrence", "expected", "evidence", "evidence_value", "max_repetitions"}, {}};
  for (const auto& row : table1_summary(*c.params.n)) {
    t.add({row.particle_type, row.concurrence ? Cell{*row.concurrence} : Cell{}, row.expected, row.evidence,
           row.evidence_value ? Cell{*row.evidence_value} : Cell{}, row.max_repetitions});
  }
  return {"table1 (N = " + std::to_string(*c.params.n) + ")", t, std::nullopt};
}

Report rotate_report(const RunConfig& c) {
  RotationProtocolParams p;
  p.alpha = *c.params.alpha;
  p.beta = *c.params.beta;
  p.n_ancillas = *c.params.n;
  return {"rotate", key_value_table(sequential_rotation(p)), std::nullopt};
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Artifacts rotate_sweep(const RunConfig& c) {
  const auto& ns = *c.params.n_list;
  std::vector<ExperimentResult> results(ns.size());
  kernels::for_each_index(kernels::Execution::parallel, ns.size(), [&](std::size_t i) {
    RotationProtocolParams p;
    p.alpha = *c.params.alpha;
    p.beta = *c.params.beta;
    p.n_ancillas = ns[i];
    results[i] = sequential_rotation(p);
  });

  Table series{{"n", "fidelity", "infidelity", "infidelity_times_n"}, {}};
  std::vector<std::pair<double, double>> positive;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& r = results[i];
    series.add({static_cast<long long>(ns[i]), r.at("fidelity"), r.at("infidelity"), r.at("infidelity_times_n")});
    if (r.at("infidelity") > 0) positive.emplace_back(ns[i], r.at("infidelity"));
  }

  Table summary{{"key", "value"}, {}};
  summary.add({"alpha", results.front().params.at("alpha")});
  summary.add({"beta", results.front().params.at("beta")});
  summary.add({"points", static_cast<long long>(ns.size())});
  if (positive.size() >= 2) summary.add({"loglog_slope", loglog_slope(positive)});

  Artifacts a{{"rotate-sweep", summary, series}, std::nullopt};
  if (c.output.plot)
    a.plot = svg::line_chart("Sequential rotation infidelity", positive, {"N (ancillas)", true}, {"1 - F", true});
  return a;
}

Report collective_report(const RunConfig& c) {
  return {"collective-check", key_value_table(simultaneous_coupling_check(*c.params.n, *c.params.alpha, *c.params.beta)),
          std::nullopt};
}

Artifacts fermion_sweep(const RunConfig& c) {
  const int pairs = *c.params.pairs;
  const auto search = optimize_angles(pairs, *c.params.grid, *c.params.refine);

  Table summary{{"key", "value"}, {}};
  summary.add({"pairs", static_cast<long long>(pairs)});
  summary.add({"grid", static_cast<long long>(*c.params.grid)});
  summary.add({"refine", static_cast<long long>(*c.params.refine)});
  for (int k = 0; k < pairs; ++k) summary.add({"best_theta_" + std::to_string(k + 1), search.best_angles[k]});
  summary.add({"best_concurrence", search.best_concurrence});

  Table series{{}, {}};
  for (int k = 0; k < pairs; ++k) series.columns.push_back("theta_" + std::to_string(k + 1));
  series.columns.push_back("concurrence");
  for (const auto& s : search.grid) {
    std::vector<Cell> row(s.angles.begin(), s.angles.end());
    row.emplace_back(s.concurrence);
    series.add(std::move(row));
  }

  Artifacts a{{"fermion-sweep", summary, series}, std::nullopt};
  if (c.output.plot) {
    const int g = *c.params.grid;
    std::vector<double> axis;
    for (int k = 0; k <= g; ++k) axis.push_back(k * std::numbers::pi / g);
    if (pairs == 1) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& s : search.grid) pts.emplace_back(s.angles[0], s.concurrence);
      a.plot = svg::line_chart("Target concurrence, one ancilla pair", pts, {"theta (rad)", false},
                               {"concurrence", false});
    } else {
      std::vector<double> values;
      for (const auto& s : search.grid) values.push_back(s.concurrence);
      a.plot = svg::heatmap("Target concurrence, two ancilla pairs", axis, axis, values, "theta_1 (rad)",
                            "theta_2 (rad)");
    }
  }
  return a;
}

Report bell_report(const RunConfig& c) {
  const double gamma = *c.params.gamma;
  const TwoQubitDensity rho = target_pair_state(gamma);
  Table t{{"key", "value"}, {}};
  t.add({"gamma", gamma});
  t.add({"horodecki_m", horodecki_m(rho)});
  t.add({"chsh_violated", chsh_violated(rho)});
  t.add({"concurrence", concurrence(rho)});
  return {"bell", t, std::nullopt};
}

Report absorption_report() { return {"absorption", key_value_table(massless_absorption().result), std::nullopt}; }

Report coherent_report(const RunConfig& c) {
  return {"coherent-rotation",
          key_value_table(coherent_field_rotation(*c.params.alpha, *c.params.beta, *c.params.eta, c.params.cutoff)),
          std::nullopt};
}

void remove_quietly(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::remove(p, ec);
}

}  // namespace

Artifacts execute(const RunConfig& c) {
  switch (c.experiment) {
    case Experiment::table1: return {table1_report(c), std::nullopt};
    case Experiment::rotate: return {rotate_report(c), std::nullopt};
    case Experiment::rotate_sweep: return rotate_sweep(c);
    case Experiment::collective_check: return {collective_report(c), std::nullopt};
    case Experiment::fermion_sweep: return fermion_sweep(c);
    case Experiment::bell: return {bell_report(c), std::nullopt};
    case Experiment::absorption: return {absorption_report(), std::nullopt};
    case Experiment::coherent_rotation: return {coherent_report(c), std::nullopt};
  }
  throw std::logic_error("unhandled experiment");
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".partial";
  try {
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      f << content;
      f.flush();
      if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, target);
  } catch (...) {
    remove_quietly(tmp);
    throw;
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Artifacts a = execute(config);
    const std::string text = render(a.report, config);
    if (config.output.path) write_atomically(*config.output.path, text);
    if (a.plot) {
      try {
        write_atomically(*config.output.plot, *a.plot);
      } catch (...) {
        if (config.output.path) remove_quietly(*config.output.path);
        throw;
      }
    }
    if (!config.output.path) out << text;
    return 0;
  } catch (const std::exception& e) {
    err << "modent " << to_string(config.experiment) << ": " << e.what() << '\n';
    return 1;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "modent: " << e.what() << "\nRun 'modent --help' for usage.\n";
    return 2;
  }
  return run(config, out, err);
}

}  // namespace modent::cli
