#include "modent/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <array>
#include <charconv>
#include <stdexcept>

namespace modent {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTolerance = 1e-12;
constexpr double kMaxTruncationWeight = 1e-8;
constexpr int kMaxCollectiveModes = 10;
constexpr int kMaxFermionPairs = 8;

const std::string kTarget = "target";
const std::string kAncilla = "ancilla";

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_number(z.real());
  return format_number(z.real()) + "," + format_number(z.imag());
}

PureState plus_state(const std::string& label) {
  const SystemLayout layout({{label, FermionicMode{}}});
  return superpose({{1.0, basis_state(layout, {0})}, {1.0, basis_state(layout, {1})}});
}

std::string side_tag(Side side) { return side == Side::left ? "L" : "R"; }

bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool improves(double value, const std::vector<double>& angles, double best, const std::vector<double>& best_angles) {
  if (value > best + kTieTolerance) return true;
  return std::abs(value - best) <= kTieTolerance && lexicographically_less(angles, best_angles);
}

double evaluate_from(const PureState& initial, const std::vector<double>& angles) {
  PureState state = initial;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const MixingAngle angle(angles[j]);
    const int pair = static_cast<int>(j) + 1;
    state = apply_side_mixing(state, Side::left, pair, angle);
    state = apply_side_mixing(state, Side::right, pair, angle);
  }
  return concurrence(TwoQubitDensity(partial_trace(state, {"target_L", "target_R"})));
}

}  // namespace

void ExperimentResult::set(const std::string& key, double value) {
  if (!std::isfinite(value)) throw std::domain_error("experiment '" + name + "': scalar '" + key + "' is not finite");
  scalars[key] = value;
}

double ExperimentResult::at(const std::string& key) const {
  const auto it = scalars.find(key);
  if (it == scalars.end()) throw std::out_of_range("experiment '" + name + "' has no scalar '" + key + "'");
  return it->second;
}

// ---------------------------------------------------------------------------

AbsorptionResult massless_absorption() {
  const SystemLayout layout({{"flying_L", BosonicMode{2}},
                             {"flying_R", BosonicMode{2}},
                             {"target_L", TwoLevel{}},
                             {"target_R", TwoLevel{}}});
  const PureState initial = superpose({{1.0, basis_state(layout, {1, 0, kGround, kGround})},
                                       {1.0, basis_state(layout, {0, 1, kGround, kGround})}});
  const PureState absorbed = superpose({{1.0, basis_state(layout, {0, 0, kExcited, kGround})},
                                        {1.0, basis_state(layout, {0, 0, kGround, kExcited})}});

  const LinearOp h = jc_hamiltonian(layout, {"target_L", {"flying_L"}, 1.0}) +
                     jc_hamiltonian(layout, {"target_R", {"flying_R"}, 1.0});
  const PureState final_state = evolve(initial, h, kPi / 2.0);

  const double overlap = std::abs(absorbed.amplitudes().dot(final_state.amplitudes()));
  const double flying_occupation =
      expectation(final_state, embed_operator(layout, ops::number(BosonicMode{2}), {"flying_L"})).real() +
      expectation(final_state, embed_operator(layout, ops::number(BosonicMode{2}), {"flying_R"})).real();

  TwoQubitDensity targets(partial_trace(final_state, {"target_L", "target_R"}));
  ExperimentResult result{"massless_absorption", {{"interaction_time", format_number(kPi / 2.0)}}, {}, {}};
  result.set("overlap_with_absorbed_state", overlap);
  result.set("flying_occupation", flying_occupation);
  result.set("concurrence", concurrence(targets));
  result.set("horodecki_m", horodecki_m(targets));
  return {targets, result};
}

// ---------------------------------------------------------------------------

PureState target_state(Complex alpha, Complex beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw std::invalid_argument("target state requires |alpha|^2 + |beta|^2 = 1");
  Vector amps(2);
  amps << alpha, beta;
  return PureState(SystemLayout({{kTarget, TwoLevel{}}}), std::move(amps));
}

PureState ideal_rotated_state(Complex alpha, Complex beta) {
  target_state(alpha, beta);
  Vector amps(2);
  amps << (alpha - beta) / std::numbers::sqrt2, (alpha + beta) / std::numbers::sqrt2;
  return PureState(SystemLayout({{kTarget, TwoLevel{}}}), std::move(amps));
}

DensityOp analytic_single_ancilla_state(Complex alpha, Complex beta) {
  target_state(alpha, beta);
  const double r2 = std::numbers::sqrt2;
  const Complex off = r2 * alpha * std::conj(alpha + beta) + r2 * (alpha - beta) * std::conj(beta);
  Matrix m(2, 2);
  m << 2.0 * std::norm(alpha) + std::norm(alpha - beta), off,  //
      std::conj(off), std::norm(alpha + beta) + 2.0 * std::norm(beta);
  return DensityOp(SystemLayout({{kTarget, TwoLevel{}}}), m / 4.0);
}

SingleAncillaResult single_ancilla_rotation(Complex alpha, Complex beta) {
  const PureState initial = tensor(target_state(alpha, beta), plus_state(kAncilla));
  const LinearOp h = jc_hamiltonian(initial.layout(), {kTarget, {kAncilla}, 1.0});
  const DensityOp simulated = partial_trace(evolve(initial, h, kPi / 4.0), {kTarget});
  const double f = fidelity(simulated, ideal_rotated_state(alpha, beta));
  return {simulated, analytic_single_ancilla_state(alpha, beta), f};
}

double default_step_duration(int n_ancillas) {
  if (n_ancillas < 1) throw std::invalid_argument("number of ancillas must be >= 1");
  return kPi / (2.0 * n_ancillas);
}

RotationChannel::RotationChannel(double duration) {
  if (!std::isfinite(duration) || duration < 0.0)
    throw std::invalid_argument("interaction time must be finite and non-negative");
  const SystemLayout layout({{kTarget, TwoLevel{}}, {kAncilla, FermionicMode{}}});
  const Matrix u = Propagator(jc_hamiltonian(layout, {kTarget, {kAncilla}, 1.0})).unitary(duration);
  // K_m(i, j) = <i, m| U |j, +>, flat index = target * 2 + ancilla.
  for (int m = 0; m < 2; ++m) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) kraus_[m](i, j) = (u(2 * i + m, 2 * j) + u(2 * i + m, 2 * j + 1)) / std::numbers::sqrt2;
  }
}

Eigen::Matrix2cd RotationChannel::apply(const Eigen::Matrix2cd& rho) const {
  return kraus_[0] * rho * kraus_[0].adjoint() + kraus_[1] * rho * kraus_[1].adjoint();
}

DensityOp sequential_rotation_state(const RotationProtocolParams& params) {
  const PureState initial = target_state(params.alpha, params.beta);
  if (params.n_ancillas < 1) throw std::invalid_argument("number of ancillas must be >= 1");
  const double tau = params.per_step_duration.value_or(default_step_duration(params.n_ancillas));
  const RotationChannel channel(tau);
  // A used ancilla never interacts again, so tracing it out at once is exact.
  Eigen::Matrix2cd rho = initial.amplitudes() * initial.amplitudes().adjoint();
  for (int step = 0; step < params.n_ancillas; ++step) {
    rho = channel.apply(rho);
    // the channel is trace preserving; strip accumulated rounding
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
  }
  return DensityOp(initial.layout(), rho);
}

ExperimentResult sequential_rotation(const RotationProtocolParams& params) {
  const DensityOp rho = sequential_rotation_state(params);
  const double tau = params.per_step_duration.value_or(default_step_duration(params.n_ancillas));
  const double f = fidelity(rho, ideal_rotated_state(params.alpha, params.beta));
  ExperimentResult result{"sequential_rotation",
                          {{"alpha", format_complex(params.alpha)},
                           {"beta", format_complex(params.beta)},
                           {"n_ancillas", std::to_string(params.n_ancillas)},
                           {"per_step_duration", format_number(tau)}},
                          {},
                          {}};
  result.set("fidelity", f);
  result.set("infidelity", 1.0 - f);
  result.set("infidelity_times_n", (1.0 - f) * params.n_ancillas);
  return result;
}

ExperimentResult simultaneous_coupling_check(int n_modes, Complex alpha, Complex beta) {
  if (n_modes < 1 || n_modes > kMaxCollectiveModes)
    throw std::invalid_argument("number of modes must lie in [1," + std::to_string(kMaxCollectiveModes) + "]");
  const double t = kPi / (4.0 * std::sqrt(static_cast<double>(n_modes)));
  const PureState target = target_state(alpha, beta);
  const PureState ideal = ideal_rotated_state(alpha, beta);

  // N physical modes, all coupled at once.
  PureState many = target;
  std::vector<std::string> modes;
  for (int k = 1; k <= n_modes; ++k) {
    modes.push_back("mode_" + std::to_string(k));
    many = tensor(many, plus_state(modes.back()));
  }
  const LinearOp h_many = collective_jc_hamiltonian(many.layout(), {kTarget, modes, 1.0});
  const DensityOp rho_many = partial_trace(evolve(many, h_many, t), {kTarget});

  // One collective mode on the symmetric ladder, coupled at J sqrt(N).
  const SystemLayout collective_layout({{"collective", BosonicMode{n_modes}}});
  const PureState one =
      tensor(target, PureState(collective_layout, collective_mode_amplitudes(n_modes)));
  const LinearOp h_one = ladder_coupling_hamiltonian(one.layout(), kTarget, "collective",
                                                     collective_mode_lowering(n_modes), std::sqrt(double(n_modes)));
  const DensityOp rho_one = partial_trace(evolve(one, h_one, t), {kTarget});

  const double f_many = fidelity(rho_many, ideal);
  const double f_one = fidelity(rho_one, ideal);
  ExperimentResult result{"simultaneous_coupling_check",
                          {{"n_modes", std::to_string(n_modes)},
                           {"alpha", format_complex(alpha)},
                           {"beta", format_complex(beta)},
                           {"interaction_time", format_number(t)}},
                          {},
                          {}};
  result.set("trace_distance", trace_distance(rho_many.matrix(), rho_one.matrix()));
  result.set("fidelity_simultaneous", f_many);
  result.set("fidelity_collective_mode", f_one);
  result.set("fidelity_gain", f_many - f_one);
  result.set("fidelity_single_fermionic_ancilla", single_ancilla_rotation(alpha, beta).fidelity_vs_ideal);
  return result;
}

// ---------------------------------------------------------------------------

SystemLayout fermion_protocol_layout(int n_pairs) {
  if (n_pairs < 1 || n_pairs > kMaxFermionPairs)
    throw std::invalid_argument("number of ancilla pairs must lie in [1," + std::to_string(kMaxFermionPairs) + "]");
  std::vector<Subsystem> subsystems{{"target_L", TwoLevel{}},
                                    {"target_R", TwoLevel{}},
                                    {"flying_L", FermionicMode{}},
                                    {"flying_R", FermionicMode{}}};
  for (int j = 1; j <= n_pairs; ++j) {
    subsystems.push_back({"anc_L" + std::to_string(j), FermionicMode{}});
    subsystems.push_back({"anc_R" + std::to_string(j), FermionicMode{}});
  }
  return SystemLayout(std::move(subsystems));
}

PureState fermion_protocol_initial_state(int n_pairs) {
  fermion_protocol_layout(n_pairs);
  const SystemLayout core({{"target_L", TwoLevel{}},
                           {"target_R", TwoLevel{}},
                           {"flying_L", FermionicMode{}},
                           {"flying_R", FermionicMode{}}});
  PureState state = superpose({{1.0, basis_state(core, {kExcited, kGround, 1, 0})},
                               {1.0, basis_state(core, {kGround, kExcited, 0, 1})}});
  for (int j = 1; j <= n_pairs; ++j) {
    const SystemLayout pair({{"anc_L" + std::to_string(j), FermionicMode{}},
                             {"anc_R" + std::to_string(j), FermionicMode{}}});
    state = tensor(state, superpose({{1.0, basis_state(pair, {1, 0})}, {1.0, basis_state(pair, {0, 1})}}));
  }
  return state;
}

PureState apply_side_mixing(const PureState& state, Side side, int pair, MixingAngle angle) {
  const auto tag = side_tag(side);
  return apply_controlled_mixing(state, "target_" + tag, "flying_" + tag, "anc_" + tag + std::to_string(pair), angle);
}

FermionProtocolResult massive_fermion_protocol(const FermionProtocolParams& params) {
  if (params.n_pairs < 1) throw std::invalid_argument("number of ancilla pairs must be >= 1");
  if (params.angles.size() != static_cast<std::size_t>(params.n_pairs))
    throw std::invalid_argument("one mixing angle per ancilla pair required");
  PureState state = fermion_protocol_initial_state(params.n_pairs);
  for (int j = 1; j <= params.n_pairs; ++j) {
    state = apply_side_mixing(state, Side::left, j, params.angles[j - 1]);
    state = apply_side_mixing(state, Side::right, j, params.angles[j - 1]);
  }
  TwoQubitDensity targets(partial_trace(state, {"target_L", "target_R"}));
  return {targets, concurrence(targets)};
}

double fermion_concurrence(const std::vector<double>& angles) {
  return evaluate_from(fermion_protocol_initial_state(static_cast<int>(angles.size())), angles);
}

AngleSearchResult optimize_angles(int n_pairs, int grid_points, int refine_rounds, kernels::Execution exec) {
  if (n_pairs < 1) throw std::invalid_argument("optimize_angles: n_pairs must be >= 1");
  if (grid_points < 8) throw std::invalid_argument("optimize_angles: grid_points must be >= 8");
  if (refine_rounds < 0) throw std::invalid_argument("optimize_angles: refine_rounds must be >= 0");
  const PureState initial = fermion_protocol_initial_state(n_pairs);

  const std::size_t axis = static_cast<std::size_t>(grid_points) + 1;
  std::size_t cells = 1;
  for (int k = 0; k < n_pairs; ++k) cells *= axis;
  const double step = kPi / grid_points;

  AngleSearchResult out;
  out.grid.resize(cells);
  kernels::for_each_index(exec, cells, [&](std::size_t cell) {
    std::vector<double> angles(static_cast<std::size_t>(n_pairs));
    std::size_t rem = cell;
    for (int k = n_pairs; k-- > 0;) {
      angles[static_cast<std::size_t>(k)] = static_cast<double>(rem % axis) * step;
      rem /= axis;
    }
    const double c = evaluate_from(initial, angles);
    out.grid[cell] = AngleSample{std::move(angles), c};
  });

  out.best_angles = out.grid.front().angles;
  out.best_concurrence = out.grid.front().concurrence;
  for (const auto& sample : out.grid)
    if (improves(sample.concurrence, sample.angles, out.best_concurrence, out.best_angles)) {
      out.best_angles = sample.angles;
      out.best_concurrence = sample.concurrence;
    }

  std::size_t neighbourhood = 1;
  for (int k = 0; k < n_pairs; ++k) neighbourhood *= 3;
  double h = step;
  for (int round = 0; round < refine_rounds; ++round) {
    h /= 2.0;
    std::vector<std::vector<double>> candidates;
    for (std::size_t code = 0; code < neighbourhood; ++code) {
      std::vector<double> angles = out.best_angles;
      std::size_t rem = code;
      bool inside = true;
      for (int k = n_pairs; k-- > 0;) {
        const int offset = static_cast<int>(rem % 3) - 1;
        rem /= 3;
        double& a = angles[static_cast<std::size_t>(k)];
        a += offset * h;
        if (a < 0.0 && a > -1e-12) a = 0.0;
        if (a > kPi && a < kPi + 1e-12) a = kPi;
        if (a < 0.0 || a > kPi) inside = false;
      }
      if (inside && angles != out.best_angles) candidates.push_back(std::move(angles));
    }
    std::vector<double> values(candidates.size());
    kernels::for_each_index(exec, candidates.size(),
                            [&](std::size_t i) { values[i] = evaluate_from(initial, candidates[i]); });
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (improves(values[i], candidates[i], out.best_concurrence, out.best_angles)) {
        out.best_angles = candidates[i];
        out.best_concurrence = values[i];
      }
  }
  return out;
}

// ---------------------------------------------------------------------------

ExperimentResult coherent_field_rotation(Complex alpha, Complex beta, Complex eta, std::optional<int> cutoff) {
  const int c = cutoff.value_or(default_coherent_cutoff(eta));
  const CoherentState field = coherent_mode_state(c, eta, "field");
  if (field.truncation_weight > kMaxTruncationWeight)
    throw std::invalid_argument("coherent_field_rotation: cutoff " + std::to_string(c) +
                                " too small for |eta| = " + format_number(std::abs(eta)) + " (truncation weight " +
                                format_number(field.truncation_weight) + " > 1e-8)");
  const PureState target = target_state(alpha, beta);
  const PureState ideal = ideal_rotated_state(alpha, beta);
  const PureState initial = tensor(target, field.state);
  const double t = std::abs(eta) > 0.0 ? kPi / (4.0 * std::abs(eta)) : 0.0;
  const LinearOp h = jc_hamiltonian(initial.layout(), {kTarget, {"field"}, 1.0});
  const DensityOp rho = partial_trace(Propagator(h).evolve(initial, t), {kTarget});

  ExperimentResult result{"coherent_field_rotation",
                          {{"alpha", format_complex(alpha)},
                           {"beta", format_complex(beta)},
                           {"eta", format_complex(eta)},
                           {"cutoff", std::to_string(c)}},
                          {},
                          {}};
  result.set("fidelity", fidelity(rho, ideal));
  result.set("initial_fidelity", std::norm(ideal.amplitudes().dot(target.amplitudes())));
  result.set("truncation_weight", field.truncation_weight);
  result.set("interaction_time", t);
  return result;
}

// ---------------------------------------------------------------------------

std::vector<Table1Row> table1_summary(int n_ancilla) {
  if (n_ancilla < 1) throw std::invalid_argument("number of ancillary particles must be >= 1");
  std::vector<Table1Row> rows;

  const auto absorption = massless_absorption();
  rows.push_back({"Massless bosons", concurrence(absorption.targets), "1",
                  "photon absorbed by the target atoms (Jt = pi/2)",
                  absorption.result.at("overlap_with_absorbed_state"), "inf"});

  const TwoQubitDensity condensate = target_pair_state(condensate_coherence(n_ancilla));
  rows.push_back({"Massive bosons", concurrence(condensate), "1-1/(2N)", "Horodecki M of the target pair",
                  horodecki_m(condensate), "inf"});

  RotationProtocolParams rotation;
  rotation.n_ancillas = n_ancilla;
  rows.push_back({"Massless fermions", std::nullopt, "1",
                  "sequential-rotation fidelity with N fermionic coherent ancillas",
                  sequential_rotation(rotation).at("fidelity"), "inf"});

  const int pairs = std::min(n_ancilla, 2);
  const auto search = optimize_angles(pairs, 16, 4);
  rows.push_back({"Massive fermions", search.best_concurrence, "1/2",
                  "optimal equal-angle mixing over " + std::to_string(pairs) + " ancilla pair(s)",
                  std::nullopt, "N"});
  return rows;
}

}  // namespace modent
