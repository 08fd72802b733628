#pragma once

// End-to-end detection experiments for the four particle classes.
//
// Units: J = 1, hbar = 1.  Target particles are TwoLevel subsystems with basis
// {g, e}; flying and ancillary modes are BosonicMode (massless bosons, coherent
// fields) or hard-core FermionicMode.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "modent/dynamics.hpp"
#include "modent/entanglement.hpp"
#include "modent/hilbert.hpp"
#include "modent/kernels.hpp"

namespace modent {

struct ExperimentResult {
  std::string name;
  std::map<std::string, std::string> params;
  std::map<std::string, double> scalars;
  std::vector<std::pair<double, double>> series;

  /// Throws std::domain_error for a non-finite value.
  void set(const std::string& key, double value);
  double at(const std::string& key) const;
};

// ---------------------------------------------------------------------------
// Massless bosons: absorption of a delocalized photon by two target atoms.

struct AbsorptionResult {
  TwoQubitDensity targets;
  ExperimentResult result;
};

AbsorptionResult massless_absorption();

// ---------------------------------------------------------------------------
// Massless fermions: rotating a target with fermionic coherent-state ancillas.

/// alpha|g> + beta|e>; throws if | |alpha|^2 + |beta|^2 - 1 | > 1e-12.
PureState target_state(Complex alpha, Complex beta);

/// ((alpha - beta)|g> + (alpha + beta)|e>) / sqrt(2)
PureState ideal_rotated_state(Complex alpha, Complex beta);

/// Closed-form reduced target state after one ancilla in (|0>+|1>)/sqrt(2)
/// interacted for Jt = pi/4.
DensityOp analytic_single_ancilla_state(Complex alpha, Complex beta);

struct SingleAncillaResult {
  DensityOp simulated;
  DensityOp analytic;
  double fidelity_vs_ideal;
};

SingleAncillaResult single_ancilla_rotation(Complex alpha, Complex beta);

struct RotationProtocolParams {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  int n_ancillas = 1;
  /// Per-ancilla interaction time; pi/(2N) when unset.
  std::optional<double> per_step_duration;
};

double default_step_duration(int n_ancillas);

/// One interaction step of the target with a fresh (|0>+|1>)/sqrt(2) ancilla,
/// the ancilla traced out afterwards.  Stored as its two Kraus operators.
class RotationChannel {
 public:
  explicit RotationChannel(double duration);
  Eigen::Matrix2cd apply(const Eigen::Matrix2cd& rho) const;
  const Eigen::Matrix2cd& kraus(int ancilla_level) const { return kraus_[ancilla_level]; }

 private:
  Eigen::Matrix2cd kraus_[2];
};

/// Reduced target state after the N sequential steps.
DensityOp sequential_rotation_state(const RotationProtocolParams& params);

/// Fidelity of the sequential protocol against ideal_rotated_state.
ExperimentResult sequential_rotation(const RotationProtocolParams& params);

/// Compares simultaneous coupling to N ancillas (each (|0>+|1>)/sqrt(2)) for
/// Jt = pi/(4 sqrt(N)) with one collective mode b = sum_k a_k / sqrt(N)
/// coupled at J sqrt(N).  Scalars: trace_distance, fidelity_simultaneous,
/// fidelity_collective_mode, fidelity_gain, fidelity_single_fermionic_ancilla.
ExperimentResult simultaneous_coupling_check(int n_modes, Complex alpha = 1.0, Complex beta = 0.0);

// ---------------------------------------------------------------------------
// Massive fermions: flying particle disposal into entangled ancilla pairs.

enum class Side { left, right };

struct FermionProtocolParams {
  int n_pairs = 1;
  std::vector<MixingAngle> angles;  ///< one per pair, same on both sides
};

struct FermionProtocolResult {
  TwoQubitDensity targets;
  double concurrence;
};

/// target_L, target_R, flying_L, flying_R, then anc_L<j>, anc_R<j> for j = 1..n.
SystemLayout fermion_protocol_layout(int n_pairs);

/// (|10>|eg> + |01>|ge>)/sqrt(2) x [(|10> + |01>)/sqrt(2)]^{x n}
PureState fermion_protocol_initial_state(int n_pairs);

/// Mixing on (target, flying, anc<pair>) of one side; pair is 1-based.
PureState apply_side_mixing(const PureState& state, Side side, int pair, MixingAngle angle);

FermionProtocolResult massive_fermion_protocol(const FermionProtocolParams& params);

/// Concurrence for raw angles (no MixingAngle validation beyond range).
double fermion_concurrence(const std::vector<double>& angles);

struct AngleSample {
  std::vector<double> angles;
  double concurrence;
};

struct AngleSearchResult {
  std::vector<double> best_angles;
  double best_concurrence;
  std::vector<AngleSample> grid;  ///< row-major, first angle slowest
};

/// Exhaustive grid with nodes k*pi/grid_points (k = 0..grid_points) on each
/// axis, then refine_rounds of local refinement, each halving the step and
/// scanning the 3^n neighbourhood of the incumbent.  Ties within 1e-12 go to
/// the lexicographically smallest angle tuple.
AngleSearchResult optimize_angles(int n_pairs, int grid_points, int refine_rounds,
                                  kernels::Execution exec = kernels::Execution::parallel);

// ---------------------------------------------------------------------------
// Rotation with a bosonic coherent field.

/// Couples the target to a truncated coherent state |eta> for Jt = pi/(4|eta|)
/// (0 when eta = 0).  Throws if the truncation weight exceeds 1e-8.
ExperimentResult coherent_field_rotation(Complex alpha, Complex beta, Complex eta,
                                         std::optional<int> cutoff = std::nullopt);

// ---------------------------------------------------------------------------

struct Table1Row {
  std::string particle_type;
  std::optional<double> concurrence;  ///< simulated; empty where not simulated
  std::string expected;               ///< closed form
  std::string evidence;               ///< how the row was obtained
  std::optional<double> evidence_value;
  std::string max_repetitions;        ///< static annotation
};

std::vector<Table1Row> table1_summary(int n_ancilla);

}  // namespace modent
