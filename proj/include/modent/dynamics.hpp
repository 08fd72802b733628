#pragma once

// Hamiltonians, propagators and the fixed mixing unitary.  hbar = 1; times are
// in units of 1/J.

#include <string>
#include <vector>

#include "modent/hilbert.hpp"

namespace modent {

struct CouplingSpec {
  std::string qubit_label;
  std::vector<std::string> mode_labels;
  double strength = 1.0;  ///< J > 0
};

/// Angle of the mixing rotation, restricted to [0, pi].
class MixingAngle {
 public:
  explicit MixingAngle(double theta);
  double radians() const { return theta_; }
  bool operator==(const MixingAngle&) const = default;

 private:
  double theta_;
};

/// J (i sigma_+ a - i sigma_- a^dagger) for a single mode.
LinearOp jc_hamiltonian(const SystemLayout& layout, const CouplingSpec& spec);

/// J sum_k (i sigma_+ a_k - i sigma_- a_k^dagger).
LinearOp collective_jc_hamiltonian(const SystemLayout& layout, const CouplingSpec& spec);

/// strength (i sigma_+ L - i sigma_- L^dagger) with an explicit lowering
/// operator L on `mode_label`.
LinearOp ladder_coupling_hamiltonian(const SystemLayout& layout, const std::string& qubit_label,
                                     const std::string& mode_label, const Matrix& lowering, double strength);

/// b = sum_k a_k / sqrt(N) over N hard-core modes, restricted to the symmetric
/// (Dicke) ladder |D_0> ... |D_N>: <D_{k-1}| b |D_k> = sqrt(k (N - k + 1) / N).
Matrix collective_mode_lowering(int n_modes);

/// (|0> + |1>)^{x N} / 2^{N/2} in the Dicke basis: sqrt(C(N, k) / 2^N).
Vector collective_mode_amplitudes(int n_modes);

/// exp(-i H t) from one Hermitian eigendecomposition, reusable across times.
class Propagator {
 public:
  explicit Propagator(const LinearOp& hamiltonian);

  PureState evolve(const PureState& state, double t) const;
  Matrix unitary(double t) const;
  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  SystemLayout layout_;
  Eigen::VectorXd energies_;
  Matrix eigenvectors_;
};

PureState evolve(const PureState& state, const LinearOp& hamiltonian, double t);

/// Identity except on the ordered pair {|e,1,0>, |e,0,1>} of (qubit, flying,
/// ancilla), where it is [[cos, -sin], [sin, cos]].
LinearOp controlled_mixing_unitary(const SystemLayout& layout, const std::string& qubit_label,
                                   const std::string& flying_label, const std::string& ancilla_label,
                                   MixingAngle angle);

/// Same action as controlled_mixing_unitary, applied in place on the amplitudes.
PureState apply_controlled_mixing(const PureState& state, const std::string& qubit_label,
                                  const std::string& flying_label, const std::string& ancilla_label,
                                  MixingAngle angle);

/// Qubit excitations plus mode occupations, summed over the layout.
LinearOp excitation_number(const SystemLayout& layout);

}  // namespace modent
