#pragma once

#include <Eigen/Dense>

#include "modent/hilbert.hpp"

namespace modent {

/// Two-qubit density matrix in the {gg, ge, eg, ee} basis.
class TwoQubitDensity {
 public:
  /// Hermitian, unit trace and PSD within 1e-10, otherwise std::invalid_argument.
  explicit TwoQubitDensity(const Eigen::Matrix4cd& matrix);
  /// Requires a layout of exactly two two-dimensional subsystems.
  explicit TwoQubitDensity(const DensityOp& rho);

  const Eigen::Matrix4cd& matrix() const { return matrix_; }

 private:
  Eigen::Matrix4cd matrix_;
};

/// T_ij = Tr[rho (sigma_i x sigma_j)], i, j over (x, y, z).
struct CorrelationTensor {
  Eigen::Matrix3d values;
};

/// <ideal| rho |ideal>, clamped to [0, 1].
double fidelity(const DensityOp& rho, const PureState& ideal);

/// Wootters concurrence.
double concurrence(const TwoQubitDensity& rho);

/// 1/2 [[0,0,0,0],[0,1,g,0],[0,g,1,0],[0,0,0,0]], the target-pair state left
/// by the condensate protocol with coherence gamma in [0, 1].
TwoQubitDensity target_pair_state(double gamma);

/// gamma = 1 - 1/(2N)
double condensate_coherence(int n_ancillas);

CorrelationTensor correlation_tensor(const TwoQubitDensity& rho);

/// Sum of the two largest eigenvalues of T^T T.
double horodecki_m(const TwoQubitDensity& rho);

/// Some CHSH setting is violated iff horodecki_m > 1.
bool chsh_violated(const TwoQubitDensity& rho);

/// (1/2) || a - b ||_1 for Hermitian a, b.
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace modent
