#include "modent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace modent {
namespace {

constexpr double kTwoQubitTolerance = 1e-10;

Eigen::Matrix4cd spin_flip() {
  Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

Eigen::Matrix4cd kron2(const Matrix& a, const Matrix& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Eigen::Matrix4cd as_matrix4(const DensityOp& rho) {
  const auto& layout = rho.layout();
  if (layout.size() != 2 || layout.dims()[0] != 2 || layout.dims()[1] != 2)
    throw std::invalid_argument("TwoQubitDensity: layout must be two two-dimensional subsystems");
  return rho.matrix();
}

}  // namespace

TwoQubitDensity::TwoQubitDensity(const Eigen::Matrix4cd& matrix) : matrix_(matrix) {
  if (!matrix_.allFinite()) throw std::invalid_argument("TwoQubitDensity: non-finite entry");
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kTwoQubitTolerance)
    throw std::invalid_argument("TwoQubitDensity: matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > kTwoQubitTolerance)
    throw std::invalid_argument("TwoQubitDensity: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(0.5 * (matrix_ + matrix_.adjoint()), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kTwoQubitTolerance)
    throw std::invalid_argument("TwoQubitDensity: matrix is not positive semidefinite");
}

TwoQubitDensity::TwoQubitDensity(const DensityOp& rho) : TwoQubitDensity(as_matrix4(rho)) {}

double fidelity(const DensityOp& rho, const PureState& ideal) {
  if (rho.dimension() != ideal.dimension()) throw std::invalid_argument("fidelity: dimension mismatch");
  const auto& psi = ideal.amplitudes();
  const double f = psi.dot(rho.matrix() * psi).real();
  return std::clamp(f, 0.0, 1.0);
}

double concurrence(const TwoQubitDensity& rho) {
  // rho = W W^dagger with W = V sqrt(D); the Wootters lambdas are the singular
  // values of tau = W^T (sigma_y x sigma_y) W.
  const Eigen::Matrix4cd herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(herm);
  Eigen::Matrix4cd w = solver.eigenvectors();
  for (int k = 0; k < 4; ++k) w.col(k) *= std::sqrt(std::max(solver.eigenvalues()(k), 0.0));
  const Eigen::Matrix4cd tau = w.transpose() * spin_flip() * w;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const Eigen::Vector4d s = svd.singularValues();  // descending
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

TwoQubitDensity target_pair_state(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma out of range [0,1]: " + std::to_string(gamma));
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(1, 1) = 0.5;
  m(2, 2) = 0.5;
  m(1, 2) = 0.5 * gamma;
  m(2, 1) = 0.5 * gamma;
  return TwoQubitDensity(m);
}

double condensate_coherence(int n_ancillas) {
  if (n_ancillas < 1) throw std::invalid_argument("number of ancillary particles must be >= 1");
  return 1.0 - 1.0 / (2.0 * n_ancillas);
}

CorrelationTensor correlation_tensor(const TwoQubitDensity& rho) {
  const Matrix paulis[3] = {ops::pauli_x(), ops::pauli_y(), ops::pauli_z()};
  CorrelationTensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.values(i, j) = (rho.matrix() * kron2(paulis[i], paulis[j])).trace().real();
  return t;
}

double horodecki_m(const TwoQubitDensity& rho) {
  const Eigen::Matrix3d& t = correlation_tensor(rho).values;
  const Eigen::Matrix3d gram = t.transpose() * t;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(0.5 * (gram + gram.transpose()), Eigen::EigenvaluesOnly);
  const auto& e = solver.eigenvalues();  // ascending
  return e(1) + e(2);
}

bool chsh_violated(const TwoQubitDensity& rho) { return horodecki_m(rho) > 1.0; }

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("trace_distance: dimension mismatch");
  const Matrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace modent
