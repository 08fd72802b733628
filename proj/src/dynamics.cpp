#include "modent/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "modent/kernels.hpp"

namespace modent {
namespace {

void require_qubit(const SystemLayout& layout, const std::string& label) {
  if (!std::holds_alternative<TwoLevel>(layout.at(label).kind))
    throw std::invalid_argument("'" + label + "' is not a TwoLevel subsystem");
}

void require_mode(const SystemLayout& layout, const std::string& label) {
  if (!is_mode(layout.at(label).kind)) throw std::invalid_argument("'" + label + "' is not a field mode");
}

void require_fermionic(const SystemLayout& layout, const std::string& label) {
  if (!std::holds_alternative<FermionicMode>(layout.at(label).kind))
    throw std::invalid_argument("'" + label + "' is not a FermionicMode subsystem");
}

void validate(const SystemLayout& layout, const CouplingSpec& spec) {
  if (!(spec.strength > 0.0) || !std::isfinite(spec.strength))
    throw std::invalid_argument("coupling strength must be a finite positive number");
  if (spec.mode_labels.empty()) throw std::invalid_argument("coupling needs at least one mode");
  require_qubit(layout, spec.qubit_label);
  std::vector<std::string> all = spec.mode_labels;
  all.push_back(spec.qubit_label);
  layout.positions_of(all);  // unknown or repeated labels
  for (const auto& m : spec.mode_labels) require_mode(layout, m);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix exchange_term(const Matrix& lowering, double strength) {
  const Complex i{0.0, 1.0};
  return strength * (i * kron(ops::sigma_plus(), lowering) - i * kron(ops::sigma_minus(), lowering.adjoint()));
}

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace

MixingAngle::MixingAngle(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::invalid_argument("mixing angle must lie in [0, pi], got " + std::to_string(theta));
}

LinearOp ladder_coupling_hamiltonian(const SystemLayout& layout, const std::string& qubit_label,
                                     const std::string& mode_label, const Matrix& lowering, double strength) {
  validate(layout, CouplingSpec{qubit_label, {mode_label}, strength});
  return embed_operator(layout, exchange_term(lowering, strength), {qubit_label, mode_label});
}

LinearOp jc_hamiltonian(const SystemLayout& layout, const CouplingSpec& spec) {
  validate(layout, spec);
  if (spec.mode_labels.size() != 1) throw std::invalid_argument("jc_hamiltonian: exactly one mode expected");
  const auto& mode = spec.mode_labels.front();
  return ladder_coupling_hamiltonian(layout, spec.qubit_label, mode, ops::annihilation(layout.at(mode).kind),
                                     spec.strength);
}

LinearOp collective_jc_hamiltonian(const SystemLayout& layout, const CouplingSpec& spec) {
  validate(layout, spec);
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(layout.dimension()),
                            static_cast<Eigen::Index>(layout.dimension()));
  for (const auto& mode : spec.mode_labels)
    sum += embed_operator(layout, exchange_term(ops::annihilation(layout.at(mode).kind), spec.strength),
                          {spec.qubit_label, mode})
               .matrix();
  return LinearOp(layout, std::move(sum));
}

Matrix collective_mode_lowering(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("collective mode needs at least one constituent mode");
  Matrix b = Matrix::Zero(n_modes + 1, n_modes + 1);
  for (int k = 1; k <= n_modes; ++k)
    b(k - 1, k) = std::sqrt(static_cast<double>(k) * (n_modes - k + 1) / n_modes);
  return b;
}

Vector collective_mode_amplitudes(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("collective mode needs at least one constituent mode");
  Vector amps(n_modes + 1);
  for (int k = 0; k <= n_modes; ++k)
    amps(k) = std::exp(0.5 * (log_binomial(n_modes, k) - n_modes * std::log(2.0)));
  return amps / amps.norm();
}

// ---------------------------------------------------------------------------

Propagator::Propagator(const LinearOp& hamiltonian) : layout_(hamiltonian.layout()) {
  const Matrix& h = hamiltonian.matrix();
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tolerance::kHermitian * scale)
    throw std::invalid_argument("Propagator: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()));
  if (solver.info() != Eigen::Success) throw std::runtime_error("Propagator: eigendecomposition failed");
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

PureState Propagator::evolve(const PureState& state, double t) const {
  if (!(state.layout() == layout_)) throw std::invalid_argument("evolve: state layout does not match Hamiltonian");
  if (t == 0.0) return state;
  const Complex minus_i{0.0, -1.0};
  Vector coefficients = eigenvectors_.adjoint() * state.amplitudes();
  for (Eigen::Index k = 0; k < coefficients.size(); ++k) coefficients(k) *= std::exp(minus_i * energies_(k) * t);
  return PureState(layout_, eigenvectors_ * coefficients);
}

Matrix Propagator::unitary(double t) const {
  const Complex minus_i{0.0, -1.0};
  Vector phases(energies_.size());
  for (Eigen::Index k = 0; k < energies_.size(); ++k) phases(k) = std::exp(minus_i * energies_(k) * t);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

PureState evolve(const PureState& state, const LinearOp& hamiltonian, double t) {
  if (!(state.layout() == hamiltonian.layout()))
    throw std::invalid_argument("evolve: state layout does not match Hamiltonian");
  return Propagator(hamiltonian).evolve(state, t);
}

// ---------------------------------------------------------------------------

namespace {

void validate_mixing(const SystemLayout& layout, const std::string& qubit, const std::string& flying,
                     const std::string& ancilla) {
  layout.positions_of({qubit, flying, ancilla});
  require_qubit(layout, qubit);
  require_fermionic(layout, flying);
  require_fermionic(layout, ancilla);
}

// Local indices over (qubit, flying, ancilla), each of dimension 2.
constexpr Eigen::Index kFlyingOccupied = 1 * 4 + 1 * 2 + 0;   // |e,1,0>
constexpr Eigen::Index kAncillaOccupied = 1 * 4 + 0 * 2 + 1;  // |e,0,1>

}  // namespace

LinearOp controlled_mixing_unitary(const SystemLayout& layout, const std::string& qubit_label,
                                   const std::string& flying_label, const std::string& ancilla_label,
                                   MixingAngle angle) {
  validate_mixing(layout, qubit_label, flying_label, ancilla_label);
  const double c = std::cos(angle.radians());
  const double s = std::sin(angle.radians());
  Matrix local = ops::identity(8);
  local(kFlyingOccupied, kFlyingOccupied) = c;
  local(kFlyingOccupied, kAncillaOccupied) = -s;
  local(kAncillaOccupied, kFlyingOccupied) = s;
  local(kAncillaOccupied, kAncillaOccupied) = c;
  return embed_operator(layout, local, {qubit_label, flying_label, ancilla_label});
}

PureState apply_controlled_mixing(const PureState& state, const std::string& qubit_label,
                                  const std::string& flying_label, const std::string& ancilla_label,
                                  MixingAngle angle) {
  const auto& layout = state.layout();
  validate_mixing(layout, qubit_label, flying_label, ancilla_label);
  Vector amps = state.amplitudes();
  kernels::parallel::rotate_pair(amps, layout.dims(), layout.positions_of({qubit_label, flying_label, ancilla_label}),
                                 {kExcited, 1, 0}, {kExcited, 0, 1}, std::cos(angle.radians()),
                                 std::sin(angle.radians()));
  return PureState(layout, std::move(amps));
}

LinearOp excitation_number(const SystemLayout& layout) {
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(layout.dimension()),
                            static_cast<Eigen::Index>(layout.dimension()));
  for (const auto& s : layout.subsystems()) sum += embed_operator(layout, ops::number(s.kind), {s.label}).matrix();
  return LinearOp(layout, std::move(sum));
}

}  // namespace modent
