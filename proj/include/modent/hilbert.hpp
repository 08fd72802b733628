#pragma once

// Composite Hilbert spaces of two-level particles and truncated field modes.
//
// Basis ordering contract: the flat index of a basis ket is row-major over the
// subsystem list, i.e. the first-listed subsystem varies slowest.  Every
// operation in this library (tensor, embed, partial trace) respects it.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace modent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kGround = 0;
inline constexpr int kExcited = 1;

namespace tolerance {
/// Accepted |norm - 1| when constructing a PureState.
inline constexpr double kNorm = 1e-10;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
/// Smallest accepted eigenvalue of a density operator.
inline constexpr double kPositivity = -1e-10;
}  // namespace tolerance

struct TwoLevel {
  bool operator==(const TwoLevel&) const = default;
};

struct BosonicMode {
  int cutoff = 1;  ///< highest retained Fock level
  bool operator==(const BosonicMode&) const = default;
};

/// Hard-core mode: occupation 0 or 1, no anticommutation sign strings.
struct FermionicMode {
  bool operator==(const FermionicMode&) const = default;
};

using SubsystemKind = std::variant<TwoLevel, BosonicMode, FermionicMode>;

std::size_t dimension(const SubsystemKind& kind);
std::string to_string(const SubsystemKind& kind);
bool is_mode(const SubsystemKind& kind);

struct Subsystem {
  std::string label;
  SubsystemKind kind;
  bool operator==(const Subsystem&) const = default;
};

class SystemLayout {
 public:
  /// Throws std::invalid_argument on an empty list, duplicate labels or a
  /// bosonic cutoff below 1.
  explicit SystemLayout(std::vector<Subsystem> subsystems);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }
  std::size_t size() const { return subsystems_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t stride(std::size_t position) const { return strides_[position]; }

  bool contains(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  const Subsystem& at(std::string_view label) const;
  std::vector<std::size_t> positions_of(const std::vector<std::string>& labels) const;

  std::size_t flat_index(const std::vector<int>& levels) const;
  std::vector<int> levels_of(std::size_t flat) const;

  /// Layout made of the named subsystems, in the order given.
  SystemLayout select(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels() const;

  bool operator==(const SystemLayout& other) const { return subsystems_ == other.subsystems_; }

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

class PureState {
 public:
  PureState(SystemLayout layout, Vector amplitudes);

  const SystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return layout_.dimension(); }
  double norm() const { return amplitudes_.norm(); }

 private:
  SystemLayout layout_;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityOp {
 public:
  DensityOp(SystemLayout layout, Matrix matrix);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return layout_.dimension(); }

 private:
  SystemLayout layout_;
  Matrix matrix_;
};

class LinearOp {
 public:
  LinearOp(SystemLayout layout, Matrix matrix);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return layout_.dimension(); }

  LinearOp operator+(const LinearOp& other) const;
  LinearOp operator*(const LinearOp& other) const;
  LinearOp adjoint() const;

 private:
  SystemLayout layout_;
  Matrix matrix_;
};

// Local operators in the {g, e} / Fock bases.
namespace ops {
Matrix identity(std::size_t dim);
Matrix sigma_plus();   ///< |e><g|
Matrix sigma_minus();  ///< |g><e|
/// Pauli matrices with sigma_z|g> = +|g> (g plays spin-up).
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
/// Annihilation operator of a mode; truncated sqrt(n) ladder for bosons.
Matrix annihilation(const SubsystemKind& kind);
/// Occupation number; for TwoLevel the excitation projector |e><e|.
Matrix number(const SubsystemKind& kind);
}  // namespace ops

SystemLayout compose_layout(std::vector<Subsystem> subsystems);

PureState basis_state(const SystemLayout& layout, const std::vector<int>& levels);

/// Normalized sum of coefficient * state over states sharing one layout.
PureState superpose(const std::vector<std::pair<Complex, PureState>>& terms);

struct CoherentState {
  PureState state;
  double truncation_weight;  ///< Poisson weight above the cutoff, exp(-|eta|^2) sum_{n>c} |eta|^2n/n!
};

/// Truncated bosonic coherent state on a single BosonicMode(cutoff) subsystem.
CoherentState coherent_mode_state(int cutoff, Complex eta, std::string label = "mode");

/// ceil(|eta|^2 + 8|eta| + 20)
int default_coherent_cutoff(Complex eta);

PureState tensor(const PureState& a, const PureState& b);
LinearOp tensor(const LinearOp& a, const LinearOp& b);

/// `local` acts on the ordered targets (first target slowest), identity elsewhere.
LinearOp embed_operator(const SystemLayout& layout, const Matrix& local,
                        const std::vector<std::string>& targets);

/// local operator applied to the targets of a state without building the full matrix.
Vector apply_local(const PureState& state, const Matrix& local, const std::vector<std::string>& targets);

PureState apply(const LinearOp& op, const PureState& state);

Complex expectation(const PureState& state, const LinearOp& op);

DensityOp to_density(const PureState& state);

/// Reduced state on `keep`, in the order given.
DensityOp partial_trace(const DensityOp& rho, const std::vector<std::string>& keep);
DensityOp partial_trace(const PureState& state, const std::vector<std::string>& keep);

}  // namespace modent
