#include "modent/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "modent/kernels.hpp"

namespace modent {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<Subsystem> concatenate(const SystemLayout& a, const SystemLayout& b) {
  auto subsystems = a.subsystems();
  for (const auto& s : b.subsystems()) {
    if (a.contains(s.label)) throw std::invalid_argument("tensor: label collision on '" + s.label + "'");
    subsystems.push_back(s);
  }
  return subsystems;
}

}  // namespace

std::size_t dimension(const SubsystemKind& kind) {
  return std::visit(overloaded{
                        [](const TwoLevel&) -> std::size_t { return 2; },
                        [](const BosonicMode& m) -> std::size_t {
                          if (m.cutoff < 1) throw std::invalid_argument("BosonicMode cutoff must be >= 1");
                          return static_cast<std::size_t>(m.cutoff) + 1;
                        },
                        [](const FermionicMode&) -> std::size_t { return 2; },
                    },
                    kind);
}

std::string to_string(const SubsystemKind& kind) {
  return std::visit(overloaded{
                        [](const TwoLevel&) { return std::string("TwoLevel"); },
                        [](const BosonicMode& m) { return "BosonicMode(" + std::to_string(m.cutoff) + ")"; },
                        [](const FermionicMode&) { return std::string("FermionicMode"); },
                    },
                    kind);
}

bool is_mode(const SubsystemKind& kind) { return !std::holds_alternative<TwoLevel>(kind); }

// ---------------------------------------------------------------------------

SystemLayout::SystemLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) throw std::invalid_argument("layout: subsystem list is empty");
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (!seen.insert(s.label).second) throw std::invalid_argument("layout: duplicate label '" + s.label + "'");
    dims_.push_back(modent::dimension(s.kind));
  }
  strides_.assign(dims_.size(), 1);
  for (std::size_t i = dims_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * dims_[i];
  dimension_ = strides_[0] * dims_[0];
}

bool SystemLayout::contains(std::string_view label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const Subsystem& s) { return s.label == label; });
}

std::size_t SystemLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i)
    if (subsystems_[i].label == label) return i;
  throw std::invalid_argument("layout: unknown label '" + std::string(label) + "'");
}

const Subsystem& SystemLayout::at(std::string_view label) const { return subsystems_[index_of(label)]; }

std::vector<std::size_t> SystemLayout::positions_of(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> positions;
  positions.reserve(labels.size());
  for (const auto& l : labels) {
    const auto p = index_of(l);
    if (std::find(positions.begin(), positions.end(), p) != positions.end())
      throw std::invalid_argument("layout: label '" + l + "' listed twice");
    positions.push_back(p);
  }
  return positions;
}

std::size_t SystemLayout::flat_index(const std::vector<int>& levels) const {
  if (levels.size() != subsystems_.size())
    throw std::invalid_argument("layout: expected " + std::to_string(subsystems_.size()) + " levels, got " +
                                std::to_string(levels.size()));
  std::size_t flat = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0 || static_cast<std::size_t>(levels[i]) >= dims_[i])
      throw std::out_of_range("layout: level " + std::to_string(levels[i]) + " out of range for '" +
                              subsystems_[i].label + "' (dimension " + std::to_string(dims_[i]) + ")");
    flat += static_cast<std::size_t>(levels[i]) * strides_[i];
  }
  return flat;
}

std::vector<int> SystemLayout::levels_of(std::size_t flat) const {
  if (flat >= dimension_) throw std::out_of_range("layout: flat index out of range");
  std::vector<int> levels(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) levels[i] = static_cast<int>((flat / strides_[i]) % dims_[i]);
  return levels;
}

SystemLayout SystemLayout::select(const std::vector<std::string>& labels) const {
  std::vector<Subsystem> picked;
  for (auto p : positions_of(labels)) picked.push_back(subsystems_[p]);
  return SystemLayout(std::move(picked));
}

std::vector<std::string> SystemLayout::labels() const {
  std::vector<std::string> out;
  for (const auto& s : subsystems_) out.push_back(s.label);
  return out;
}

// ---------------------------------------------------------------------------

PureState::PureState(SystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dimension())
    throw std::invalid_argument("PureState: amplitude count does not match layout dimension");
  if (!amplitudes_.allFinite()) throw std::invalid_argument("PureState: non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > tolerance::kNorm)
    throw std::invalid_argument("PureState: state is not normalized");
}

DensityOp::DensityOp(SystemLayout layout, Matrix matrix) : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(layout_.dimension());
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw std::invalid_argument("DensityOp: matrix dimension does not match layout");
  if (!matrix_.allFinite()) throw std::invalid_argument("DensityOp: non-finite entry");
  if (max_abs(matrix_ - matrix_.adjoint()) > tolerance::kHermitian)
    throw std::invalid_argument("DensityOp: matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > tolerance::kTrace)
    throw std::invalid_argument("DensityOp: trace is not 1");
  const Matrix herm = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < tolerance::kPositivity)
    throw std::invalid_argument("DensityOp: matrix is not positive semidefinite");
}

LinearOp::LinearOp(SystemLayout layout, Matrix matrix) : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(layout_.dimension());
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw std::invalid_argument("LinearOp: matrix dimension does not match layout");
}

LinearOp LinearOp::operator+(const LinearOp& other) const {
  if (!(layout_ == other.layout_)) throw std::invalid_argument("LinearOp: layout mismatch in sum");
  return LinearOp(layout_, matrix_ + other.matrix_);
}

LinearOp LinearOp::operator*(const LinearOp& other) const {
  if (!(layout_ == other.layout_)) throw std::invalid_argument("LinearOp: layout mismatch in product");
  return LinearOp(layout_, matrix_ * other.matrix_);
}

LinearOp LinearOp::adjoint() const { return LinearOp(layout_, matrix_.adjoint()); }

// ---------------------------------------------------------------------------

namespace ops {

Matrix identity(std::size_t dim) {
  return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Matrix sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(kExcited, kGround) = 1.0;
  return m;
}

Matrix sigma_minus() { return sigma_plus().adjoint(); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  const Complex i{0.0, 1.0};
  Matrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix annihilation(const SubsystemKind& kind) {
  if (!is_mode(kind)) throw std::invalid_argument("annihilation: subsystem is not a field mode");
  const auto d = static_cast<Eigen::Index>(dimension(kind));
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix number(const SubsystemKind& kind) {
  const auto d = static_cast<Eigen::Index>(dimension(kind));
  Matrix n = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

}  // namespace ops

// ---------------------------------------------------------------------------

SystemLayout compose_layout(std::vector<Subsystem> subsystems) { return SystemLayout(std::move(subsystems)); }

PureState basis_state(const SystemLayout& layout, const std::vector<int>& levels) {
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(layout.dimension()));
  amps(static_cast<Eigen::Index>(layout.flat_index(levels))) = 1.0;
  return PureState(layout, std::move(amps));
}

PureState superpose(const std::vector<std::pair<Complex, PureState>>& terms) {
  if (terms.empty()) throw std::invalid_argument("superpose: no terms");
  const auto& layout = terms.front().second.layout();
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(layout.dimension()));
  for (const auto& [coefficient, state] : terms) {
    if (!(state.layout() == layout)) throw std::invalid_argument("superpose: layout mismatch");
    sum += coefficient * state.amplitudes();
  }
  const double norm = sum.norm();
  if (!(norm > 1e-14)) throw std::invalid_argument("superpose: linear combination is the zero vector");
  return PureState(layout, sum / norm);
}

int default_coherent_cutoff(Complex eta) {
  const double r = std::abs(eta);
  return static_cast<int>(std::ceil(r * r + 8.0 * r + 20.0));
}

CoherentState coherent_mode_state(int cutoff, Complex eta, std::string label) {
  if (cutoff < 1) throw std::invalid_argument("coherent_mode_state: cutoff must be >= 1");
  Vector amps(cutoff + 1);
  amps(0) = 1.0;
  for (int n = 1; n <= cutoff; ++n) amps(n) = amps(n - 1) * eta / std::sqrt(static_cast<double>(n));

  // Poisson tail above the cutoff, summed in log space.
  const double x = std::norm(eta);
  double tail = 0.0;
  if (x > 0.0) {
    for (int n = cutoff + 1;; ++n) {
      const double term = std::exp(-x + n * std::log(x) - std::lgamma(n + 1.0));
      tail += term;
      if (n > x && term < 1e-18 * std::max(tail, 1e-300)) break;
      if (term == 0.0 && n > x) break;
    }
  }

  SystemLayout layout({{std::move(label), BosonicMode{cutoff}}});
  amps /= amps.norm();
  return CoherentState{PureState(std::move(layout), std::move(amps)), tail};
}

PureState tensor(const PureState& a, const PureState& b) {
  SystemLayout layout(concatenate(a.layout(), b.layout()));
  const auto db = b.amplitudes().size();
  Vector amps(a.amplitudes().size() * db);
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) amps.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return PureState(std::move(layout), std::move(amps));
}

LinearOp tensor(const LinearOp& a, const LinearOp& b) {
  SystemLayout layout(concatenate(a.layout(), b.layout()));
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  Matrix m(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return LinearOp(std::move(layout), std::move(m));
}

LinearOp embed_operator(const SystemLayout& layout, const Matrix& local, const std::vector<std::string>& targets) {
  if (targets.empty()) throw std::invalid_argument("embed_operator: no target subsystems");
  const auto positions = layout.positions_of(targets);
  return LinearOp(layout, kernels::parallel::embed_operator(layout.dims(), positions, local));
}

Vector apply_local(const PureState& state, const Matrix& local, const std::vector<std::string>& targets) {
  const auto positions = state.layout().positions_of(targets);
  return kernels::parallel::apply_local(state.amplitudes(), state.layout().dims(), positions, local);
}

PureState apply(const LinearOp& op, const PureState& state) {
  if (!(op.layout() == state.layout())) throw std::invalid_argument("apply: layout mismatch");
  return PureState(state.layout(), op.matrix() * state.amplitudes());
}

Complex expectation(const PureState& state, const LinearOp& op) {
  if (!(op.layout() == state.layout())) throw std::invalid_argument("expectation: layout mismatch");
  return state.amplitudes().dot(op.matrix() * state.amplitudes());
}

DensityOp to_density(const PureState& state) {
  return DensityOp(state.layout(), state.amplitudes() * state.amplitudes().adjoint());
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep-set is empty");
  const auto positions = rho.layout().positions_of(keep);
  return DensityOp(rho.layout().select(keep),
                   kernels::parallel::reduce_density(rho.matrix(), rho.layout().dims(), positions));
}

DensityOp partial_trace(const PureState& state, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep-set is empty");
  const auto positions = state.layout().positions_of(keep);
  return DensityOp(state.layout().select(keep),
                   kernels::parallel::reduce_pure(state.amplitudes(), state.layout().dims(), positions));
}

}  // namespace modent
