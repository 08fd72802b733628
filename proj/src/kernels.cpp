#include "modent/kernels.hpp"

#include <complex>
#include <stdexcept>

#include <omp.h>

namespace modent::kernels {
namespace {

using Complex = std::complex<double>;

// Loops shorter than this stay on one thread.
constexpr long long kParallelThreshold = 256;

std::size_t product(const Dims& dims, const Positions& positions) {
  std::size_t p = 1;
  for (auto pos : positions) p *= dims[pos];
  return p;
}

std::size_t total(const Dims& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

Dims strides(const Dims& dims) {
  Dims s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

void check_positions(const Dims& dims, const Positions& positions) {
  std::vector<bool> seen(dims.size(), false);
  for (auto p : positions) {
    if (p >= dims.size()) throw std::out_of_range("kernels: subsystem position out of range");
    if (seen[p]) throw std::invalid_argument("kernels: repeated subsystem position");
    seen[p] = true;
  }
}

void check_local(const Dims& dims, const Positions& targets, const Matrix& local) {
  check_positions(dims, targets);
  const auto d = static_cast<Eigen::Index>(product(dims, targets));
  if (local.rows() != d || local.cols() != d)
    throw std::invalid_argument("kernels: local operator dimension does not match targets");
}

// Digits of `index` over `positions`, row-major.
std::vector<std::size_t> split(std::size_t index, const Dims& dims, const Positions& positions) {
  std::vector<std::size_t> digits(positions.size());
  for (std::size_t k = positions.size(); k-- > 0;) {
    digits[k] = index % dims[positions[k]];
    index /= dims[positions[k]];
  }
  return digits;
}

std::size_t digit(std::size_t flat, const Dims& dims, const Dims& stride, std::size_t pos) {
  return (flat / stride[pos]) % dims[pos];
}

std::size_t local_index(std::size_t flat, const Dims& dims, const Dims& stride, const Positions& positions) {
  std::size_t l = 0;
  for (auto p : positions) l = l * dims[p] + digit(flat, dims, stride, p);
  return l;
}

bool same_outside(std::size_t r, std::size_t c, const Dims& dims, const Dims& stride, const Positions& rest) {
  for (auto p : rest)
    if (digit(r, dims, stride, p) != digit(c, dims, stride, p)) return false;
  return true;
}

std::size_t pair_offset(const Dims& dims, const Positions& positions, const std::vector<int>& levels) {
  if (levels.size() != positions.size())
    throw std::invalid_argument("kernels: one level per position required");
  const auto stride = strides(dims);
  std::size_t off = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (levels[k] < 0 || static_cast<std::size_t>(levels[k]) >= dims[positions[k]])
      throw std::out_of_range("kernels: level out of range");
    off += static_cast<std::size_t>(levels[k]) * stride[positions[k]];
  }
  return off;
}

}  // namespace

std::vector<std::size_t> offsets(const Dims& dims, const Positions& positions) {
  const auto stride = strides(dims);
  std::vector<std::size_t> out{0};
  for (auto p : positions) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[p]);
    for (auto base : out)
      for (std::size_t v = 0; v < dims[p]; ++v) next.push_back(base + v * stride[p]);
    out = std::move(next);
  }
  return out;
}

Positions complement(std::size_t n_subsystems, const Positions& positions) {
  std::vector<bool> used(n_subsystems, false);
  for (auto p : positions) used.at(p) = true;
  Positions rest;
  for (std::size_t i = 0; i < n_subsystems; ++i)
    if (!used[i]) rest.push_back(i);
  return rest;
}

int max_threads() { return omp_get_max_threads(); }

// ---------------------------------------------------------------------------
// serial reference

namespace serial {

Matrix embed_operator(const Dims& dims, const Positions& targets, const Matrix& local) {
  check_local(dims, targets, local);
  const auto n = total(dims);
  const auto stride = strides(dims);
  const auto rest = complement(dims.size(), targets);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (!same_outside(r, c, dims, stride, rest)) continue;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          local(static_cast<Eigen::Index>(local_index(r, dims, stride, targets)),
                static_cast<Eigen::Index>(local_index(c, dims, stride, targets)));
    }
  }
  return out;
}

Vector apply_local(const Vector& amplitudes, const Dims& dims, const Positions& targets, const Matrix& local) {
  check_local(dims, targets, local);
  const auto n = total(dims);
  if (static_cast<std::size_t>(amplitudes.size()) != n)
    throw std::invalid_argument("kernels: amplitude vector does not match dims");
  const auto stride = strides(dims);
  const auto rest = complement(dims.size(), targets);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc{0.0, 0.0};
    for (std::size_t c = 0; c < n; ++c) {
      if (!same_outside(r, c, dims, stride, rest)) continue;
      acc += local(static_cast<Eigen::Index>(local_index(r, dims, stride, targets)),
                   static_cast<Eigen::Index>(local_index(c, dims, stride, targets))) *
             amplitudes(static_cast<Eigen::Index>(c));
    }
    out(static_cast<Eigen::Index>(r)) = acc;
  }
  return out;
}

namespace {
std::size_t compose(const Dims& stride, const Positions& keep, const std::vector<std::size_t>& keep_digits,
                    const Positions& traced, const std::vector<std::size_t>& traced_digits) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < keep.size(); ++k) flat += keep_digits[k] * stride[keep[k]];
  for (std::size_t k = 0; k < traced.size(); ++k) flat += traced_digits[k] * stride[traced[k]];
  return flat;
}
}  // namespace

Matrix reduce_pure(const Vector& amplitudes, const Dims& dims, const Positions& keep) {
  check_positions(dims, keep);
  if (static_cast<std::size_t>(amplitudes.size()) != total(dims))
    throw std::invalid_argument("kernels: amplitude vector does not match dims");
  const auto stride = strides(dims);
  const auto traced = complement(dims.size(), keep);
  const auto dk = product(dims, keep);
  const auto dt = product(dims, traced);
  Matrix out(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t i = 0; i < dk; ++i) {
    const auto di = split(i, dims, keep);
    for (std::size_t j = 0; j < dk; ++j) {
      const auto dj = split(j, dims, keep);
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < dt; ++t) {
        const auto dtr = split(t, dims, traced);
        const auto ri = compose(stride, keep, di, traced, dtr);
        const auto rj = compose(stride, keep, dj, traced, dtr);
        acc += amplitudes(static_cast<Eigen::Index>(ri)) * std::conj(amplitudes(static_cast<Eigen::Index>(rj)));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return out;
}

Matrix reduce_density(const Matrix& rho, const Dims& dims, const Positions& keep) {
  check_positions(dims, keep);
  const auto n = total(dims);
  if (static_cast<std::size_t>(rho.rows()) != n || static_cast<std::size_t>(rho.cols()) != n)
    throw std::invalid_argument("kernels: density matrix does not match dims");
  const auto stride = strides(dims);
  const auto traced = complement(dims.size(), keep);
  const auto dk = product(dims, keep);
  const auto dt = product(dims, traced);
  Matrix out(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t i = 0; i < dk; ++i) {
    const auto di = split(i, dims, keep);
    for (std::size_t j = 0; j < dk; ++j) {
      const auto dj = split(j, dims, keep);
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < dt; ++t) {
        const auto dtr = split(t, dims, traced);
        acc += rho(static_cast<Eigen::Index>(compose(stride, keep, di, traced, dtr)),
                   static_cast<Eigen::Index>(compose(stride, keep, dj, traced, dtr)));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return out;
}

void rotate_pair(Vector& amplitudes, const Dims& dims, const Positions& positions,
                 const std::vector<int>& from, const std::vector<int>& to, double c, double s) {
  check_positions(dims, positions);
  const auto n = total(dims);
  if (static_cast<std::size_t>(amplitudes.size()) != n)
    throw std::invalid_argument("kernels: amplitude vector does not match dims");
  if (pair_offset(dims, positions, from) == pair_offset(dims, positions, to))
    throw std::invalid_argument("kernels: rotation needs two distinct basis kets");
  const auto stride = strides(dims);
  for (std::size_t r = 0; r < n; ++r) {
    bool match = true;
    std::size_t partner = r;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const auto d = digit(r, dims, stride, positions[k]);
      if (d != static_cast<std::size_t>(from[k])) {
        match = false;
        break;
      }
      partner = partner - d * stride[positions[k]] + static_cast<std::size_t>(to[k]) * stride[positions[k]];
    }
    if (!match) continue;
    const auto i = static_cast<Eigen::Index>(r);
    const auto j = static_cast<Eigen::Index>(partner);
    const Complex a = amplitudes(i);
    const Complex b = amplitudes(j);
    amplitudes(i) = c * a - s * b;
    amplitudes(j) = s * a + c * b;
  }
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP

namespace parallel {

Matrix embed_operator(const Dims& dims, const Positions& targets, const Matrix& local) {
  check_local(dims, targets, local);
  const auto n = static_cast<Eigen::Index>(total(dims));
  const auto local_off = offsets(dims, targets);
  const auto rest_off = offsets(dims, complement(dims.size(), targets));
  const auto dl = static_cast<Eigen::Index>(local_off.size());
  const auto n_rest = static_cast<long long>(rest_off.size());
  Matrix out = Matrix::Zero(n, n);
#pragma omp parallel for schedule(static) if (n_rest * dl >= kParallelThreshold)
  for (long long q = 0; q < n_rest; ++q) {
    const auto base = rest_off[static_cast<std::size_t>(q)];
    for (Eigen::Index a = 0; a < dl; ++a)
      for (Eigen::Index b = 0; b < dl; ++b)
        out(static_cast<Eigen::Index>(base + local_off[a]), static_cast<Eigen::Index>(base + local_off[b])) =
            local(a, b);
  }
  return out;
}

Vector apply_local(const Vector& amplitudes, const Dims& dims, const Positions& targets, const Matrix& local) {
  check_local(dims, targets, local);
  const auto n = total(dims);
  if (static_cast<std::size_t>(amplitudes.size()) != n)
    throw std::invalid_argument("kernels: amplitude vector does not match dims");
  const auto local_off = offsets(dims, targets);
  const auto rest_off = offsets(dims, complement(dims.size(), targets));
  const auto dl = static_cast<Eigen::Index>(local_off.size());
  const auto n_rest = static_cast<long long>(rest_off.size());
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
#pragma omp parallel for schedule(static) if (n_rest * dl >= kParallelThreshold)
  for (long long q = 0; q < n_rest; ++q) {
    const auto base = rest_off[static_cast<std::size_t>(q)];
    for (Eigen::Index a = 0; a < dl; ++a) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index b = 0; b < dl; ++b)
        acc += local(a, b) * amplitudes(static_cast<Eigen::Index>(base + local_off[b]));
      out(static_cast<Eigen::Index>(base + local_off[a])) = acc;
    }
  }
  return out;
}

Matrix reduce_pure(const Vector& amplitudes, const Dims& dims, const Positions& keep) {
  check_positions(dims, keep);
  if (static_cast<std::size_t>(amplitudes.size()) != total(dims))
    throw std::invalid_argument("kernels: amplitude vector does not match dims");
  const auto keep_off = offsets(dims, keep);
  const auto traced_off = offsets(dims, complement(dims.size(), keep));
  const auto dk = static_cast<long long>(keep_off.size());
  Matrix out(dk, dk);
#pragma omp parallel for schedule(static) if (dk * dk * static_cast<long long>(traced_off.size()) >= kParallelThreshold)
  for (long long i = 0; i < dk; ++i) {
    for (long long j = 0; j < dk; ++j) {
      Complex acc{0.0, 0.0};
      for (auto t : traced_off)
        acc += amplitudes(static_cast<Eigen::Index>(keep_off[i] + t)) *
               std::conj(amplitudes(static_cast<Eigen::Index>(keep_off[j] + t)));
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix reduce_density(const Matrix& rho, const Dims& dims, const Positions& keep) {
  check_positions(dims, keep);
  const auto n = total(dims);
  if (static_cast<std::size_t>(rho.rows()) != n || static_cast<std::size_t>(rho.cols()) != n)
    throw std::invalid_argument("kernels: density matrix does not match dims");
  const auto keep_off = offsets(dims, keep);
  const auto traced_off = offsets(dims, complement(dims.size(), keep));
  const auto dk = static_cast<long long>(keep_off.size());
  Matrix out(dk, dk);
#pragma omp parallel for schedule(static) if (dk * dk * static_cast<long long>(traced_off.size()) >= kParallelThreshold)
  for (long long i = 0; i < dk; ++i) {
    for (long long j = 0; j < dk; ++j) {
      Complex acc{0.0, 0.0};
      for (auto t : traced_off)
        acc += rho(static_cast<Eigen::Index>(keep_off[i] + t), static_cast<Eigen::Index>(keep_off[j] + t));
      out(i, j) = acc;
    }
  }
  return out;
}

void rotate_pair(Vector& amplitudes, const Dims& dims, const Positions& positions,
                 const std::vector<int>& from, const std::vector<int>& to, double c, double s) {
  check_positions(dims, positions);
  if (static_cast<std::size_t>(amplitudes.size()) != total(dims))
    throw std::invalid_argument("kernels: amplitude vector does not match dims");
  const auto from_off = pair_offset(dims, positions, from);
  const auto to_off = pair_offset(dims, positions, to);
  if (from_off == to_off) throw std::invalid_argument("kernels: rotation needs two distinct basis kets");
  const auto rest_off = offsets(dims, complement(dims.size(), positions));
  const auto n_rest = static_cast<long long>(rest_off.size());
  // Pairs (base+from, base+to) are disjoint across q.
#pragma omp parallel for schedule(static) if (n_rest >= kParallelThreshold)
  for (long long q = 0; q < n_rest; ++q) {
    const auto i = static_cast<Eigen::Index>(rest_off[static_cast<std::size_t>(q)] + from_off);
    const auto j = static_cast<Eigen::Index>(rest_off[static_cast<std::size_t>(q)] + to_off);
    const Complex a = amplitudes(i);
    const Complex b = amplitudes(j);
    amplitudes(i) = c * a - s * b;
    amplitudes(j) = s * a + c * b;
  }
}

}  // namespace parallel
}  // namespace modent::kernels
