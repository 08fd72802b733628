#pragma once

// Data-parallel inner loops over the composite basis.
//
// `serial` holds the reference implementations: direct digit decomposition of
// every flat index, no precomputed tables.  `parallel` computes offset tables
// once and splits the outer loop across OpenMP threads.  Each parallel loop
// writes disjoint output entries and every entry is summed in a fixed order,
// so results do not depend on the thread count.  They may differ from the
// reference in the last bit where the summation order differs.
//
// Conventions shared by all kernels:
//   dims       per-subsystem dimensions, first entry varies slowest
//   positions  ordered subsystem indices a local operator (or reduced state)
//              refers to; the local index is row-major over `positions`

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

namespace modent::kernels {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;
using Positions = std::vector<std::size_t>;

enum class Execution { serial, parallel };

namespace serial {
Matrix embed_operator(const Dims& dims, const Positions& targets, const Matrix& local);
Vector apply_local(const Vector& amplitudes, const Dims& dims, const Positions& targets, const Matrix& local);
Matrix reduce_pure(const Vector& amplitudes, const Dims& dims, const Positions& keep);
Matrix reduce_density(const Matrix& rho, const Dims& dims, const Positions& keep);
/// (a_from, a_to) <- (c a_from - s a_to, s a_from + c a_to) for every pair of
/// basis kets whose digits at `positions` equal `from` / `to` and agree elsewhere.
void rotate_pair(Vector& amplitudes, const Dims& dims, const Positions& positions,
                 const std::vector<int>& from, const std::vector<int>& to, double c, double s);
}  // namespace serial

namespace parallel {
Matrix embed_operator(const Dims& dims, const Positions& targets, const Matrix& local);
Vector apply_local(const Vector& amplitudes, const Dims& dims, const Positions& targets, const Matrix& local);
Matrix reduce_pure(const Vector& amplitudes, const Dims& dims, const Positions& keep);
Matrix reduce_density(const Matrix& rho, const Dims& dims, const Positions& keep);
void rotate_pair(Vector& amplitudes, const Dims& dims, const Positions& positions,
                 const std::vector<int>& from, const std::vector<int>& to, double c, double s);
}  // namespace parallel

/// Flat-index offset of every local multi-index over `positions`.
std::vector<std::size_t> offsets(const Dims& dims, const Positions& positions);
Positions complement(std::size_t n_subsystems, const Positions& positions);

int max_threads();

/// Runs fn(i) for i in [0, n).  fn must only write state owned by index i.
/// The first exception thrown by any iteration is rethrown after the loop.
template <class Fn>
void for_each_index(Execution exec, std::size_t n, Fn&& fn) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace modent::kernels
