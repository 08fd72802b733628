#include <doctest.h>

#include <vector>

#include <omp.h>

#include "modent/kernels.hpp"
#include "support/random.hpp"

using namespace modent::kernels;
namespace ts = testing_support;

namespace {

struct Case {
  Dims dims;
  Positions positions;
};

const std::vector<Case> cases{
    {{2, 3, 2}, {0}},
    {{2, 3, 2}, {2, 0}},
    {{2, 2, 2, 2, 2}, {3, 1}},
    {{3, 2, 4}, {1, 2}},
    {{2, 2, 2, 2, 2, 2, 2, 2, 2}, {0, 4, 8}},  // large enough to take the threaded path
};

std::size_t product(const Dims& d, const Positions& p) {
  std::size_t n = 1;
  for (auto k : p) n *= d[k];
  return n;
}

std::size_t product(const Dims& d) {
  std::size_t n = 1;
  for (auto k : d) n *= k;
  return n;
}

}  // namespace

TEST_CASE("parallel kernels reproduce the serial reference") {
  for (const auto& c : cases) {
    const auto n = static_cast<Eigen::Index>(product(c.dims));
    const auto m = static_cast<Eigen::Index>(product(c.dims, c.positions));
    const Matrix local = ts::random_hermitian(m);
    const Vector psi = ts::random_state(n);

    CHECK((serial::embed_operator(c.dims, c.positions, local) - parallel::embed_operator(c.dims, c.positions, local))
              .norm() == 0.0);
    CHECK((serial::apply_local(psi, c.dims, c.positions, local) - parallel::apply_local(psi, c.dims, c.positions, local))
              .norm() < 1e-14);
    CHECK((serial::reduce_pure(psi, c.dims, c.positions) - parallel::reduce_pure(psi, c.dims, c.positions)).norm() ==
          0.0);
    if (n <= 64) {
      const Matrix rho = ts::random_density(n, 3);
      CHECK((serial::reduce_density(rho, c.dims, c.positions) - parallel::reduce_density(rho, c.dims, c.positions))
                .norm() == 0.0);
    }
  }
}

TEST_CASE("parallel results do not depend on the thread count") {
  const Dims dims{2, 2, 2, 2, 2, 2, 2, 2, 2, 2};
  const Positions pos{1, 5, 9};
  const Matrix local = ts::random_hermitian(8);
  const Vector psi = ts::random_state(1024);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Vector a1 = parallel::apply_local(psi, dims, pos, local);
  const Matrix r1 = parallel::reduce_pure(psi, dims, pos);
  omp_set_num_threads(4);
  const Vector a4 = parallel::apply_local(psi, dims, pos, local);
  const Matrix r4 = parallel::reduce_pure(psi, dims, pos);
  omp_set_num_threads(saved);
  CHECK((a1 - a4).norm() == 0.0);
  CHECK((r1 - r4).norm() == 0.0);
}

TEST_CASE("apply_local equals multiplication by the embedded operator") {
  for (const auto& c : cases) {
    const auto n = static_cast<Eigen::Index>(product(c.dims));
    const Matrix local = ts::random_hermitian(static_cast<Eigen::Index>(product(c.dims, c.positions)));
    const Vector psi = ts::random_state(n);
    CHECK((parallel::apply_local(psi, c.dims, c.positions, local) -
           parallel::embed_operator(c.dims, c.positions, local) * psi)
              .norm() < 1e-12);
  }
}

TEST_CASE("reduce_pure equals reduce_density of the projector") {
  for (const auto& c : cases) {
    const auto n = static_cast<Eigen::Index>(product(c.dims));
    if (n > 64) continue;
    const Vector psi = ts::random_state(n);
    const Matrix rho = psi * psi.adjoint();
    CHECK((parallel::reduce_pure(psi, c.dims, c.positions) - parallel::reduce_density(rho, c.dims, c.positions))
              .norm() < 1e-13);
  }
}

TEST_CASE("rotate_pair") {
  const Dims dims{2, 2, 2, 2};
  const Positions pos{0, 2, 3};
  const Vector psi = ts::random_state(16);
  const double c = 0.6, s = 0.8;
  Vector a = psi, b = psi;
  serial::rotate_pair(a, dims, pos, {1, 1, 0}, {1, 0, 1}, c, s);
  parallel::rotate_pair(b, dims, pos, {1, 1, 0}, {1, 0, 1}, c, s);
  CHECK((a - b).norm() == 0.0);
  CHECK(std::abs(a.norm() - 1.0) < 1e-14);
  // digit 1 (position 1) is a spectator; |1 x 1 0> mixes with |1 x 0 1>
  for (int x = 0; x < 2; ++x) {
    const int from = 8 + 4 * x + 2, to = 8 + 4 * x + 1;
    CHECK(std::abs(a(from) - (c * psi(from) - s * psi(to))) < 1e-15);
    CHECK(std::abs(a(to) - (s * psi(from) + c * psi(to))) < 1e-15);
  }
  for (int k : {0, 1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 15}) CHECK(a(k) == psi(k));
  Vector z = psi;
  CHECK_THROWS_AS(parallel::rotate_pair(z, dims, pos, {1, 0, 1}, {1, 0, 1}, c, s), std::invalid_argument);
}

TEST_CASE("for_each_index gathers by index and propagates failures") {
  std::vector<double> out(1000);
  for_each_index(Execution::parallel, out.size(), [&](std::size_t i) { out[i] = 0.5 * static_cast<double>(i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.5 * static_cast<double>(i));
  CHECK_THROWS_AS(for_each_index(Execution::parallel, 10,
                                 [](std::size_t i) {
                                   if (i == 7) throw std::runtime_error("boom");
                                 }),
                  std::runtime_error);
  CHECK(max_threads() >= 1);
}
