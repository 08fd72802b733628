#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modent/hilbert.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace modent;
namespace ts = testing_support;

namespace {

SystemLayout qubit(const std::string& label) { return SystemLayout({{label, TwoLevel{}}}); }

PureState random_pure(const SystemLayout& layout) {
  return PureState(layout, ts::random_state(static_cast<Eigen::Index>(layout.dimension())));
}

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("layout dimensions") {
  CHECK(compose_layout({{"T", TwoLevel{}}}).dimension() == 2);
  CHECK(compose_layout({{"fly", FermionicMode{}}, {"T", TwoLevel{}}}).dimension() == 4);
  CHECK(compose_layout({{"m", BosonicMode{3}}, {"T", TwoLevel{}}}).dimension() == 8);
}

TEST_CASE("layout rejects bad subsystem lists") {
  CHECK_THROWS_AS(compose_layout({}), std::invalid_argument);
  CHECK_THROWS_AS(compose_layout({{"a", TwoLevel{}}, {"a", FermionicMode{}}}), std::invalid_argument);
  CHECK_THROWS_AS(compose_layout({{"m", BosonicMode{0}}}), std::invalid_argument);
}

TEST_CASE("flat index is row-major with the first subsystem slowest") {
  const SystemLayout l({{"a", BosonicMode{2}}, {"b", TwoLevel{}}, {"c", FermionicMode{}}});
  CHECK(l.flat_index({0, 0, 1}) == 1);
  CHECK(l.flat_index({0, 1, 0}) == 2);
  CHECK(l.flat_index({1, 0, 0}) == 4);
  CHECK(l.flat_index({2, 1, 1}) == 11);
  for (std::size_t k = 0; k < l.dimension(); ++k) CHECK(l.flat_index(l.levels_of(k)) == k);
}

TEST_CASE("basis states") {
  const SystemLayout l({{"fly", FermionicMode{}}, {"T", TwoLevel{}}});
  const PureState s = basis_state(l, {1, kGround});
  CHECK(s.amplitudes()(2) == Complex{1.0, 0.0});
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0));

  const SystemLayout lr({{"L", FermionicMode{}}, {"R", FermionicMode{}}});
  CHECK(basis_state(lr, {1, 0}).amplitudes()(2) == Complex{1.0, 0.0});
  CHECK(basis_state(qubit("T"), {kExcited}).amplitudes()(1) == Complex{1.0, 0.0});

  CHECK_THROWS_AS(basis_state(l, {2, 0}), std::out_of_range);
  CHECK_THROWS_AS(basis_state(l, {1}), std::invalid_argument);
}

TEST_CASE("superpose normalizes") {
  const SystemLayout lr({{"L", FermionicMode{}}, {"R", FermionicMode{}}});
  const PureState pair = superpose({{1.0, basis_state(lr, {1, 0})}, {1.0, basis_state(lr, {0, 1})}});
  CHECK(std::abs(pair.amplitudes()(2) - 1.0 / std::numbers::sqrt2) < 1e-15);
  CHECK(std::abs(pair.amplitudes()(1) - 1.0 / std::numbers::sqrt2) < 1e-15);

  const PureState g = superpose({{2.0, basis_state(qubit("T"), {kGround})}});
  CHECK(std::abs(g.amplitudes()(0) - 1.0) < 1e-15);

  CHECK_THROWS_AS(superpose({{1.0, basis_state(qubit("T"), {0})}, {-1.0, basis_state(qubit("T"), {0})}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(superpose({{1.0, basis_state(qubit("T"), {0})}, {1.0, basis_state(qubit("S"), {0})}}),
                  std::invalid_argument);
}

TEST_CASE("pure states must be normalized") {
  Vector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState(qubit("T"), v), std::invalid_argument);
}

TEST_CASE("density operators are validated") {
  Matrix m = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOp(qubit("T"), m), std::invalid_argument);  // trace 2
  m = Matrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOp(qubit("T"), m), std::invalid_argument);  // not PSD
  m = 0.5 * Matrix::Identity(2, 2);
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityOp(qubit("T"), m), std::invalid_argument);  // not Hermitian
}

TEST_CASE("coherent mode state") {
  SUBCASE("vacuum") {
    const auto c = coherent_mode_state(5, 0.0);
    CHECK(std::abs(c.state.amplitudes()(0) - 1.0) < 1e-15);
    CHECK(c.truncation_weight == doctest::Approx(0.0));
  }
  SUBCASE("eta = 1 amplitudes follow 1/sqrt(n!)") {
    const auto c = coherent_mode_state(10, 1.0);
    const auto& a = c.state.amplitudes();
    double factorial = 1.0;
    for (int n = 1; n <= 10; ++n) {
      factorial *= n;
      CHECK(std::abs(a(n) / a(0) - 1.0 / std::sqrt(factorial)) < 1e-14);
    }
  }
  SUBCASE("eta = 2 mean occupation") {
    const auto c = coherent_mode_state(30, 2.0);
    double mean = 0.0;
    for (int n = 0; n <= 30; ++n) mean += n * std::norm(c.state.amplitudes()(n));
    CHECK(std::abs(mean - 4.0) < 1e-9);
    // Poisson tail above 30, summed directly
    double tail = 0.0, term = std::exp(-4.0);
    for (int n = 1; n <= 120; ++n) {
      term *= 4.0 / n;
      if (n > 30) tail += term;
    }
    CHECK(c.truncation_weight == doctest::Approx(tail).epsilon(1e-6));
  }
  SUBCASE("complex eta carries the phase") {
    const Complex eta{0.3, -1.1};
    const auto c = coherent_mode_state(default_coherent_cutoff(eta), eta);
    for (int n = 1; n < 5; ++n)
      CHECK(std::abs(c.state.amplitudes()(n) / c.state.amplitudes()(n - 1) - eta / std::sqrt(double(n))) < 1e-12);
  }
  SUBCASE("default cutoff converges") {
    // The L2 gap to a longer truncation is sqrt(tail weight); below 1e-10 up to |eta| = 6.
    for (double r : {0.5, 2.0, 4.0, 6.0, 8.0, 15.0}) {
      const Complex eta = std::polar(r, 0.7);
      const int c = default_coherent_cutoff(eta);
      CHECK(c == static_cast<int>(std::ceil(r * r + 8 * r + 20)));
      const auto small = coherent_mode_state(c, eta);
      const auto large = coherent_mode_state(c + 10, eta);
      const double dist = (large.state.amplitudes().head(c + 1) - small.state.amplitudes()).norm() +
                          large.state.amplitudes().tail(10).norm();
      CHECK(small.truncation_weight < 1e-16);
      CHECK(dist <= 1.01 * std::sqrt(small.truncation_weight) + 1e-15);
      if (r <= 6.0) CHECK(dist < 1e-10);
    }
  }
  CHECK_THROWS_AS(coherent_mode_state(0, 1.0), std::invalid_argument);
}

TEST_CASE("tensor product matches the Kronecker product") {
  const PureState a = random_pure(qubit("a"));
  const PureState b = random_pure(SystemLayout({{"b", BosonicMode{2}}}));
  const PureState c = random_pure(SystemLayout({{"c", FermionicMode{}}}));
  const PureState ab = tensor(a, b);
  CHECK(ab.layout().labels() == std::vector<std::string>{"a", "b"});
  CHECK(max_diff(ab.amplitudes(), oracle::kron(a.amplitudes(), b.amplitudes())) < 1e-15);
  CHECK(max_diff(tensor(ab, c).amplitudes(), tensor(a, tensor(b, c)).amplitudes()) < 1e-15);
  CHECK(std::abs(tensor(ab, c).norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(tensor(a, a), std::invalid_argument);

  const LinearOp ia(qubit("a"), ops::identity(2));
  const LinearOp ib(SystemLayout({{"b", BosonicMode{2}}}), ops::identity(3));
  CHECK(tensor(ia, ib).matrix().isApprox(Matrix::Identity(6, 6)));
}

TEST_CASE("the delocalized flying particle on two empty targets") {
  const SystemLayout lr({{"L", FermionicMode{}}, {"R", FermionicMode{}}});
  const SystemLayout tt({{"TL", TwoLevel{}}, {"TR", TwoLevel{}}});
  const PureState flying = superpose({{1.0, basis_state(lr, {1, 0})}, {1.0, basis_state(lr, {0, 1})}});
  const PureState full = tensor(flying, basis_state(tt, {kGround, kGround}));
  const PureState direct = superpose({{1.0, basis_state(full.layout(), {1, 0, kGround, kGround})},
                                      {1.0, basis_state(full.layout(), {0, 1, kGround, kGround})}});
  CHECK(max_diff(full.amplitudes(), direct.amplitudes()) < 1e-15);
}

TEST_CASE("embedding places local operators as Kronecker factors") {
  const SystemLayout l({{"T", TwoLevel{}}, {"m", BosonicMode{2}}, {"f", FermionicMode{}}});
  const std::vector<int> dims{2, 3, 2};
  const Matrix a3 = oracle::lowering(2);
  CHECK(max_diff(embed_operator(l, ops::sigma_plus(), {"T"}).matrix(),
                 oracle::embed_product(dims, {{0, oracle::sigma_plus()}})) == 0.0);
  CHECK(max_diff(embed_operator(l, ops::annihilation(BosonicMode{2}), {"m"}).matrix(),
                 oracle::embed_product(dims, {{1, a3}})) == 0.0);

  SUBCASE("two non-adjacent targets, both orders") {
    const Matrix x = ts::random_hermitian(2), y = ts::random_hermitian(2);
    const Matrix want = oracle::embed_product(dims, {{0, x}, {2, y}});
    CHECK(max_diff(embed_operator(l, oracle::kron(x, y), {"T", "f"}).matrix(), want) < 1e-14);
    CHECK(max_diff(embed_operator(l, oracle::kron(y, x), {"f", "T"}).matrix(), want) < 1e-14);
  }
  SUBCASE("homomorphism") {
    const Matrix x = ts::random_hermitian(6), y = ts::random_hermitian(6);
    const Matrix lhs = embed_operator(l, x, {"m", "T"}).matrix() * embed_operator(l, y, {"m", "T"}).matrix();
    CHECK(max_diff(lhs, embed_operator(l, x * y, {"m", "T"}).matrix()) < 1e-12);
  }
  SUBCASE("apply_local agrees with the embedded matrix") {
    const PureState psi = random_pure(l);
    const Matrix x = ts::random_hermitian(4);
    CHECK(max_diff(apply_local(psi, x, {"f", "T"}), embed_operator(l, x, {"f", "T"}).matrix() * psi.amplitudes()) <
          1e-13);
  }
  CHECK_THROWS_AS(embed_operator(l, ops::sigma_plus(), {"nope"}), std::invalid_argument);
  CHECK_THROWS_AS(embed_operator(l, ops::sigma_plus(), {"m"}), std::invalid_argument);
}

TEST_CASE("partial trace") {
  SUBCASE("Bell state reduces to the maximally mixed state") {
    const SystemLayout tt({{"A", TwoLevel{}}, {"B", TwoLevel{}}});
    const PureState bell = superpose({{1.0, basis_state(tt, {kGround, kExcited})}, {1.0, basis_state(tt, {kExcited, kGround})}});
    CHECK(max_diff(partial_trace(bell, {"A"}).matrix(), 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  }
  SUBCASE("random product states factorize") {
    for (int trial = 0; trial < 50; ++trial) {
      const PureState a = random_pure(SystemLayout({{"a", BosonicMode{2}}}));
      const PureState b = random_pure(SystemLayout({{"b", TwoLevel{}}, {"c", FermionicMode{}}}));
      const PureState ab = tensor(a, b);
      CHECK(max_diff(partial_trace(to_density(ab), {"a"}).matrix(), to_density(a).matrix()) < 1e-12);
      CHECK(max_diff(partial_trace(ab, {"b", "c"}).matrix(), to_density(b).matrix()) < 1e-12);
    }
  }
  SUBCASE("matches the bipartite oracle and keeps trace and Hermiticity") {
    const SystemLayout l({{"a", TwoLevel{}}, {"b", BosonicMode{2}}, {"c", FermionicMode{}}});
    for (int trial = 0; trial < 50; ++trial) {
      const DensityOp rho(l, ts::random_density(12, 1 + trial % 12));
      const Matrix first = partial_trace(rho, {"a"}).matrix();
      CHECK(max_diff(first, oracle::trace_out_second(rho.matrix(), 2, 6)) < 1e-13);
      const Matrix last = partial_trace(rho, {"b", "c"}).matrix();
      CHECK(max_diff(last, oracle::trace_out_first(rho.matrix(), 2, 6)) < 1e-13);
      CHECK(std::abs(last.trace() - 1.0) < 1e-12);
      CHECK(max_diff(last, last.adjoint()) < 1e-12);
    }
  }
  SUBCASE("keep order permutes the reduced basis") {
    const SystemLayout l({{"a", TwoLevel{}}, {"b", FermionicMode{}}});
    const PureState psi = tensor(basis_state(qubit("a"), {kExcited}), basis_state(SystemLayout({{"b", FermionicMode{}}}), {0}));
    const DensityOp swapped = partial_trace(psi, {"b", "a"});
    CHECK(std::abs(swapped.matrix()(1, 1) - 1.0) < 1e-15);  // |0>_b |e>_a
  }
  const PureState psi = random_pure(qubit("a"));
  CHECK_THROWS_AS(partial_trace(psi, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(psi, {"x"}), std::invalid_argument);
}

TEST_CASE("Pauli convention: sigma_z |g> = +|g>") {
  CHECK(ops::pauli_z()(0, 0) == Complex{1.0, 0.0});
  CHECK(ops::pauli_z()(1, 1) == Complex{-1.0, 0.0});
  CHECK(ops::sigma_plus()(1, 0) == Complex{1.0, 0.0});
  CHECK((ops::pauli_x() * ops::pauli_y() - Complex{0.0, 1.0} * ops::pauli_z()).norm() < 1e-15);
}
