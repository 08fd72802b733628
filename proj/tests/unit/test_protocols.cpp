#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modent/protocols.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace modent;
namespace ts = testing_support;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR2 = std::numbers::sqrt2;

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> s(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return s.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("absorption of a delocalized photon") {
  const auto out = massless_absorption();
  Eigen::Matrix4cd bell = Eigen::Matrix4cd::Zero();
  bell(1, 1) = bell(1, 2) = bell(2, 1) = bell(2, 2) = 0.5;
  CHECK(max_diff(out.targets.matrix(), bell) < 1e-12);
  CHECK(std::abs(concurrence(out.targets) - 1.0) < 1e-10);
  CHECK(std::abs(out.result.at("flying_occupation")) < 1e-12);
  CHECK(std::abs(out.result.at("overlap_with_absorbed_state") - 1.0) < 1e-12);
  CHECK(std::abs(out.result.at("horodecki_m") - 2.0) < 1e-10);
}

TEST_CASE("single ancilla rotation: closed form") {
  const Matrix a = analytic_single_ancilla_state(1.0, 0.0).matrix();
  Matrix want(2, 2);
  want << 3.0, kR2, kR2, 1.0;
  CHECK(max_diff(a, want / 4.0) < 1e-15);

  const Matrix b = analytic_single_ancilla_state(0.0, 1.0).matrix();
  want << 1.0, -kR2, -kR2, 3.0;
  CHECK(max_diff(b, want / 4.0) < 1e-15);

  const auto r = single_ancilla_rotation(1.0, 0.0);
  CHECK(r.fidelity_vs_ideal == doctest::Approx((2.0 + kR2) / 4.0).epsilon(1e-13));
}

TEST_CASE("single ancilla rotation: simulation equals the closed form") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto [alpha, beta] = ts::random_qubit();
    const auto r = single_ancilla_rotation(alpha, beta);
    CHECK(max_diff(r.simulated.matrix(), r.analytic.matrix()) < 1e-10);
  }
  CHECK_THROWS_AS(single_ancilla_rotation(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("ideal rotated state") {
  const PureState s = ideal_rotated_state(1.0, 0.0);
  CHECK(std::abs(s.amplitudes()(0) - 1.0 / kR2) < 1e-15);
  CHECK(std::abs(s.amplitudes()(1) - 1.0 / kR2) < 1e-15);
}

TEST_CASE("rotation channel is trace preserving and positive at every step") {
  for (double tau : {kPi / 4, kPi / 8, 0.01, 1.7}) {
    const RotationChannel ch(tau);
    const Eigen::Matrix2cd completeness =
        ch.kraus(0).adjoint() * ch.kraus(0) + ch.kraus(1).adjoint() * ch.kraus(1);
    CHECK(max_diff(completeness, Eigen::Matrix2cd::Identity()) < 1e-13);
    Eigen::Matrix2cd rho = ts::random_density(2, 1);
    for (int step = 0; step < 200; ++step) {
      rho = ch.apply(rho);
      CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
      CHECK(min_eigenvalue(rho) > -1e-10);
    }
  }
  CHECK_THROWS_AS(RotationChannel(-1.0), std::invalid_argument);
}

TEST_CASE("sequential rotation agrees with the full multi-ancilla simulation") {
  for (int n = 1; n <= 5; ++n) {
    const auto [alpha, beta] = ts::random_qubit();
    for (double tau : {default_step_duration(n), kPi / (4.0 * n)}) {
      RotationProtocolParams p{alpha, beta, n, tau};
      const Matrix want = oracle::sequential_rotation_full(alpha, beta, n, tau);
      CHECK(max_diff(sequential_rotation_state(p).matrix(), want) < 1e-10);
    }
  }
}

TEST_CASE("sequential rotation fidelity") {
  SUBCASE("one ancilla for pi/4 reproduces the single-ancilla fidelity") {
    RotationProtocolParams p;
    p.per_step_duration = kPi / 4;
    CHECK(sequential_rotation(p).at("fidelity") == doctest::Approx((2.0 + kR2) / 4.0).epsilon(1e-13));
  }
  SUBCASE("doubling N from 16 to 32 halves the infidelity") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto [alpha, beta] = ts::random_qubit();
      const double f16 = sequential_rotation({alpha, beta, 16, std::nullopt}).at("infidelity");
      const double f32 = sequential_rotation({alpha, beta, 32, std::nullopt}).at("infidelity");
      CHECK(f16 / f32 == doctest::Approx(2.0).epsilon(0.1));
    }
  }
  SUBCASE("N = 64 gives F > 0.99") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto [alpha, beta] = ts::random_qubit();
      CHECK(sequential_rotation({alpha, beta, 64, std::nullopt}).at("fidelity") > 0.99);
    }
  }
  SUBCASE("very long sequences stay valid") {
    const auto r = sequential_rotation({0.6, 0.8, 1000000, std::nullopt});
    CHECK(r.at("fidelity") > 0.999999);
    CHECK(r.at("infidelity_times_n") > 0.0);
  }
  CHECK_THROWS_AS(sequential_rotation({1.0, 0.0, 0, std::nullopt}), std::invalid_argument);
  CHECK_THROWS_AS(sequential_rotation({0.9, 0.0, 3, std::nullopt}), std::invalid_argument);
}

TEST_CASE("simultaneous coupling to N modes") {
  const auto one = simultaneous_coupling_check(1);
  CHECK(one.at("trace_distance") < 1e-12);
  CHECK(std::abs(one.at("fidelity_simultaneous") - one.at("fidelity_single_fermionic_ancilla")) < 1e-12);
  for (int n = 2; n <= 4; ++n) {
    const auto [alpha, beta] = ts::random_qubit();
    const auto r = simultaneous_coupling_check(n, alpha, beta);
    CHECK(r.at("trace_distance") < 1e-10);
    CHECK(std::abs(r.at("fidelity_gain")) < 1e-10);
  }
  CHECK_THROWS_AS(simultaneous_coupling_check(0), std::invalid_argument);
}

TEST_CASE("massive fermion protocol") {
  auto run = [](std::vector<double> angles) {
    FermionProtocolParams p;
    p.n_pairs = static_cast<int>(angles.size());
    for (double a : angles) p.angles.emplace_back(a);
    return massive_fermion_protocol(p);
  };
  CHECK(std::abs(run({kPi / 2}).concurrence - 0.5) < 1e-12);
  CHECK(run({0.0}).concurrence < 1e-12);
  CHECK(std::abs(run({0.0, kPi / 2}).concurrence - 0.5) < 1e-12);
  CHECK(std::abs(run({kPi / 2, 0.0}).concurrence - 0.5) < 1e-12);
  CHECK(run({0.0, 0.0}).concurrence < 1e-12);
  CHECK(run({0.0, 0.0, 0.0}).concurrence < 1e-12);

  FermionProtocolParams bad;
  bad.n_pairs = 2;
  bad.angles = {MixingAngle(0.1)};
  CHECK_THROWS_AS(massive_fermion_protocol(bad), std::invalid_argument);

  SUBCASE("initial state") {
    const PureState s = fermion_protocol_initial_state(1);
    const auto& l = s.layout();
    CHECK(l.labels() == std::vector<std::string>{"target_L", "target_R", "flying_L", "flying_R", "anc_L1", "anc_R1"});
    CHECK(std::abs(s.amplitudes()(l.flat_index({1, 0, 1, 0, 1, 0})) - 0.5) < 1e-15);
    CHECK(std::abs(s.amplitudes()(l.flat_index({0, 1, 0, 1, 0, 1})) - 0.5) < 1e-15);
  }
}

TEST_CASE("left and right mixing commute") {
  for (int trial = 0; trial < 200; ++trial) {
    const int pairs = 1 + trial % 2;
    const PureState s = fermion_protocol_initial_state(pairs);
    const MixingAngle a(ts::uniform(0.0, kPi));
    const int j = 1 + trial % pairs;
    const PureState lr = apply_side_mixing(apply_side_mixing(s, Side::left, j, a), Side::right, j, a);
    const PureState rl = apply_side_mixing(apply_side_mixing(s, Side::right, j, a), Side::left, j, a);
    CHECK((lr.amplitudes() - rl.amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("angle search") {
  const auto one = optimize_angles(1, 16, 4);
  CHECK(std::abs(one.best_angles[0] - kPi / 2) < 1e-3);
  CHECK(std::abs(one.best_concurrence - 0.5) < 1e-9);
  CHECK(one.grid.size() == 17);
  CHECK(one.grid.front().concurrence < 1e-12);

  const auto two = optimize_angles(2, 16, 2, kernels::Execution::parallel);
  const auto two_serial = optimize_angles(2, 16, 2, kernels::Execution::serial);
  CHECK(two.best_angles == two_serial.best_angles);
  CHECK(two.best_concurrence == two_serial.best_concurrence);
  for (std::size_t k = 0; k < two.grid.size(); ++k) CHECK(two.grid[k].concurrence == two_serial.grid[k].concurrence);
  CHECK(two.best_concurrence <= 0.5 + 1e-9);
  CHECK(std::abs(two.best_concurrence - 0.5) < 1e-9);
  CHECK(std::abs(two.best_angles[0]) < 1e-3);
  CHECK(std::abs(two.best_angles[1] - kPi / 2) < 1e-3);

  SUBCASE("the surface is symmetric under swapping the two angles") {
    const std::size_t axis = 17;
    for (std::size_t i = 0; i < axis; ++i)
      for (std::size_t j = 0; j < axis; ++j)
        CHECK(std::abs(two.grid[i * axis + j].concurrence - two.grid[j * axis + i].concurrence) < 1e-10);
  }
  CHECK(std::abs(fermion_concurrence({kPi / 2}) - 0.5) < 1e-12);
  CHECK_THROWS_AS(optimize_angles(0, 16, 1), std::invalid_argument);
  CHECK_THROWS_AS(optimize_angles(1, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(optimize_angles(1, 16, -1), std::invalid_argument);
}

TEST_CASE("rotation by a coherent field") {
  const auto [alpha, beta] = ts::random_qubit();
  const auto vacuum = coherent_field_rotation(alpha, beta, 0.0);
  CHECK(std::abs(vacuum.at("fidelity") - vacuum.at("initial_fidelity")) < 1e-12);
  CHECK(vacuum.at("interaction_time") == 0.0);

  for (int trial = 0; trial < 10; ++trial) {
    const auto [a, b] = ts::random_qubit();
    const double f4 = coherent_field_rotation(a, b, 4.0).at("fidelity");
    const double f8 = coherent_field_rotation(a, b, 8.0).at("fidelity");
    CHECK(1.0 - f8 < 1.0 - f4);
    CHECK(f8 > 0.95);
  }
  CHECK_THROWS_AS(coherent_field_rotation(1.0, 0.0, 4.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(coherent_field_rotation(1.0, 1.0, 4.0), std::invalid_argument);
}

TEST_CASE("table one") {
  const auto rows = table1_summary(1);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].particle_type == "Massless bosons");
  CHECK(std::abs(*rows[0].concurrence - 1.0) < 1e-10);
  CHECK(std::abs(*rows[1].concurrence - 0.5) < 1e-10);
  CHECK(std::abs(*rows[1].evidence_value - 1.25) < 1e-10);
  CHECK_FALSE(rows[2].concurrence.has_value());
  CHECK(std::abs(*rows[3].concurrence - 0.5) < 1e-9);
  CHECK(rows[3].max_repetitions == "N");
  CHECK(rows[0].max_repetitions == "inf");

  const auto fifty = table1_summary(50);
  CHECK(std::abs(*fifty[1].concurrence - 0.99) < 1e-10);
  CHECK(std::abs(*fifty[3].concurrence - 0.5) < 1e-9);
  CHECK(*fifty[2].evidence_value > 0.99);
  CHECK_THROWS_AS(table1_summary(0), std::invalid_argument);
}

TEST_CASE("experiment results reject non-finite scalars") {
  ExperimentResult r{"x", {}, {}, {}};
  CHECK_THROWS_AS(r.set("bad", std::nan("")), std::domain_error);
  CHECK_THROWS_AS(r.at("missing"), std::out_of_range);
}
