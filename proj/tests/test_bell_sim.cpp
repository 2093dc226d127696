#include <catch2/catch_amalgamated.hpp>

#include "decobound/bell_sim.hpp"
#include "decobound/entropy.hpp"
#include "decobound/quantum_bound.hpp"
#include "test_util.hpp"

using namespace decobound;

TEST_CASE("outcome distribution basics") {
  ChshMeasurementSet m = standard_chsh_measurements();
  TwoQubitState mixed(Mat4(0.25 * Mat4::Identity()));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      std::array<double, 4> p = outcome_distribution(mixed, m, x, y);
      for (double v : p) CHECK(v == Catch::Approx(0.25).margin(1e-12));
    }

  // Canonical state at (0, 0): cells (1 +- 1/sqrt(2))/4; the winning
  // probability is (2 + sqrt(2))/4.
  std::array<double, 4> cells =
      outcome_distribution(canonical_entangled_state(), m, 0, 0);
  double hi = 0.25 * (1.0 + 1.0 / std::sqrt(2.0));
  double lo = 0.25 * (1.0 - 1.0 / std::sqrt(2.0));
  CHECK(cells[0] == Catch::Approx(hi).margin(1e-12));
  CHECK(cells[3] == Catch::Approx(hi).margin(1e-12));
  CHECK(cells[1] == Catch::Approx(lo).margin(1e-12));
  CHECK(cells[2] == Catch::Approx(lo).margin(1e-12));
  CHECK(cells[0] + cells[3] ==
        Catch::Approx((2.0 + std::sqrt(2.0)) / 4.0).margin(1e-12));
  double sum = cells[0] + cells[1] + cells[2] + cells[3];
  CHECK(sum == Catch::Approx(1.0).margin(1e-12));

  // Product eigenstate with sigma_z on both sides is deterministic.
  Mat4 zero_zero = Mat4::Zero();
  zero_zero(0, 0) = 1.0;
  ChshMeasurementSet zz{Observable(pauli_x()), Observable(pauli_z()),
                        Observable(pauli_x()), Observable(pauli_z())};
  std::array<double, 4> det =
      outcome_distribution(TwoQubitState(zero_zero), zz, 1, 1);
  CHECK(det[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(outcome_distribution(mixed, m, 2, 0), std::invalid_argument);
}

TEST_CASE("hoeffding radius formula") {
  CHECK(hoeffding_radius(1000000) ==
        Catch::Approx(0.02604197809149967).margin(1e-12));
  CHECK(hoeffding_radius(1) > 4.0);
  CHECK_THROWS_AS(hoeffding_radius(0), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_radius(100, 1.5), std::invalid_argument);
}

TEST_CASE("simulation is deterministic for a fixed seed") {
  TwoQubitState epr = canonical_entangled_state();
  ChshMeasurementSet m = standard_chsh_measurements();
  RunSummary a = run_protocol(epr, m, 5000, 123);
  RunSummary b = run_protocol(epr, m, 5000, 123);
  CHECK(a.estimate.beta_hat == b.estimate.beta_hat);
  CHECK(a.counts == b.counts);
  RunSummary c = run_protocol(epr, m, 5000, 124);
  CHECK(a.estimate.beta_hat != c.estimate.beta_hat);
}

TEST_CASE("trial records match the aggregated counts") {
  TwoQubitState epr = canonical_entangled_state();
  ChshMeasurementSet m = standard_chsh_measurements();
  std::vector<TrialRecord> trials;
  RunSummary run = run_protocol(epr, m, 2000, 99, 0.99, &trials);
  REQUIRE(trials.size() == 2000);
  std::array<std::array<std::int64_t, 4>, 4> counts{};
  for (const TrialRecord& t : trials) {
    CHECK(t.x <= 1);
    CHECK(t.y <= 1);
    CHECK(t.a <= 1);
    CHECK(t.b <= 1);
    ++counts[2 * t.x + t.y][2 * t.a + t.b];
  }
  CHECK(counts == run.counts);
}

TEST_CASE("single-round estimates take the extreme values") {
  TwoQubitState epr = canonical_entangled_state();
  ChshMeasurementSet m = standard_chsh_measurements();
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    BetaEstimate est = simulate(epr, m, 1, seed);
    CHECK((est.beta_hat == 4.0 || est.beta_hat == -4.0));
    CHECK(est.confidence_radius > 4.0);
  }
}

TEST_CASE("setting marginals are uniform at 1e5 rounds") {
  TwoQubitState epr = canonical_entangled_state();
  RunSummary run = run_protocol(epr, standard_chsh_measurements(), 100000, 7);
  double sigma = std::sqrt(100000 * 0.25 * 0.75);
  for (int s = 0; s < 4; ++s) {
    std::int64_t total = 0;
    for (int o = 0; o < 4; ++o) total += run.counts[s][o];
    CHECK(std::abs(static_cast<double>(total) - 25000.0) <= 3.0 * sigma);
  }
}

TEST_CASE("the estimator is unbiased") {
  TwoQubitState epr = canonical_entangled_state();
  ChshMeasurementSet m = standard_chsh_measurements();
  const int runs = 1000;
  const std::int64_t n = 10000;
  double mean = 0.0;
  for (int seed = 0; seed < runs; ++seed)
    mean += simulate(epr, m, n, seed).beta_hat;
  mean /= runs;
  // Var(per-round) = 16 - beta^2 = 8; three standard errors of the mean.
  double se = std::sqrt(8.0 / n) / std::sqrt(static_cast<double>(runs));
  CHECK(std::abs(mean - kTwoSqrtTwo) <= 3.0 * se);
}

TEST_CASE("conservative pipeline bound stays valid") {
  TwoQubitState epr = canonical_entangled_state();
  ChshMeasurementSet m = standard_chsh_measurements();
  // Dec of the simulated pure entangled state is exactly 1/4.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BetaEstimate est = simulate(epr, m, 200000, seed);
    double lo = est.beta_hat - est.confidence_radius;
    if (lo > 2.0) {
      double bound = dec_bound_quantum(std::min(lo, kTwoSqrtTwo));
      CHECK(bound >= 0.25 - 1e-12);
    }
  }
}
