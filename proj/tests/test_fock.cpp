#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "fourphoton/fock.hpp"

using namespace fourphoton;

TEST_CASE("single-process pair distribution") {
  const SqueezedProcess proc(0.1, 6);
  CHECK(proc.T == doctest::Approx(std::tanh(0.1)));
  CHECK(proc.C == doctest::Approx(std::cosh(0.1)));
  const auto p = proc.pair_distribution();
  REQUIRE(p.size() == 7);
  CHECK(p[0] == doctest::Approx(1.0 / (proc.C * proc.C)));
  CHECK(p[1] == doctest::Approx(9.8349e-3).epsilon(1e-4));
  // geometric: constant ratio T^2
  for (int n = 1; n <= 6; ++n)
    CHECK(p[n] / p[n - 1] == doctest::Approx(proc.T * proc.T).epsilon(1e-14));
  const double mass = std::accumulate(p.begin(), p.end(), 0.0);
  CHECK(mass + proc.tail_bound / (proc.C * proc.C) <= 1.0 + 1e-14);
  CHECK(1.0 - mass <= proc.tail_bound);
}

TEST_CASE("multi-process table is a normalized convolution") {
  const MultiProcessState state = MultiProcessState::build(4, 0.05, 8);
  const double mass = std::accumulate(state.p_n.begin(), state.p_n.end(), 0.0);
  CHECK(1.0 - mass <= state.tail_bound + 1e-12);  // roundoff slack
  CHECK(state.tail_bound < 1e-9);
  // N=2 cross-check by hand: P(total=1) = 2 p0 p1
  const MultiProcessState two = MultiProcessState::build(2, 0.1, 6);
  const auto single = two.process.pair_distribution();
  CHECK(two.p_n[1] == doctest::Approx(2.0 * single[0] * single[1]).epsilon(1e-14));
  CHECK(two.p_n[2] ==
        doctest::Approx(2.0 * single[0] * single[2] + single[1] * single[1])
            .epsilon(1e-14));
}

TEST_CASE("chi equals 1/N in the amplitude convention") {
  for (int n : {1, 2, 4, 10, 16}) {
    for (double xi : {1e-3, 0.01, 0.05}) {
      const MultiProcessState state = MultiProcessState::build(n, xi, 6);
      CHECK(std::abs(chi_from_fock(state) - 1.0 / n) <= 10.0 * n * xi * xi);
      CHECK(chi_from_fock(state) == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
  }
  // the raw normalized-table ratio carries the C^{2N} factor on top
  const MultiProcessState hot = MultiProcessState::build(4, 0.2, 10);
  const double raw = 2.0 * hot.p_n[2] / (hot.p_n[1] * hot.p_n[1]) - 1.0;
  const double expected = (5.0 / 4.0) * std::pow(std::cosh(0.2), 8.0) - 1.0;
  CHECK(raw == doctest::Approx(expected).epsilon(1e-10));
  CHECK(raw > chi_from_fock(hot));
}

TEST_CASE("sector norms count the pair-assignment patterns") {
  for (int n : {1, 2, 3, 10, 64}) {
    const auto [two, four] = sector_norms(n);
    CHECK(two == n);
    CHECK(four == static_cast<std::int64_t>(n) * (n + 1) / 2);
  }
  CHECK_THROWS_AS(sector_norms(0), std::domain_error);
}

TEST_CASE("four-photon decomposition weights") {
  for (int n : {1, 2, 5, 33}) {
    const FourPhotonDecomposition d = four_photon_decomposition(n);
    CHECK(d.weight_entangled == doctest::Approx(2.0 / (n + 1)).epsilon(1e-15));
    CHECK(d.weight_two_pairs == doctest::Approx((n - 1.0) / (n + 1)).epsilon(1e-15));
    CHECK(d.weight_entangled + d.weight_two_pairs == doctest::Approx(1.0));
    // the weight pins the equivalent chi: w = 2 chi / (1 + chi) at chi = 1/N
    CHECK(d.chi_equivalent == doctest::Approx(1.0 / n).epsilon(1e-14));
  }
}

TEST_CASE("probabilities enforces the truncation tail") {
  const MultiProcessState loose = MultiProcessState::build(1, 0.5, 1);
  CHECK(loose.tail_bound > 1e-3);
  CHECK_THROWS_AS(probabilities(loose), std::domain_error);
  CHECK_NOTHROW(probabilities(loose, 0.5));
  const MultiProcessState tight = MultiProcessState::build(1, 0.5, 40);
  CHECK_NOTHROW(probabilities(tight));
}

TEST_CASE("poisson limit: distance shrinks with N") {
  const double d10 = poisson_limit_check(10, 0.1);
  const double d100 = poisson_limit_check(100, 0.1);
  CHECK(d100 < d10);
  CHECK(d100 < 1e-3);
  CHECK(poisson_limit_check(50, 0.0) == 0.0);
  CHECK_THROWS_AS(poisson_limit_check(5, 0.1), std::domain_error);
  CHECK_THROWS_AS(poisson_limit_check(10, 11.0), std::domain_error);
}

TEST_CASE("summary json") {
  const MultiProcessState state = MultiProcessState::build(2, 0.01, 4);
  const nlohmann::json j = fock_summary_json(state);
  CHECK(j["N"] == 2);
  CHECK(j["xi"] == 0.01);
  CHECK(j["chi"].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(j["tail_bound"].get<double>() < 1e-12);
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(SqueezedProcess(-0.1), std::domain_error);
  CHECK_THROWS_AS(SqueezedProcess(0.1, 0), std::domain_error);
  CHECK_THROWS_AS(MultiProcessState::build(0, 0.1), std::domain_error);
  const MultiProcessState zero = MultiProcessState::build(3, 0.0, 4);
  CHECK_THROWS_AS(chi_from_fock(zero), std::domain_error);  // P2 = 0
}
