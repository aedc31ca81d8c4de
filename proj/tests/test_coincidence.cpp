#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "fourphoton/coincidence.hpp"

using namespace fourphoton;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig config;
  config.p2 = 0.1;
  config.chi = 0.5;
  config.pulses = 300000;
  config.seed = 1234;
  return config;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig config = base_config();
  CHECK_NOTHROW(config.validate());
  CHECK(config.p4() == doctest::Approx(0.5 * 0.01 * 1.5));

  config.chi = 1.5;
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  config = base_config();
  config.p2 = 0.9;  // P2 + P4 > 1
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  config = base_config();
  config.eta = 0.0;
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  config = base_config();
  config.bin_width_ns = 7.0;  // > period/4
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  config = base_config();
  config.dark_prob = 1.0;
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  config = base_config();
  config.pulses = 0;
  CHECK_THROWS_AS(simulate_pulse_train(config), std::domain_error);
}

TEST_CASE("identical seeds give identical histograms") {
  const ExperimentConfig config = base_config();
  const TacHistogram a = simulate_pulse_train(config);
  const TacHistogram b = simulate_pulse_train(config);
  CHECK(a.counts == b.counts);
  CHECK(a.r0 == b.r0);
  CHECK(a.rside_plus == b.rside_plus);
  CHECK(a.rside_minus == b.rside_minus);

  ExperimentConfig other = config;
  other.seed = 4321;
  const TacHistogram c = simulate_pulse_train(other);
  CHECK(c.counts != a.counts);
}

TEST_CASE("results are independent of the worker count") {
  ExperimentConfig config = base_config();
  config.threads = 1;
  const TacHistogram serial = simulate_pulse_train(config);
  config.threads = 5;
  const TacHistogram parallel = simulate_pulse_train(config);
  CHECK(serial.counts == parallel.counts);
  CHECK(serial.r0 == parallel.r0);
  CHECK(serial.rside_plus == parallel.rside_plus);
  CHECK(serial.rside_minus == parallel.rside_minus);
}

TEST_CASE("coincidences land on the central and +-13 ns peaks") {
  const ExperimentConfig config = base_config();
  const TacHistogram hist = simulate_pulse_train(config);
  CHECK(hist.central.center_ns == 0.0);
  CHECK(hist.side_plus.center_ns == 13.0);
  CHECK(hist.side_minus.center_ns == -13.0);
  // without dark counts every coincidence sits in one of the three windows
  CHECK(hist.central.counts + hist.side_plus.counts + hist.side_minus.counts ==
        hist.total());
  CHECK(hist.total() > 0);
  // the two side peaks are statistically equal
  const double splus = static_cast<double>(hist.side_plus.counts);
  const double sminus = static_cast<double>(hist.side_minus.counts);
  CHECK(std::abs(splus - sminus) < 5.0 * std::sqrt(splus + sminus));
  CHECK(std::abs(static_cast<double>(hist.rside_plus) -
                 static_cast<double>(hist.rside_minus)) <
        5.0 * std::sqrt(static_cast<double>(hist.rside_plus + hist.rside_minus)));
}

TEST_CASE("ratio estimates 1 + chi") {
  for (double chi : {0.0, 0.5}) {
    ExperimentConfig config = base_config();
    config.chi = chi;
    config.pulses = 1000000;
    const TacHistogram hist = simulate_pulse_train(config);
    CHECK(std::abs(hist.ratio() - (1.0 + chi)) <= 3.0 * hist.ratio_stderr());
  }
}

TEST_CASE("ratio is consistent across seeds") {
  ExperimentConfig config = base_config();
  config.chi = 0.3;
  config.pulses = 100000;
  double sum = 0.0, sumsq = 0.0;
  const int runs = 20;
  for (int s = 0; s < runs; ++s) {
    config.seed = 1000 + s;
    const double r = simulate_pulse_train(config).ratio();
    sum += r;
    sumsq += r * r;
  }
  const double mean = sum / runs;
  const double sem = std::sqrt((sumsq / runs - mean * mean) / (runs - 1));
  CHECK(std::abs(mean - 1.3) < 3.0 * sem);
}

TEST_CASE("detector efficiency cancels in the ratio") {
  ExperimentConfig config = base_config();
  config.chi = 0.95;
  config.pulses = 1000000;
  const TacHistogram full = simulate_pulse_train(config);
  config.eta = 0.2;
  const TacHistogram thin = simulate_pulse_train(config);
  const double err = std::hypot(full.ratio_stderr(), thin.ratio_stderr());
  CHECK(std::abs(full.ratio() - thin.ratio()) <= 3.0 * err);
  // but the raw counts do fall
  CHECK(thin.total() < full.total() / 4);
}

TEST_CASE("dark counts fill coincidences without touching the estimators") {
  ExperimentConfig config = base_config();
  config.p2 = 0.0;
  config.chi = 0.0;
  config.dark_prob = 0.02;
  config.pulses = 500000;
  const TacHistogram hist = simulate_pulse_train(config);
  CHECK(hist.r0 == 0);
  CHECK(hist.rside_plus == 0);
  // accidental coincidences: dark^2 per pulse in each window
  const double expected = 0.02 * 0.02 * 500000.0;
  CHECK(std::abs(static_cast<double>(hist.central.counts) - expected) <
        5.0 * std::sqrt(expected));
  CHECK(std::abs(static_cast<double>(hist.side_plus.counts) - expected) <
        5.0 * std::sqrt(expected));
}

TEST_CASE("summary json carries the documented keys") {
  const ExperimentConfig config = base_config();
  const TacHistogram hist = simulate_pulse_train(config);
  const nlohmann::json j = hist.summary_json(config);
  for (const char* key :
       {"r0", "rside_plus", "rside_minus", "ratio", "ratio_stderr", "seed", "pulses"})
    CHECK(j.contains(key));
  CHECK(j["seed"] == 1234);
  CHECK(j["pulses"] == 300000);
}

TEST_CASE("appendix rates reproduce the 1 + chi structure") {
  MomentResult moments;
  moments.j2f = 2.0;
  moments.j4f = 1.5;
  moments.chi = moments.j4f / (moments.j2f * moments.j2f);
  const AppendixRates rates = appendix_rates(moments);
  CHECK(rates.r_lat == 4.0);
  CHECK(rates.r_c == 2.0 * (4.0 + 1.5));
  // R_c / (2 R_lat) = 1 + chi, and ratio_minus_one is bitwise chi
  CHECK(rates.r_c / (2.0 * rates.r_lat) == doctest::Approx(rates.ratio()).epsilon(1e-15));
  CHECK(rates.ratio_minus_one == moments.chi);

  moments.j2f = 0.0;
  CHECK_THROWS_AS(appendix_rates(moments), std::domain_error);
}
