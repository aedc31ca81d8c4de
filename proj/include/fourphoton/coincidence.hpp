#ifndef FOURPHOTON_COINCIDENCE_HPP
#define FOURPHOTON_COINCIDENCE_HPP

#include <cstdint>
#include <vector>

#include "fourphoton/moments.hpp"

#include "json.hpp"

namespace fourphoton {

struct ExperimentConfig {
  double pulse_period_ns = 13.0;
  std::uint64_t pulses = 1000000;
  double p2 = 0.1;
  double chi = 0.5;      // P4 = (P2^2/2)(1+chi)
  double eta = 1.0;      // per-detector efficiency
  double dark_prob = 0.0;  // dark-count probability per detector per gate
  std::uint64_t seed = 0;
  double bin_width_ns = 0.5;
  int threads = 0;  // 0: hardware count, capped by FOURPHOTON_THREADS

  double p4() const { return 0.5 * p2 * p2 * (1.0 + chi); }
  void validate() const;
};

struct PeakSummary {
  double center_ns;
  std::uint64_t counts;  // window-integrated, center +- period/4
};

struct TacHistogram {
  std::vector<double> edges;  // bin edges over [-1.5, +1.5] pulse periods
  std::vector<std::uint64_t> counts;
  PeakSummary central{};
  PeakSummary side_plus{};
  PeakSummary side_minus{};

  // Estimator counts, post-selected on the pair-creation pattern that defines
  // each peak class: r0 = two pairs in one pulse split across the detectors,
  // rside_plus = single pair in pulse n at D+ and single pair in pulse n+1 at
  // D- (the mirrored ordering goes to rside_minus). Dark counts and multi-pair
  // pileup stay in the raw histogram but not here.
  std::uint64_t r0 = 0;
  std::uint64_t rside_plus = 0;
  std::uint64_t rside_minus = 0;

  std::uint64_t total() const;
  double ratio() const;         // r0 / rside_plus
  double ratio_stderr() const;  // Poisson propagation

  nlohmann::json summary_json(const ExperimentConfig& config) const;
};

/// Monte Carlo of the pulse train, 50-50 coupler and TAC. Deterministic for a
/// fixed seed, independent of the worker count (fixed-size batches with
/// derived sub-seeds, merged in index order).
TacHistogram simulate_pulse_train(const ExperimentConfig& config);

struct AppendixRates {
  double r_c;               // 2[(J2F)^2 + J4F]
  double r_lat;             // (J2F)^2
  double ratio_minus_one;   // == MomentResult::chi, bitwise

  double ratio() const { return 1.0 + ratio_minus_one; }
};

AppendixRates appendix_rates(const MomentResult& moments);

}  // namespace fourphoton

#endif
