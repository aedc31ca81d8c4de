#include "fourphoton/coincidence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace fourphoton {

namespace {

constexpr std::uint64_t kBatchSize = 1 << 16;  // fixed: results must not depend on the worker count

// per-pulse record bits
constexpr std::uint8_t kPlusClick = 1 << 0;
constexpr std::uint8_t kMinusClick = 1 << 1;
constexpr std::uint8_t kSinglePlus = 1 << 2;   // one-pair pulse detected at D+
constexpr std::uint8_t kSingleMinus = 1 << 3;  // one-pair pulse detected at D-
constexpr std::uint8_t kR0Event = 1 << 4;      // two-pair pulse split and both detected

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct BatchResult {
  std::vector<std::uint64_t> bins;
  std::uint64_t r0 = 0;
  std::uint64_t rside_plus = 0;
  std::uint64_t rside_minus = 0;
  std::uint8_t first = 0;
  std::uint8_t last = 0;
  std::uint64_t count = 0;
};

int resolve_threads(int requested) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("FOURPHOTON_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit > 0) n = std::min(n, limit);
  }
  return n;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(pulse_period_ns > 0.0))
    throw std::domain_error("ExperimentConfig: pulse period must be > 0");
  if (!(bin_width_ns > 0.0) || bin_width_ns > pulse_period_ns / 4.0)
    throw std::domain_error("ExperimentConfig: bin width must be positive and well below the pulse period");
  if (p2 < 0.0 || chi < 0.0 || chi > 1.0)
    throw std::domain_error("ExperimentConfig: need P2 >= 0 and chi in [0,1]");
  if (p2 + p4() > 1.0)
    throw std::domain_error("ExperimentConfig: P2 + P4 exceeds 1, higher orders not negligible");
  if (!(eta > 0.0) || eta > 1.0)
    throw std::domain_error("ExperimentConfig: eta must be in (0,1]");
  if (dark_prob < 0.0 || dark_prob >= 1.0)
    throw std::domain_error("ExperimentConfig: dark probability must be in [0,1)");
  if (p2 > 0.3)
    std::cerr << "fourphoton: warning: P2 > 0.3, the two-pair truncation degrades\n";
}

std::uint64_t TacHistogram::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

double TacHistogram::ratio() const {
  if (rside_plus == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(r0) / static_cast<double>(rside_plus);
}

double TacHistogram::ratio_stderr() const {
  if (r0 == 0 || rside_plus == 0) return std::numeric_limits<double>::quiet_NaN();
  return ratio() * std::sqrt(1.0 / static_cast<double>(r0) +
                             1.0 / static_cast<double>(rside_plus));
}

nlohmann::json TacHistogram::summary_json(const ExperimentConfig& config) const {
  return nlohmann::json{{"r0", r0},
                        {"rside_plus", rside_plus},
                        {"rside_minus", rside_minus},
                        {"ratio", ratio()},
                        {"ratio_stderr", ratio_stderr()},
                        {"seed", config.seed},
                        {"pulses", config.pulses}};
}

namespace {

BatchResult simulate_batch(const ExperimentConfig& config, std::uint64_t batch,
                           std::uint64_t count, std::size_t nbins,
                           std::size_t bin0, std::size_t bin_plus,
                           std::size_t bin_minus) {
  std::mt19937_64 rng(splitmix64(config.seed + 0x9E3779B97F4A7C15ULL * (batch + 1)));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const double p4 = config.p4();
  const double p2 = config.p2;

  BatchResult out;
  out.bins.assign(nbins, 0);
  out.count = count;

  std::uint8_t prev = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double u = uniform(rng);
    int pairs = 0;
    if (u < p4) pairs = 2;
    else if (u < p4 + p2) pairs = 1;

    int plus_photons = 0, minus_photons = 0;
    for (int p = 0; p < pairs; ++p) {
      const bool to_plus = uniform(rng) < 0.5;  // 50-50 coupler
      const bool detected = uniform(rng) < config.eta;
      if (!detected) continue;
      if (to_plus) ++plus_photons;
      else ++minus_photons;
    }
    const bool dark_plus = uniform(rng) < config.dark_prob;
    const bool dark_minus = uniform(rng) < config.dark_prob;

    std::uint8_t rec = 0;
    if (plus_photons > 0 || dark_plus) rec |= kPlusClick;
    if (minus_photons > 0 || dark_minus) rec |= kMinusClick;
    if (pairs == 1 && plus_photons == 1) rec |= kSinglePlus;
    if (pairs == 1 && minus_photons == 1) rec |= kSingleMinus;
    if (pairs == 2 && plus_photons == 1 && minus_photons == 1) rec |= kR0Event;

    // same-pulse coincidence (central peak)
    if ((rec & kPlusClick) && (rec & kMinusClick)) ++out.bins[bin0];
    if (rec & kR0Event) ++out.r0;
    if (i > 0) {
      // START D+ pulse n, STOP D- pulse n+1 -> +period; mirrored -> -period
      if ((prev & kPlusClick) && (rec & kMinusClick)) ++out.bins[bin_plus];
      if ((prev & kMinusClick) && (rec & kPlusClick)) ++out.bins[bin_minus];
      if ((prev & kSinglePlus) && (rec & kSingleMinus)) ++out.rside_plus;
      if ((prev & kSingleMinus) && (rec & kSinglePlus)) ++out.rside_minus;
    } else {
      out.first = rec;
    }
    prev = rec;
  }
  out.last = prev;
  return out;
}

}  // namespace

TacHistogram simulate_pulse_train(const ExperimentConfig& config) {
  config.validate();
  if (config.pulses == 0)
    throw std::domain_error("simulate_pulse_train: empty run, no pulses requested");

  const double period = config.pulse_period_ns;
  const double lo = -1.5 * period;
  const std::size_t nbins = static_cast<std::size_t>(
      std::ceil(3.0 * period / config.bin_width_ns));

  TacHistogram hist;
  hist.edges.resize(nbins + 1);
  for (std::size_t i = 0; i <= nbins; ++i)
    hist.edges[i] = lo + static_cast<double>(i) * config.bin_width_ns;
  hist.counts.assign(nbins, 0);

  auto bin_of = [&](double delay) {
    auto idx = static_cast<std::ptrdiff_t>(std::floor((delay - lo) / config.bin_width_ns));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(nbins) - 1);
    return static_cast<std::size_t>(idx);
  };
  const std::size_t bin0 = bin_of(0.0);
  const std::size_t bin_plus = bin_of(period);
  const std::size_t bin_minus = bin_of(-period);

  const std::uint64_t nbatches = (config.pulses + kBatchSize - 1) / kBatchSize;
  std::vector<BatchResult> results(nbatches);

  const int nthreads =
      static_cast<int>(std::min<std::uint64_t>(resolve_threads(config.threads), nbatches));
  std::vector<std::thread> workers;
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= nbatches) return;
      const std::uint64_t count =
          std::min<std::uint64_t>(kBatchSize, config.pulses - b * kBatchSize);
      results[b] = simulate_batch(config, b, count, nbins, bin0, bin_plus, bin_minus);
    }
  };
  if (nthreads <= 1) {
    work();
  } else {
    workers.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) workers.emplace_back(work);
    for (auto& w : workers) w.join();
  }

  // merge in batch order; stitch the coincidences that straddle batch edges
  for (std::uint64_t b = 0; b < nbatches; ++b) {
    const BatchResult& r = results[b];
    for (std::size_t i = 0; i < nbins; ++i) hist.counts[i] += r.bins[i];
    hist.r0 += r.r0;
    hist.rside_plus += r.rside_plus;
    hist.rside_minus += r.rside_minus;
    if (b + 1 < nbatches) {
      const std::uint8_t a = r.last;
      const std::uint8_t c = results[b + 1].count > 1 ? results[b + 1].first
                                                      : results[b + 1].last;
      if ((a & kPlusClick) && (c & kMinusClick)) ++hist.counts[bin_plus];
      if ((a & kMinusClick) && (c & kPlusClick)) ++hist.counts[bin_minus];
      if ((a & kSinglePlus) && (c & kSingleMinus)) ++hist.rside_plus;
      if ((a & kSingleMinus) && (c & kSinglePlus)) ++hist.rside_minus;
    }
  }

  auto window_counts = [&](double center) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < nbins; ++i) {
      const double mid = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
      if (std::abs(mid - center) <= period / 4.0) sum += hist.counts[i];
    }
    return PeakSummary{center, sum};
  };
  hist.central = window_counts(0.0);
  hist.side_plus = window_counts(period);
  hist.side_minus = window_counts(-period);
  return hist;
}

AppendixRates appendix_rates(const MomentResult& moments) {
  if (!(moments.j2f > 0.0))
    throw std::domain_error("appendix_rates: J2F must be positive");
  AppendixRates rates;
  rates.r_lat = moments.j2f * moments.j2f;
  rates.r_c = 2.0 * (rates.r_lat + moments.j4f);
  rates.ratio_minus_one = moments.chi;
  return rates;
}

}  // namespace fourphoton
