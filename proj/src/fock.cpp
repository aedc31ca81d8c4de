#include "fourphoton/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fourphoton {

namespace {
constexpr std::size_t kMaxTableLength = 1025;  // total-pair cutoff of the table
}

SqueezedProcess::SqueezedProcess(double xi, int n_max) : xi(xi), n_max(n_max) {
  if (xi < 0.0) throw std::domain_error("SqueezedProcess: xi must be >= 0");
  if (n_max < 1) throw std::domain_error("SqueezedProcess: n_max must be >= 1");
  T = std::tanh(xi);
  C = std::cosh(xi);
  const double t2 = T * T;
  tail_bound = t2 == 0.0 ? 0.0 : std::pow(t2, n_max + 1) / (1.0 - t2);
}

std::vector<double> SqueezedProcess::pair_distribution() const {
  std::vector<double> p(n_max + 1);
  const double t2 = T * T;
  double term = 1.0 / (C * C);
  for (int n = 0; n <= n_max; ++n) {
    p[n] = term;
    term *= t2;
  }
  return p;
}

MultiProcessState MultiProcessState::build(int N, double xi, int n_max) {
  if (N < 1) throw std::domain_error("MultiProcessState: N must be >= 1");
  MultiProcessState state{N, SqueezedProcess(xi, n_max), {}, 0.0};

  const std::vector<double> single = state.process.pair_distribution();
  std::vector<double> table{1.0};
  double clipped = 0.0;
  for (int proc = 0; proc < N; ++proc) {
    std::vector<double> next(std::min(table.size() + single.size() - 1,
                                      kMaxTableLength),
                             0.0);
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t j = 0; j < single.size(); ++j) {
        const std::size_t k = i + j;
        if (k < next.size()) next[k] += table[i] * single[j];
        else clipped += table[i] * single[j];
      }
    }
    table = std::move(next);
  }
  state.p_n = std::move(table);
  state.tail_bound = std::min(1.0, N * state.process.tail_bound + clipped);
  return state;
}

std::pair<std::int64_t, std::int64_t> sector_norms(int N) {
  if (N < 1) throw std::domain_error("sector_norms: N must be >= 1");
  // |2>: one pair in process j, vacuum elsewhere - N orthogonal unit terms.
  std::int64_t norm2 = 0;
  for (int j = 0; j < N; ++j) ++norm2;
  // |4>: either a stimulated double pair in one process, or single pairs in
  // two distinct processes.
  std::int64_t norm4 = 0;
  for (int j = 0; j < N; ++j) ++norm4;
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k) ++norm4;
  return {norm2, norm4};
}

const std::vector<double>& probabilities(const MultiProcessState& state,
                                         double tail_tolerance) {
  if (state.tail_bound > tail_tolerance)
    throw std::domain_error("probabilities: truncation tail " +
                            std::to_string(state.tail_bound) +
                            " exceeds tolerance");
  return state.p_n;
}

double chi_from_fock(const MultiProcessState& state) {
  if (state.p_n.size() < 3 || !(state.p_n[1] > 0.0))
    throw std::domain_error("chi_from_fock: P2 vanishes, chi undefined");
  const double p2 = state.p_n[1];
  const double p4 = state.p_n[2];
  // C = 1 convention: divide the global normalization C^{2N} = (1-T^2)^{-N}
  // back out so that chi is built from the emission amplitudes T^n alone.
  const double t2 = state.process.T * state.process.T;
  const double c2n = std::pow(1.0 - t2, -state.N);
  return 2.0 * p4 / (p2 * p2) / c2n - 1.0;
}

FourPhotonDecomposition four_photon_decomposition(int N) {
  if (N < 1) throw std::domain_error("four_photon_decomposition: N must be >= 1");
  std::int64_t stimulated = 0, cross = 0;
  for (int j = 0; j < N; ++j) ++stimulated;
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k) ++cross;
  const double total = static_cast<double>(stimulated + cross);
  FourPhotonDecomposition d;
  d.weight_entangled = stimulated / total;
  d.weight_two_pairs = cross / total;
  // invert weight = 2 chi/(1+chi)
  d.chi_equivalent = d.weight_entangled / (2.0 - d.weight_entangled);
  return d;
}

double poisson_limit_check(int N, double mu) {
  if (N < 10) throw std::domain_error("poisson_limit_check: N must be >= 10");
  if (mu < 0.0) throw std::domain_error("poisson_limit_check: mu must be >= 0");
  const double t2 = mu / N;
  if (t2 >= 1.0)
    throw std::domain_error("poisson_limit_check: mu/N >= 1, no squeezing parameter exists");
  if (mu == 0.0) return 0.0;

  const double xi = std::atanh(std::sqrt(t2));
  // size the per-process truncation so the total tail is negligible
  int n_max = 2;
  while (std::pow(t2, n_max + 1) / (1.0 - t2) * N > 1e-12 && n_max < 64) ++n_max;
  const MultiProcessState state = MultiProcessState::build(N, xi, n_max);

  double tv = 0.0;
  double poisson_mass = 0.0;
  double exact_mass = 0.0;
  double pmf = std::exp(-mu);
  for (std::size_t n = 0; n < state.p_n.size(); ++n) {
    tv += std::abs(state.p_n[n] - pmf);
    poisson_mass += pmf;
    exact_mass += state.p_n[n];
    pmf *= mu / static_cast<double>(n + 1);
  }
  // fold the two truncation tails in
  tv += std::abs((1.0 - exact_mass) - (1.0 - poisson_mass));
  return 0.5 * tv;
}

nlohmann::json fock_summary_json(const MultiProcessState& state) {
  return nlohmann::json{{"chi", chi_from_fock(state)},
                        {"tail_bound", state.tail_bound},
                        {"N", state.N},
                        {"xi", state.process.xi}};
}

}  // namespace fourphoton
