#ifndef FOURPHOTON_FOCK_HPP
#define FOURPHOTON_FOCK_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"

namespace fourphoton {

/// One two-mode squeezed-vacuum process, |n;n> amplitude T^n/C,
/// truncated at n_max pairs.
struct SqueezedProcess {
  double xi;
  double T;  // tanh(xi)
  double C;  // cosh(xi)
  int n_max;
  double tail_bound;  // T^(2(n_max+1)) / (1 - T^2)

  explicit SqueezedProcess(double xi, int n_max = 6);

  /// Pair-number probabilities p(n) = T^(2n)/C^2 for n = 0..n_max.
  std::vector<double> pair_distribution() const;
};

/// N independent processes; p_n is the exact (truncated) distribution of the
/// total pair number, all cosh factors retained.
struct MultiProcessState {
  int N;
  SqueezedProcess process;
  std::vector<double> p_n;
  double tail_bound;

  static MultiProcessState build(int N, double xi, int n_max = 6);
};

/// (<2|2>, <4|4>) by enumerating pair-assignment patterns across N processes.
std::pair<std::int64_t, std::int64_t> sector_norms(int N);

/// The exact table; throws if the truncation tail exceeds `tail_tolerance`.
const std::vector<double>& probabilities(const MultiProcessState& state,
                                         double tail_tolerance = 1e-6);

/// chi = 2 P4/P2^2 - 1 in the C = 1 amplitude convention (equals 1/N for the
/// ideal geometric model at every xi). The raw normalized-table ratio exceeds
/// this by the factor C^(2N); chi_from_fock divides that normalization out.
double chi_from_fock(const MultiProcessState& state);

struct FourPhotonDecomposition {
  double weight_entangled;  // squared amplitude on the |4 entg> sector
  double weight_two_pairs;  // squared amplitude on the |2 EPR> sector
  double chi_equivalent;
};

/// Weights (2/(N+1), (N-1)/(N+1)) built by sector enumeration.
FourPhotonDecomposition four_photon_decomposition(int N);

/// Total-variation distance between the exact N-process pair distribution at
/// per-process T^2 = mu/N and Poisson(mu), tails folded in.
double poisson_limit_check(int N, double mu);

nlohmann::json fock_summary_json(const MultiProcessState& state);

}  // namespace fourphoton

#endif
