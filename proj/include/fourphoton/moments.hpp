#ifndef FOURPHOTON_MOMENTS_HPP
#define FOURPHOTON_MOMENTS_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

#include "fourphoton/quadrature.hpp"
#include "fourphoton/spectra.hpp"

#include "json.hpp"

namespace fourphoton {

using IntensityProfile = std::function<double(double)>;

struct MomentConfig {
  FrequencyGrid signal_grid;  // w1 axis, where the filter acts
  FrequencyGrid idler_grid;   // w2 axis, the kernel axis
  double pump_intensity_scale = 1.0;  // I of P2 = I*J2; cancels in chi
  RuleKind rule = RuleKind::GaussLegendre;
  int refinement = 3;  // max grid doublings for the convergence check
  double convergence_threshold = 1e-4;

  MomentConfig(FrequencyGrid signal, FrequencyGrid idler);

  /// Grids covering a Gaussian pump/filter pair: signal +-8 filter sigmas
  /// around the filter center, idler +-8*sqrt(sp^2+sf^2) around
  /// pump.carrier - filter.center (where the kernel diagonal peaks).
  static MomentConfig auto_gaussian(const GaussianPump& pump,
                                    const GaussianFilter& filter, int points);
};

/// M(w2,w2') = int dw1 F(w1) G(w1,w2) G*(w1,w2'); Hermitian PSD by
/// construction (assembled as A^dagger A with A_{k,i} = sqrt(u_k F_k) G_{k,i}).
struct KernelMatrix {
  Eigen::VectorXd nodes;    // idler-frequency samples
  Eigen::VectorXd weights;  // idler quadrature weights
  Eigen::MatrixXcd values;
  double hermiticity_correction = 0.0;  // relative norm of the symmetrized part
};

struct MomentResult {
  double j2f = 0.0;
  double j4f = 0.0;
  double chi = 0.0;  // j4f / j2f^2, stored exactly as that ratio
  double error_estimate = 0.0;  // relative chi change under grid doubling
  int grid_points = 0;
  double hermiticity_correction = 0.0;
  bool support_overlap_warning = false;  // signal and idler windows overlap

  nlohmann::json to_json() const;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate(estimate) {}
  double estimate;
};

KernelMatrix build_kernel(const JointAmplitude& amplitude,
                          const IntensityProfile& filter,
                          const MomentConfig& config);

/// J2F = weighted trace, J4F = weighted squared Frobenius norm, chi = ratio.
/// error_estimate is left 0; the chi_* drivers fill it by grid doubling.
MomentResult compute_moments(const KernelMatrix& kernel);

/// Filtered chi with convergence control: doubles the grids until the
/// relative change of chi falls below config.convergence_threshold, up to
/// config.refinement doublings, else throws ConvergenceError.
MomentResult chi_filtered(const JointAmplitude& amplitude,
                          const IntensityProfile& filter,
                          const MomentConfig& config);

MomentResult chi_filtered(const JointAmplitude& amplitude,
                          const GaussianFilter& filter,
                          const MomentConfig& config);

/// chi_0: same kernel path with F == 1 over the signal window.
MomentResult chi_unfiltered(const JointAmplitude& amplitude,
                            const MomentConfig& config);

/// chi = r / sqrt(1 + r^2).
double chi_closed_form(double r);

/// Quadrature chi for the canonical Gaussian configuration: unit-sigma
/// filter, pump sigma r_tilde, unity phase matching, non-overlapping
/// signal/idler carriers. `points` is the starting grid size; the returned
/// result is the doubled, converged one.
MomentResult chi_quadrature_gaussian(double r_tilde, int points = 128,
                                     double convergence_threshold = 1e-4,
                                     int refinement = 3);

struct ClosedFormDiagnostics {
  double gamma;        // 1/Gamma^2 = 1/Delta_F^2 + 1/(2 Delta_p^2)
  double gamma_prime;  // 1/Gamma'^2 = 1/Gamma^2 - Gamma^2/(4 Delta_p^4)
  double r_tilde;      // Delta_p / Delta_F
  double chi;          // Gamma*Gamma'/Delta_F^2 == chi_closed_form(r_tilde)
};

ClosedFormDiagnostics chi_closed_form_diagnostics(double pump_sigma,
                                                  double filter_sigma);

}  // namespace fourphoton

#endif
