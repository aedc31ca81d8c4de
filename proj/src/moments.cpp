#include "fourphoton/moments.hpp"

#include <cmath>
#include <limits>

namespace fourphoton {

MomentConfig::MomentConfig(FrequencyGrid signal, FrequencyGrid idler)
    : signal_grid(signal), idler_grid(idler) {}

MomentConfig MomentConfig::auto_gaussian(const GaussianPump& pump,
                                         const GaussianFilter& filter,
                                         int points) {
  const double idler_center = pump.carrier - filter.center;
  const double idler_width =
      8.0 * std::sqrt(pump.sigma * pump.sigma + filter.sigma * filter.sigma);
  return MomentConfig(FrequencyGrid(filter.center, 8.0 * filter.sigma, points),
                      FrequencyGrid(idler_center, idler_width, points));
}

namespace {

KernelMatrix build_kernel_at(const JointAmplitude& amplitude,
                             const IntensityProfile& filter,
                             const MomentConfig& config, int points) {
  const QuadratureRule signal = make_rule(config.rule, points,
                                          config.signal_grid.lo(),
                                          config.signal_grid.hi());
  const QuadratureRule idler = make_rule(config.rule, points,
                                         config.idler_grid.lo(),
                                         config.idler_grid.hi());
  const int n1 = static_cast<int>(signal.nodes.size());
  const int n2 = static_cast<int>(idler.nodes.size());

  // M = A^dagger A with A(k,i) = sqrt(u_k F_k) G(w1_k, w2_i); the sqrt keeps
  // the assembled matrix Hermitian PSD independent of roundoff.
  Eigen::MatrixXcd a(n1, n2);
  for (int k = 0; k < n1; ++k) {
    const double w1 = signal.nodes[k];
    const double fk = filter(w1);
    if (fk < 0.0)
      throw std::domain_error("build_kernel: filter intensity must be nonnegative");
    const double s = std::sqrt(signal.weights[k] * fk);
    for (int i = 0; i < n2; ++i) a(k, i) = s * amplitude(w1, idler.nodes[i]);
  }

  KernelMatrix kernel;
  kernel.nodes = Eigen::Map<const Eigen::VectorXd>(idler.nodes.data(), n2);
  kernel.weights = Eigen::Map<const Eigen::VectorXd>(idler.weights.data(), n2);
  kernel.values = a.adjoint() * a;

  const double norm = kernel.values.norm();
  const Eigen::MatrixXcd skew =
      0.5 * (kernel.values - kernel.values.adjoint().eval());
  kernel.hermiticity_correction = norm > 0.0 ? skew.norm() / norm : 0.0;
  kernel.values -= skew;
  return kernel;
}

bool windows_overlap(const MomentConfig& config) {
  return config.signal_grid.lo() <= config.idler_grid.hi() &&
         config.idler_grid.lo() <= config.signal_grid.hi();
}

MomentResult converge(const JointAmplitude& amplitude,
                      const IntensityProfile& filter,
                      const MomentConfig& config) {
  if (config.refinement < 1)
    throw std::domain_error("MomentConfig: refinement must be >= 1");
  if (!(config.pump_intensity_scale > 0.0))
    throw std::domain_error("MomentConfig: pump intensity scale must be > 0");
  if (config.signal_grid.points != config.idler_grid.points)
    throw std::domain_error("MomentConfig: grids must use equal point counts");

  int points = config.signal_grid.points;
  MomentResult prev = compute_moments(build_kernel_at(amplitude, filter, config, points));
  prev.grid_points = points;
  double estimate = std::numeric_limits<double>::infinity();
  for (int step = 0; step < config.refinement; ++step) {
    points *= 2;
    MomentResult cur = compute_moments(build_kernel_at(amplitude, filter, config, points));
    cur.grid_points = points;
    estimate = std::abs(cur.chi - prev.chi) /
               std::max(std::abs(cur.chi), std::numeric_limits<double>::min());
    cur.error_estimate = estimate;
    cur.support_overlap_warning = windows_overlap(config);
    if (estimate <= config.convergence_threshold) return cur;
    prev = cur;
  }
  throw ConvergenceError(
      "chi quadrature did not converge: relative change " +
          std::to_string(estimate) + " above threshold " +
          std::to_string(config.convergence_threshold),
      estimate);
}

}  // namespace

KernelMatrix build_kernel(const JointAmplitude& amplitude,
                          const IntensityProfile& filter,
                          const MomentConfig& config) {
  return build_kernel_at(amplitude, filter, config, config.signal_grid.points);
}

MomentResult compute_moments(const KernelMatrix& kernel) {
  const int n = static_cast<int>(kernel.nodes.size());
  if (n == 0 || kernel.values.rows() != n || kernel.values.cols() != n)
    throw std::domain_error("compute_moments: malformed kernel");

  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += kernel.weights[i] * kernel.values(i, i).real();
  for (int i = 0; i < n; ++i) {
    if (kernel.values(i, i).real() < -1e-12 * std::abs(trace))
      throw std::domain_error("compute_moments: kernel diagonal must be nonnegative");
  }

  double j4f = 0.0;
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i)
      col += kernel.weights[i] * std::norm(kernel.values(i, j));
    j4f += kernel.weights[j] * col;
  }

  if (!(trace > 0.0))
    throw std::domain_error("compute_moments: J2F must be positive (degenerate input)");

  MomentResult result;
  result.j2f = trace;
  result.j4f = j4f;
  result.chi = j4f / (trace * trace);
  result.grid_points = n;
  result.hermiticity_correction = kernel.hermiticity_correction;
  return result;
}

MomentResult chi_filtered(const JointAmplitude& amplitude,
                          const IntensityProfile& filter,
                          const MomentConfig& config) {
  return converge(amplitude, filter, config);
}

MomentResult chi_filtered(const JointAmplitude& amplitude,
                          const GaussianFilter& filter,
                          const MomentConfig& config) {
  return converge(amplitude, [filter](double w) { return filter.intensity(w); },
                  config);
}

MomentResult chi_unfiltered(const JointAmplitude& amplitude,
                            const MomentConfig& config) {
  return converge(amplitude, [](double) { return 1.0; }, config);
}

MomentResult chi_quadrature_gaussian(double r_tilde, int points,
                                     double convergence_threshold,
                                     int refinement) {
  if (!(r_tilde > 0.0))
    throw std::domain_error("chi_quadrature_gaussian: r_tilde must be > 0");
  const GaussianFilter filter = make_gaussian_filter(0.0, 1.0);
  // carrier offset keeps the signal and idler windows disjoint
  const double offset = 32.0 * (1.0 + r_tilde);
  const GaussianPump pump =
      make_gaussian_pump(r_tilde, WidthConvention::AmplitudeSigma, offset);
  const JointAmplitude amplitude =
      make_joint(pump, PhaseMatching::unity(filter.center, offset));
  MomentConfig config = MomentConfig::auto_gaussian(pump, filter, points);
  config.convergence_threshold = convergence_threshold;
  config.refinement = refinement;
  return chi_filtered(amplitude, filter, config);
}

double chi_closed_form(double r) {
  if (!(r > 0.0)) throw std::domain_error("chi_closed_form: r must be > 0");
  return r / std::sqrt(1.0 + r * r);
}

ClosedFormDiagnostics chi_closed_form_diagnostics(double pump_sigma,
                                                  double filter_sigma) {
  if (!(pump_sigma > 0.0) || !(filter_sigma > 0.0))
    throw std::domain_error("chi_closed_form_diagnostics: widths must be > 0");
  const double inv_gamma2 = 1.0 / (filter_sigma * filter_sigma) +
                            1.0 / (2.0 * pump_sigma * pump_sigma);
  const double gamma2 = 1.0 / inv_gamma2;
  const double inv_gammap2 =
      inv_gamma2 - gamma2 / (4.0 * std::pow(pump_sigma, 4));
  ClosedFormDiagnostics d;
  d.gamma = std::sqrt(gamma2);
  d.gamma_prime = std::sqrt(1.0 / inv_gammap2);
  d.r_tilde = pump_sigma / filter_sigma;
  d.chi = d.gamma * d.gamma_prime / (filter_sigma * filter_sigma);
  return d;
}

nlohmann::json MomentResult::to_json() const {
  return nlohmann::json{{"j2f", j2f},
                        {"j4f", j4f},
                        {"chi", chi},
                        {"error_estimate", error_estimate},
                        {"grid_points", grid_points},
                        {"hermiticity_correction", hermiticity_correction}};
}

}  // namespace fourphoton
