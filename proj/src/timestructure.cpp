#include "fourphoton/timestructure.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "fourphoton/quadrature.hpp"

namespace fourphoton {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 : std::sin(x) / x; }

// Gauss-Legendre resolves e^{i tau w} on [-L,L] once n exceeds ~tau*L/2;
// keep a 1.3x margin plus a flat floor.
int oscillation_points(double halfwidth, double tau, int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::ceil(0.65 * halfwidth * tau)) + 64;
}

}  // namespace

double TimeStructureReport::r1_spread() const {
  const double vals[4] = {r1_00, r1_0tau, r1_tau0, r1_tautau};
  double lo = vals[0], hi = vals[0];
  for (double v : vals) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return (hi - lo) / std::abs(hi);
}

double TimeStructureReport::r2_cross_ratio() const { return std::abs(r2_0tau) / r2_00; }

double TimeStructureReport::half_tau_suppression() const {
  return std::abs(rate_half_tau) / peak_rate;
}

double TimeStructureReport::chi_from_rates() const { return r2_00 / r1_00; }

nlohmann::json TimeStructureReport::to_json() const {
  return nlohmann::json{{"tau", tau},
                        {"detector_window", detector_window},
                        {"r1_00", r1_00},
                        {"r1_0tau", r1_0tau},
                        {"r1_tau0", r1_tau0},
                        {"r1_tautau", r1_tautau},
                        {"r2_00", r2_00},
                        {"r2_tautau", r2_tautau},
                        {"r2_0tau", r2_0tau},
                        {"r2_tau0", r2_tau0},
                        {"r1_spread", r1_spread()},
                        {"r2_cross_ratio", r2_cross_ratio()},
                        {"rate_half_tau", rate_half_tau},
                        {"peak_rate", peak_rate},
                        {"half_tau_suppression", half_tau_suppression()},
                        {"chi_from_rates", chi_from_rates()}};
}

TimeStructureReport verify_time_structure(const JointAmplitude& amplitude,
                                          const GaussianFilter& filter,
                                          double tau,
                                          const TimeStructureParams& params) {
  if (!(params.pump_sigma > 0.0))
    throw std::domain_error("verify_time_structure: pump sigma must be > 0");
  // well-separated pulses: tau must exceed the pump coherence time 1/Delta_p
  if (!(tau * params.pump_sigma >= 10.0))
    throw std::domain_error(
        "verify_time_structure: tau*pump_sigma = " +
        std::to_string(tau * params.pump_sigma) +
        " but the appendix structure needs well-separated pulses (>= 10)");

  const double delta_t = params.detector_window > 0.0 ? params.detector_window
                                                      : tau / 10.0;
  if (!(delta_t < 0.45 * tau))
    throw std::domain_error("verify_time_structure: detector window must resolve the time bins");

  const std::complex<double> i1(0.0, 1.0);

  // detected (filtered) axis
  const double det_half = 8.0 * filter.sigma;
  const int n = oscillation_points(det_half, tau, params.detected_points);
  const QuadratureRule det = gauss_legendre(n, filter.center - det_half,
                                            filter.center + det_half);

  // undetected idler axis, wide enough to cover g(w+wt) for every detected w
  const double idl_half = 8.0 * params.pump_sigma + det_half;
  const int m = oscillation_points(idl_half, tau, params.idler_points);
  const QuadratureRule idl = gauss_legendre(m, params.idler_carrier - idl_half,
                                            params.idler_carrier + idl_half);

  // double-pulse joint amplitude on the grid, idler weights folded in
  MatrixXcd p(n, m);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < m; ++b) {
      const double sum = det.nodes[a] + idl.nodes[b];
      p(a, b) = (1.0 + std::exp(i1 * (sum * tau))) *
                amplitude(det.nodes[a], idl.nodes[b]) * std::sqrt(idl.weights[b]);
    }
  }
  const MatrixXcd b_kernel = p * p.adjoint();  // B(w,w') = int dwt P(w,wt) P*(w',wt)

  auto d_matrix = [&](double t) {
    MatrixXcd d(n, n);
    for (int a = 0; a < n; ++a) {
      const double fa = filter.amplitude(det.nodes[a]) * det.weights[a];
      for (int b = 0; b <= a; ++b) {
        const double fb = filter.amplitude(det.nodes[b]) * det.weights[b];
        const double u = det.nodes[a] - det.nodes[b];
        const std::complex<double> v =
            fa * fb * delta_t * sinc(u * delta_t) * std::exp(-i1 * (u * t));
        d(a, b) = v;
        d(b, a) = std::conj(v);
      }
    }
    return d;
  };

  const MatrixXcd d0 = d_matrix(0.0);
  const MatrixXcd dtau = d_matrix(tau);
  const MatrixXcd dhalf = d_matrix(0.5 * tau);

  auto q_of = [&](const MatrixXcd& d) {
    return (d.array() * b_kernel.array()).sum().real();
  };
  const double q0 = q_of(d0);
  const double qtau = q_of(dtau);
  const double qhalf = q_of(dhalf);

  const MatrixXcd e0 = b_kernel * d0.transpose() * b_kernel;
  const MatrixXcd etau = b_kernel * dtau.transpose() * b_kernel;
  auto r2_of = [&](const MatrixXcd& dc, const MatrixXcd& e) {
    return (dc.array() * e.array()).sum().real();
  };

  TimeStructureReport report;
  report.tau = tau;
  report.detector_window = delta_t;
  report.r1_00 = q0 * q0;
  report.r1_0tau = q0 * qtau;
  report.r1_tau0 = qtau * q0;
  report.r1_tautau = qtau * qtau;
  report.r2_00 = r2_of(d0, e0);
  report.r2_tautau = r2_of(dtau, etau);
  report.r2_0tau = r2_of(d0, etau);
  report.r2_tau0 = r2_of(dtau, e0);
  report.rate_half_tau = qhalf * q0 + r2_of(dhalf, e0);
  report.peak_rate = report.r1_00 + report.r2_00;
  return report;
}

}  // namespace fourphoton
