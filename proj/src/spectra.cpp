#include "fourphoton/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fourphoton {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s
// t_c = 0.44 lambda^2/(c dlambda) is a good Gaussian approximation for narrow
// filters; flag it past 2% relative bandwidth (the 40 nm IF regime).
constexpr double kWidebandThreshold = 0.02;
}  // namespace

FrequencyGrid::FrequencyGrid(double center, double halfwidth, int points)
    : center(center), halfwidth(halfwidth), points(points) {
  if (points < 2) throw std::domain_error("FrequencyGrid: points must be >= 2");
  if (!(halfwidth > 0.0)) throw std::domain_error("FrequencyGrid: halfwidth must be > 0");
}

std::vector<double> FrequencyGrid::nodes() const {
  std::vector<double> out(points);
  const double h = 2.0 * halfwidth / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = center - halfwidth + h * i;
  // enforce exact symmetry of the endpoints and midpoint
  out.front() = center - halfwidth;
  out.back() = center + halfwidth;
  if (points % 2 == 1) out[points / 2] = center;
  return out;
}

Complex GaussianPump::amplitude(double omega) const {
  const double d = omega - carrier;
  const double peak =
      std::sqrt(norm) / std::pow(2.0 * std::numbers::pi * sigma * sigma, 0.25);
  return Complex(peak * std::exp(-d * d / (4.0 * sigma * sigma)), 0.0);
}

double fwhm_duration_from_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("fwhm_duration_from_sigma: sigma must be > 0");
  return std::sqrt(2.0 * std::numbers::ln2) / sigma;
}

double sigma_from_fwhm_duration(double duration) {
  if (!(duration > 0.0)) throw std::domain_error("sigma_from_fwhm_duration: duration must be > 0");
  return std::sqrt(2.0 * std::numbers::ln2) / duration;
}

GaussianPump make_gaussian_pump(double value, WidthConvention convention,
                                double carrier, double norm) {
  if (!(value > 0.0)) throw std::domain_error("make_gaussian_pump: width/duration must be > 0");
  if (!(norm > 0.0)) throw std::domain_error("make_gaussian_pump: norm must be > 0");
  GaussianPump pump;
  pump.carrier = carrier;
  pump.norm = norm;
  pump.sigma = convention == WidthConvention::AmplitudeSigma
                   ? value
                   : sigma_from_fwhm_duration(value);
  return pump;
}

double GaussianFilter::intensity(double omega) const {
  const double d = omega - center;
  return peak * std::exp(-d * d / (2.0 * sigma * sigma));
}

double GaussianFilter::amplitude(double omega) const {
  return std::sqrt(intensity(omega));
}

GaussianFilter make_gaussian_filter(double center, double sigma, double peak) {
  if (!(sigma > 0.0)) throw std::domain_error("make_gaussian_filter: sigma must be > 0");
  if (!(peak > 0.0) || peak > 1.0)
    throw std::domain_error("make_gaussian_filter: peak transmission must be in (0,1]");
  return GaussianFilter{center, sigma, peak};
}

CoherenceTime coherence_time_from_filter(double lambda_nm, double dlambda_nm) {
  if (!(lambda_nm > 0.0) || !(dlambda_nm > 0.0))
    throw std::domain_error("coherence_time_from_filter: wavelengths must be > 0");
  const double lambda = lambda_nm * 1e-9;
  const double dlambda = dlambda_nm * 1e-9;
  const double tc = 0.44 * lambda * lambda / (kSpeedOfLight * dlambda);
  return CoherenceTime{tc * 1e15, dlambda_nm / lambda_nm > kWidebandThreshold};
}

double filter_intensity_sigma_from_fwhm_nm(double lambda_nm, double dlambda_nm) {
  if (!(lambda_nm > 0.0) || !(dlambda_nm > 0.0))
    throw std::domain_error("filter_intensity_sigma_from_fwhm_nm: wavelengths must be > 0");
  const double c_nm_per_fs = kSpeedOfLight * 1e-6;  // 299.792458 nm/fs
  const double fwhm_rad_per_fs =
      2.0 * std::numbers::pi * c_nm_per_fs * dlambda_nm / (lambda_nm * lambda_nm);
  return fwhm_rad_per_fs / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

Complex TabulatedProfile::at(double w) const {
  if (omega.empty()) throw std::out_of_range("TabulatedProfile: empty profile");
  if (w < omega.front() || w > omega.back())
    throw std::out_of_range("TabulatedProfile: query outside tabulated grid");
  auto it = std::upper_bound(omega.begin(), omega.end(), w);
  if (it == omega.end()) return value.back();
  const std::size_t hi = static_cast<std::size_t>(it - omega.begin());
  if (hi == 0) return value.front();
  const std::size_t lo = hi - 1;
  const double t = (w - omega[lo]) / (omega[hi] - omega[lo]);
  return value[lo] + t * (value[hi] - value[lo]);
}

TabulatedProfile load_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("profile CSV: missing header");
  // strip optional BOM and CR
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  bool has_im;
  if (line == "omega,re") has_im = false;
  else if (line == "omega,re,im") has_im = true;
  else throw std::runtime_error("profile CSV: header must be 'omega,re' or 'omega,re,im'");

  TabulatedProfile profile;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    double fields[3] = {0.0, 0.0, 0.0};
    int nfields = 0;
    while (std::getline(ss, cell, ',')) {
      if (nfields >= 3) throw std::runtime_error("profile CSV: too many columns at line " + std::to_string(lineno));
      std::size_t pos = 0;
      fields[nfields] = std::stod(cell, &pos);
      if (pos != cell.size()) throw std::runtime_error("profile CSV: bad number at line " + std::to_string(lineno));
      ++nfields;
    }
    if (nfields != (has_im ? 3 : 2))
      throw std::runtime_error("profile CSV: wrong column count at line " + std::to_string(lineno));
    if (!profile.omega.empty() && !(fields[0] > profile.omega.back()))
      throw std::runtime_error("profile CSV: omega must be strictly increasing at line " + std::to_string(lineno));
    if (!std::isfinite(fields[0]) || !std::isfinite(fields[1]) || !std::isfinite(fields[2]))
      throw std::runtime_error("profile CSV: non-finite value at line " + std::to_string(lineno));
    profile.omega.push_back(fields[0]);
    profile.value.emplace_back(fields[1], fields[2]);
  }
  if (profile.omega.size() < 2)
    throw std::runtime_error("profile CSV: need at least two rows");
  return profile;
}

TabulatedProfile load_profile_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("profile CSV: cannot open " + path);
  return load_profile_csv(in);
}

PhaseMatching::PhaseMatching(std::variant<Unity, Gaussian, TabulatedProfile> mode,
                             double signal_carrier, double idler_carrier)
    : mode_(std::move(mode)),
      signal_carrier_(signal_carrier),
      idler_carrier_(idler_carrier) {
  // Non-degenerate condition behind the dropped exchange term.
  if (signal_carrier_ == idler_carrier_)
    throw std::domain_error("PhaseMatching: signal and idler carriers must differ");
}

PhaseMatching PhaseMatching::unity(double signal_carrier, double idler_carrier) {
  return PhaseMatching(Unity{}, signal_carrier, idler_carrier);
}

PhaseMatching PhaseMatching::gaussian(double width, double signal_carrier,
                                      double idler_carrier) {
  if (!(width > 0.0)) throw std::domain_error("PhaseMatching: width must be > 0");
  return PhaseMatching(Gaussian{width}, signal_carrier, idler_carrier);
}

PhaseMatching PhaseMatching::tabulated(TabulatedProfile profile,
                                       double signal_carrier, double idler_carrier) {
  if (profile.omega.size() < 2)
    throw std::domain_error("PhaseMatching: tabulated profile needs >= 2 samples");
  for (const auto& v : profile.value)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("PhaseMatching: tabulated values must be finite");
  return PhaseMatching(std::move(profile), signal_carrier, idler_carrier);
}

Complex PhaseMatching::operator()(double w1, double /*w2*/) const {
  if (std::holds_alternative<Unity>(mode_)) return Complex(1.0, 0.0);
  if (const auto* g = std::get_if<Gaussian>(&mode_)) {
    const double d = w1 - signal_carrier_;
    return Complex(std::exp(-d * d / (4.0 * g->width * g->width)), 0.0);
  }
  return std::get<TabulatedProfile>(mode_).at(w1);
}

JointAmplitude make_joint(const GaussianPump& pump, PhaseMatching phasematch) {
  return JointAmplitude{[pump](double w) { return pump.amplitude(w); },
                        std::move(phasematch)};
}

Complex eval_joint(const JointAmplitude& amplitude, double w1, double w2) {
  return amplitude(w1, w2);
}

}  // namespace fourphoton
