#ifndef FOURPHOTON_SPECTRA_HPP
#define FOURPHOTON_SPECTRA_HPP

#include <complex>
#include <functional>
#include <istream>
#include <string>
#include <variant>
#include <vector>

namespace fourphoton {

using Complex = std::complex<double>;

// All spectral quantities are dimensionless scaled frequencies (detuning over
// a user-declared reference bandwidth). Physical units appear only at the CLI
// boundary.

/// Uniform sampling grid for one frequency axis.
struct FrequencyGrid {
  double center;
  double halfwidth;
  int points;

  FrequencyGrid(double center, double halfwidth, int points);

  double lo() const { return center - halfwidth; }
  double hi() const { return center + halfwidth; }

  /// Strictly increasing nodes, symmetric about center.
  std::vector<double> nodes() const;
};

enum class WidthConvention {
  AmplitudeSigma,  // value is the amplitude standard deviation (canonical)
  IntensityFwhm,   // value is the pulse duration, intensity FWHM, time units
};

/// Transform-limited Gaussian pump spectrum g(w).
/// |g|^2 integrates to `norm`; `sigma` is the amplitude standard deviation.
struct GaussianPump {
  double carrier = 0.0;
  double sigma = 1.0;
  double norm = 1.0;

  Complex amplitude(double omega) const;
};

GaussianPump make_gaussian_pump(double value, WidthConvention convention,
                                double carrier = 0.0, double norm = 1.0);

/// Intensity-FWHM duration of the transform-limited pulse with amplitude
/// spectral sigma `sigma` (inverse of the IntensityFwhm construction).
double fwhm_duration_from_sigma(double sigma);
double sigma_from_fwhm_duration(double duration);

/// Gaussian intensity filter F(w); `sigma` is the intensity standard deviation.
struct GaussianFilter {
  double center = 0.0;
  double sigma = 1.0;
  double peak = 1.0;  // peak transmission in (0,1]

  double intensity(double omega) const;
  double amplitude(double omega) const;  // f = sqrt(F)
};

GaussianFilter make_gaussian_filter(double center, double sigma, double peak = 1.0);

struct CoherenceTime {
  double femtoseconds;
  // The Gaussian-transmission formula degrades for wide filters
  // (relative bandwidth above ~2%).
  bool gaussian_approx_degraded;
};

/// t_c = 0.44 lambda^2 / (c dlambda), inputs in nm, result in fs.
CoherenceTime coherence_time_from_filter(double lambda_nm, double dlambda_nm);

/// Intensity standard deviation (rad/fs) of a Gaussian filter specified by
/// its FWHM bandwidth in nm at center wavelength lambda.
double filter_intensity_sigma_from_fwhm_nm(double lambda_nm, double dlambda_nm);

/// 1-D complex profile sampled on a strictly increasing frequency grid,
/// evaluated by linear interpolation. Queries outside the grid throw.
struct TabulatedProfile {
  std::vector<double> omega;
  std::vector<Complex> value;

  Complex at(double w) const;
};

/// CSV columns `omega,re` or `omega,re,im`; header row required; strictly
/// increasing omega.
TabulatedProfile load_profile_csv(std::istream& in);
TabulatedProfile load_profile_csv(const std::string& path);

/// Phase-matching function Phi(w1,w2), peaked around the signal/idler
/// carriers. Gaussian and tabulated modes apply an envelope on the signal
/// axis; unity returns exactly 1 everywhere.
class PhaseMatching {
 public:
  static PhaseMatching unity(double signal_carrier, double idler_carrier);
  static PhaseMatching gaussian(double width, double signal_carrier,
                                double idler_carrier);
  static PhaseMatching tabulated(TabulatedProfile profile, double signal_carrier,
                                 double idler_carrier);

  Complex operator()(double w1, double w2) const;

  bool is_unity() const { return std::holds_alternative<Unity>(mode_); }
  double signal_carrier() const { return signal_carrier_; }
  double idler_carrier() const { return idler_carrier_; }

 private:
  struct Unity {};
  struct Gaussian { double width; };

  PhaseMatching(std::variant<Unity, Gaussian, TabulatedProfile> mode,
                double signal_carrier, double idler_carrier);

  std::variant<Unity, Gaussian, TabulatedProfile> mode_;
  double signal_carrier_;
  double idler_carrier_;
};

/// Joint spectral amplitude P(w1,w2) = pump(w1+w2) * Phi(w1,w2).
struct JointAmplitude {
  std::function<Complex(double)> pump;  // one-argument spectral amplitude
  PhaseMatching phasematch;

  Complex operator()(double w1, double w2) const {
    return pump(w1 + w2) * phasematch(w1, w2);
  }
};

JointAmplitude make_joint(const GaussianPump& pump, PhaseMatching phasematch);

Complex eval_joint(const JointAmplitude& amplitude, double w1, double w2);

}  // namespace fourphoton

#endif
