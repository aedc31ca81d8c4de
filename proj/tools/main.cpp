// fourphoton CLI: chi estimates, Fig.-3-style sweeps, Fock limits, TAC
// Monte Carlo runs and the appendix time-structure check. All physics lives
// in the library; this layer only converts units and formats output.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fourphoton/coincidence.hpp"
#include "fourphoton/fock.hpp"
#include "fourphoton/moments.hpp"
#include "fourphoton/spectra.hpp"
#include "fourphoton/timestructure.hpp"

namespace {

using nlohmann::json;

constexpr int kExitDomainError = 2;
constexpr int kExitConvergenceError = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("FOURPHOTON_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit > 0) n = std::min(n, limit);
  }
  return n;
}

struct ChiOptions {
  double pump_fwhm_fs = 0.0;
  double filter_fwhm_nm = 0.0;
  double lambda_nm = 1310.0;
  double r_direct = 0.0;
  std::string convention = "sigma-ratio";
  bool quadrature = false;
  bool operating_points = false;
  std::string out;
  std::string format = "json";
};

double ratio_from_physical(const ChiOptions& opt) {
  using namespace fourphoton;
  if (opt.convention == "fwhm-ratio") {
    const CoherenceTime tc =
        coherence_time_from_filter(opt.lambda_nm, opt.filter_fwhm_nm);
    return tc.femtoseconds / opt.pump_fwhm_fs;
  }
  // sigma-ratio: r = Delta_p / Delta_F in amplitude/intensity sigmas
  const double pump_sigma = sigma_from_fwhm_duration(opt.pump_fwhm_fs);
  const double filter_sigma =
      filter_intensity_sigma_from_fwhm_nm(opt.lambda_nm, opt.filter_fwhm_nm);
  return pump_sigma / filter_sigma;
}

int run_chi(const ChiOptions& opt) {
  using namespace fourphoton;

  if (opt.operating_points) {
    // the two Fig.-2-style operating points of the measurement
    const struct { double r, measured; } points[] = {{2.5, 0.95}, {0.2, 0.3}};
    std::string text = "r,chi_model,chi_measured\n";
    for (const auto& p : points)
      text += fmt(p.r) + "," + fmt(chi_closed_form(p.r)) + "," + fmt(p.measured) + "\n";
    write_text(opt.out, text);
    return 0;
  }

  double r = opt.r_direct;
  json result;
  if (r <= 0.0) {
    if (!(opt.pump_fwhm_fs > 0.0) || !(opt.filter_fwhm_nm > 0.0))
      throw std::domain_error("chi: provide --r or both --pump-fwhm-fs and --filter-fwhm-nm");
    const CoherenceTime tc =
        coherence_time_from_filter(opt.lambda_nm, opt.filter_fwhm_nm);
    r = ratio_from_physical(opt);
    result["t_c_fs"] = tc.femtoseconds;
    if (tc.gaussian_approx_degraded) {
      result["warning"] = "gaussian filter approximation less accurate at this bandwidth";
      std::cerr << "fourphoton: warning: gaussian transmission approximation "
                   "is less accurate for this filter bandwidth\n";
    }
  }
  result["r"] = r;
  result["convention"] = opt.convention;
  result["chi_closed_form"] = chi_closed_form(r);
  if (opt.quadrature) result["quadrature"] = chi_quadrature_gaussian(r).to_json();

  if (opt.format == "csv") {
    std::string text = "r,chi_closed_form";
    if (opt.quadrature) text += ",chi_quadrature,quadrature_error";
    text += "\n" + fmt(r) + "," + fmt(result["chi_closed_form"].get<double>());
    if (opt.quadrature) {
      text += "," + fmt(result["quadrature"]["chi"].get<double>()) + "," +
              fmt(result["quadrature"]["error_estimate"].get<double>());
    }
    write_text(opt.out, text + "\n");
  } else {
    write_text(opt.out, result.dump(2) + "\n");
  }
  return 0;
}

struct SweepOptions {
  double r_min = 0.05;
  double r_max = 5.0;
  int points = 50;
  bool log_scale = false;
  int quadrature_points = 64;
  std::string out;
};

int run_sweep(const SweepOptions& opt) {
  using namespace fourphoton;
  if (!(opt.r_min > 0.0) || !(opt.r_max > opt.r_min))
    throw std::domain_error("sweep: need 0 < r-min < r-max");
  if (opt.points < 2) throw std::domain_error("sweep: need at least 2 points");

  std::vector<double> rs(opt.points);
  for (int i = 0; i < opt.points; ++i) {
    const double t = static_cast<double>(i) / (opt.points - 1);
    rs[i] = opt.log_scale
                ? opt.r_min * std::pow(opt.r_max / opt.r_min, t)
                : opt.r_min + t * (opt.r_max - opt.r_min);
  }

  std::vector<MomentResult> quad(opt.points);
  std::vector<std::exception_ptr> errors(opt.points);
  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= opt.points) return;
      try {
        quad[i] = chi_quadrature_gaussian(rs[i], opt.quadrature_points);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::min(worker_count(), opt.points);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::string text = "r,chi_closed_form,chi_quadrature,quadrature_error\n";
  for (int i = 0; i < opt.points; ++i) {
    text += fmt(rs[i]) + "," + fmt(chi_closed_form(rs[i])) + "," +
            fmt(quad[i].chi) + "," + fmt(quad[i].error_estimate) + "\n";
  }
  write_text(opt.out, text);
  return 0;
}

struct FockOptions {
  int n = 1;
  double xi = 0.1;
  int n_max = 6;
  std::string out;
  std::string format = "json";
};

int run_fock(const FockOptions& opt) {
  using namespace fourphoton;
  const MultiProcessState state = MultiProcessState::build(opt.n, opt.xi, opt.n_max);
  if (opt.format == "csv") {
    std::string text = "n_pairs,probability\n";
    const auto& table = probabilities(state);
    for (std::size_t i = 0; i < table.size(); ++i)
      text += std::to_string(i) + "," + fmt(table[i]) + "\n";
    write_text(opt.out, text);
  } else {
    write_text(opt.out, fock_summary_json(state).dump(2) + "\n");
  }
  return 0;
}

struct TacOptions {
  fourphoton::ExperimentConfig config;
  std::string out;
  std::string histogram;
};

int run_tac(const TacOptions& opt) {
  using namespace fourphoton;
  const TacHistogram hist = simulate_pulse_train(opt.config);
  if (!opt.histogram.empty()) {
    std::string text = "delay_ns,counts\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      const double mid = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
      text += fmt(mid) + "," + std::to_string(hist.counts[i]) + "\n";
    }
    write_text(opt.histogram, text);
  }
  write_text(opt.out, hist.summary_json(opt.config).dump(2) + "\n");
  return 0;
}

struct VerifyOptions {
  double tau_widths = 50.0;
  double filter_sigma = 1.0;
  int points = 0;
  std::string out;
};

int run_verify(const VerifyOptions& opt) {
  using namespace fourphoton;
  const GaussianPump pump = make_gaussian_pump(1.0, WidthConvention::AmplitudeSigma, 40.0);
  const GaussianFilter filter = make_gaussian_filter(0.0, opt.filter_sigma);
  const JointAmplitude amplitude =
      make_joint(pump, PhaseMatching::unity(filter.center, pump.carrier));
  TimeStructureParams params;
  params.pump_sigma = pump.sigma;
  params.idler_carrier = pump.carrier - filter.center;
  params.detected_points = opt.points;
  params.idler_points = opt.points;
  const TimeStructureReport report =
      verify_time_structure(amplitude, filter, opt.tau_widths, params);
  write_text(opt.out, report.to_json().dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"four-photon statistics of pulsed parametric down-conversion"};
  app.require_subcommand(1);

  ChiOptions chi_opt;
  auto* chi = app.add_subcommand("chi", "stimulation parameter from filter/pump widths");
  chi->add_option("--pump-fwhm-fs", chi_opt.pump_fwhm_fs, "pump pulse duration, intensity FWHM (fs)");
  chi->add_option("--filter-fwhm-nm", chi_opt.filter_fwhm_nm, "filter bandwidth, FWHM (nm)");
  chi->add_option("--lambda-nm", chi_opt.lambda_nm, "filter center wavelength (nm)");
  chi->add_option("--r", chi_opt.r_direct, "ratio r directly, bypassing unit conversion");
  chi->add_option("--r-convention", chi_opt.convention, "sigma-ratio | fwhm-ratio")
      ->check(CLI::IsMember({"sigma-ratio", "fwhm-ratio"}));
  chi->add_flag("--quadrature", chi_opt.quadrature, "also compute chi by quadrature");
  chi->add_flag("--operating-points", chi_opt.operating_points,
                "print the two measured operating points next to the model");
  chi->add_option("-o,--out", chi_opt.out, "output path (default stdout)");
  chi->add_option("--format", chi_opt.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "chi(r) theory curve");
  sweep->add_option("--r-min", sweep_opt.r_min, "lower r");
  sweep->add_option("--r-max", sweep_opt.r_max, "upper r");
  sweep->add_option("--points", sweep_opt.points, "number of r samples");
  sweep->add_flag("--log", sweep_opt.log_scale, "logarithmic r spacing");
  sweep->add_option("--quadrature-points", sweep_opt.quadrature_points,
                    "starting grid points per axis");
  sweep->add_option("-o,--out", sweep_opt.out, "output CSV path (default stdout)");

  FockOptions fock_opt;
  auto* fock = app.add_subcommand("fock", "exact N-process Fock limits");
  fock->add_option("--n", fock_opt.n, "number of independent processes")->required();
  fock->add_option("--xi", fock_opt.xi, "squeezing parameter")->required();
  fock->add_option("--n-max", fock_opt.n_max, "per-process pair truncation");
  fock->add_option("-o,--out", fock_opt.out, "output path (default stdout)");
  fock->add_option("--format", fock_opt.format, "json summary | csv table")
      ->check(CLI::IsMember({"json", "csv"}));

  TacOptions tac_opt;
  auto* tac = app.add_subcommand("tac", "Monte Carlo TAC coincidence histogram");
  tac->add_option("--p2", tac_opt.config.p2, "pair probability per pulse")->required();
  tac->add_option("--chi", tac_opt.config.chi, "stimulation parameter")->required();
  tac->add_option("--pulses", tac_opt.config.pulses, "number of pump pulses")->required();
  tac->add_option("--seed", tac_opt.config.seed, "RNG seed")->required();
  tac->add_option("--eta", tac_opt.config.eta, "detector efficiency");
  tac->add_option("--dark", tac_opt.config.dark_prob, "dark-count probability per gate");
  tac->add_option("--period-ns", tac_opt.config.pulse_period_ns, "laser pulse period (ns)");
  tac->add_option("--bin-ns", tac_opt.config.bin_width_ns, "TAC bin width (ns)");
  tac->add_option("--histogram", tac_opt.histogram, "histogram CSV output path");
  tac->add_option("-o,--out", tac_opt.out, "summary JSON path (default stdout)");

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "appendix time-structure check");
  verify->add_option("--tau-widths", verify_opt.tau_widths,
                     "pulse separation in pump widths")->required();
  verify->add_option("--filter-sigma", verify_opt.filter_sigma,
                     "filter intensity sigma in pump sigmas");
  verify->add_option("--points", verify_opt.points, "grid points override");
  verify->add_option("-o,--out", verify_opt.out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*chi) return run_chi(chi_opt);
    if (*sweep) return run_sweep(sweep_opt);
    if (*fock) return run_fock(fock_opt);
    if (*tac) return run_tac(tac_opt);
    if (*verify) return run_verify(verify_opt);
  } catch (const fourphoton::ConvergenceError& e) {
    std::cerr << nlohmann::json{{"error", e.what()},
                                {"kind", "convergence"},
                                {"estimate", e.estimate}}.dump() << "\n";
    return kExitConvergenceError;
  } catch (const std::domain_error& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"kind", "domain"}}.dump() << "\n";
    return kExitDomainError;
  } catch (const std::out_of_range& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"kind", "domain"}}.dump() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"kind", "internal"}}.dump() << "\n";
    return 1;
  }
  return 0;
}
