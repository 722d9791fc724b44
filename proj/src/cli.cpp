#include "entspec/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "entspec/config.hpp"
#include "entspec/errors.hpp"
#include "entspec/io.hpp"
#include "entspec/plot.hpp"

namespace entspec::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> sets;
  bool plot = false;
};

ExperimentConfig resolve_config(const GlobalOptions& g) {
  ExperimentConfig c = g.config_path.empty() ? config_with_overrides("", g.sets)
                                             : load_config(g.config_path, g.sets);
  if (g.seed) c.seed = *g.seed;
  if (!g.out_dir.empty()) c.output_dir = g.out_dir;
  return c;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  return dir;
}

Spectrum marginal_spectrum(const MarginalDensity& m) {
  Spectrum s;
  for (std::size_t i = 0; i < m.wavelengths().size(); ++i) {
    s.points.push_back({m.wavelengths()[i], m.density()[i], 0.0, 0});
  }
  return s;
}

int cmd_jsa(const ExperimentConfig& c, bool plot, std::ostream& out) {
  const auto marginal = signal_marginal(c.apparatus.source, c.apparatus.marginal_grid);
  const auto dir = ensure_dir(c.output_dir);
  write_text(dir / "marginal.csv", marginal_csv(marginal));
  const auto shape = fwhm_and_center(marginal_spectrum(marginal));
  out << "signal marginal: peak " << shape.center_nm << " nm, FWHM " << shape.fwhm_nm
      << " nm (L = " << c.apparatus.source.crystal.thickness_mm << " mm)\n";
  out << "wrote " << (dir / "marginal.csv").string() << "\n";
  if (plot) {
    PlotSeries s{"signal marginal", {}, {}};
    s.x.assign(marginal.wavelengths().begin(), marginal.wavelengths().end());
    s.y.assign(marginal.density().begin(), marginal.density().end());
    write_text(dir / "marginal.svg",
               svg_plot("Signal marginal density", "signal wavelength (nm)", "density (1/nm)", {s}));
  }
  return kSuccess;
}

int cmd_calibrate(ExperimentConfig c, std::ostream& out, std::ostream& err) {
  const double lp = c.apparatus.source.pump.center_wavelength_nm;
  CalibrationResult res;
  try {
    res = calibrate_cut_angle(c.apparatus.source.crystal, c.calibration_signal_nm, lp);
  } catch (const NoRootError& e) {
    err << "calibration failed: " << e.what() << "\n";
    return kCalibrationError;
  } catch (const DomainError& e) {
    err << "calibration failed: " << e.what() << "\n";
    return kCalibrationError;
  } catch (const RangeError& e) {
    err << "calibration failed: " << e.what() << "\n";
    return kCalibrationError;
  }
  c.apparatus.source.crystal.cut_angle_deg = res.cut_angle_deg;
  const auto dir = ensure_dir(c.output_dir);
  write_text(dir / "config.calibrated.json", config_to_json(c));
  const double li = conjugate_wavelength(c.calibration_signal_nm, lp);
  std::string report = "signal_target_nm=" + format_double(c.calibration_signal_nm) + "\n" +
                       "idler_nm=" + format_double(li) + "\n" +
                       "pump_nm=" + format_double(lp) + "\n" +
                       "cut_angle_deg=" + format_double(res.cut_angle_deg) + "\n" +
                       "residual_delta_k_rad_per_m=" + format_double(res.residual) + "\n";
  write_text(dir / "calibration_report.txt", report);
  out << report;
  return kSuccess;
}

int cmd_simulate(const ExperimentConfig& c, bool with_sample, unsigned threads, std::ostream& out) {
  const Experiment experiment(c.apparatus);
  const auto scan = scan_settings(c.apparatus.spectrometer);
  RunRecord record = run_scan(scan, with_sample, experiment, c.seed, threads);
  record.config_snapshot = config_to_json(c);
  write_run_record(c.output_dir, record);
  const auto spectrum = coincidence_spectrum(record, c.windows);
  out << "center_nm,net_counts,sigma\n";
  for (const auto& p : spectrum.points) {
    out << format_double(p.wavelength_nm) << "," << format_double(p.value) << ","
        << format_double(p.sigma) << "\n";
  }
  out << "wrote " << record.histograms.size() << " histograms to " << c.output_dir << "\n";
  return kSuccess;
}

bool same_grid(const RunRecord& a, const RunRecord& b) {
  if (a.histograms.size() != b.histograms.size()) return false;
  for (std::size_t i = 0; i < a.histograms.size(); ++i) {
    if (!(a.histograms[i].setting == b.histograms[i].setting)) return false;
  }
  return true;
}

int cmd_reconstruct(const ExperimentConfig& c, const std::string& ref_dir,
                    const std::string& sample_dir, bool plot, std::ostream& out,
                    std::ostream& err) {
  const RunRecord ref = read_run_record(ref_dir);
  const RunRecord smp = read_run_record(sample_dir);
  if (!same_grid(ref, smp)) {
    err << "reference and sample bundles have different scan grids\n";
    return kDataMismatch;
  }
  // Ground truth and pump come from the configuration the sample run used.
  ExperimentConfig truth_cfg = c;
  try {
    truth_cfg = config_from_json(smp.config_snapshot);
  } catch (const ConfigError&) {
    err << "warning: sample bundle config snapshot unreadable; using current config as truth\n";
  }
  const double lp = truth_cfg.apparatus.source.pump.center_wavelength_nm;
  const auto& model = truth_cfg.apparatus.sample;

  const Spectrum rs = coincidence_spectrum(ref, c.windows);
  const Spectrum ss = coincidence_spectrum(smp, c.windows);
  const Spectrum a = reconstruct_absorbance(rs, ss, c.min_counts, lp);

  const auto dir = ensure_dir(c.output_dir);
  write_text(dir / "coincidence_reference.csv", spectrum_csv(rs));
  write_text(dir / "coincidence_sample.csv", spectrum_csv(ss));
  write_text(dir / "absorbance.csv", absorbance_comparison_csv(a, model));

  double sum_sq = 0.0;
  std::size_t n = 0;
  for (const auto& p : a.points) {
    if (p.flags) continue;
    const double d = p.value - absorbance(model, p.wavelength_nm);
    sum_sq += d * d;
    ++n;
  }
  out << "points: " << a.size() << ", unflagged: " << n << "\n";
  if (n > 0) {
    out << "rms_error_vs_model: " << format_double(std::sqrt(sum_sq / static_cast<double>(n)))
        << "\n";
  }
  if (plot) {
    PlotSeries r{"without sample", {}, {}, "#1f77b4", false, true};
    PlotSeries s{"with sample", {}, {}, "#d62728"};
    for (const auto& p : rs.points) r.x.push_back(p.wavelength_nm), r.y.push_back(p.value);
    for (const auto& p : ss.points) s.x.push_back(p.wavelength_nm), s.y.push_back(p.value);
    write_text(dir / "coincidence.svg", svg_plot("Coincidence spectrum", "signal wavelength (nm)",
                                                 "net coincidences", {r, s}));
    PlotSeries rec{"reconstructed", {}, {}, "#d62728", true};
    PlotSeries mod{"model", {}, {}, "#000000"};
    for (const auto& p : a.points) {
      if (!(p.flags & flags::kUndefined)) rec.x.push_back(p.wavelength_nm), rec.y.push_back(p.value);
      mod.x.push_back(p.wavelength_nm);
      mod.y.push_back(absorbance(model, p.wavelength_nm));
    }
    write_text(dir / "absorbance.svg",
               svg_plot("Absorbance", "idler wavelength (nm)", "absorbance", {mod, rec}));
  }
  out << "wrote spectra to " << dir.string() << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entangled-photon absorption spectroscopy simulator", "entspec"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "master random seed");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--set", g.sets, "override a config value: dotted.key=value")->take_all();
  app.add_flag("--plot", g.plot, "also write SVG plots");

  auto* jsa = app.add_subcommand("jsa", "write the signal marginal density");
  auto* calibrate = app.add_subcommand("calibrate", "solve the phase-matching cut angle");
  auto* simulate = app.add_subcommand("simulate", "run the virtual coincidence scan");
  bool with_sample = false;
  unsigned threads = 0;
  simulate->add_flag("--with-sample", with_sample, "place the sample in the idler arm");
  simulate->add_option("--threads", threads, "worker threads (0 = all cores)");
  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct absorbance from two bundles");
  std::string ref_dir, sample_dir;
  reconstruct->add_option("reference", ref_dir, "bundle recorded without the sample")->required();
  reconstruct->add_option("sample", sample_dir, "bundle recorded with the sample")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    const ExperimentConfig c = resolve_config(g);
    if (jsa->parsed()) return cmd_jsa(c, g.plot, out);
    if (calibrate->parsed()) return cmd_calibrate(c, out, err);
    if (simulate->parsed()) return cmd_simulate(c, with_sample, threads, out);
    if (reconstruct->parsed()) return cmd_reconstruct(c, ref_dir, sample_dir, g.plot, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NoRootError& e) {
    err << "calibration error: " << e.what() << "\n";
    return kCalibrationError;
  } catch (const DataMismatchError& e) {
    err << "data mismatch: " << e.what() << "\n";
    return kDataMismatch;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kUsage;
}

}  // namespace entspec::cli
