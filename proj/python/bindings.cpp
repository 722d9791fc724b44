#include <optional>
#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "entspec/cli.hpp"
#include "entspec/config.hpp"
#include "entspec/errors.hpp"
#include "entspec/io.hpp"

namespace py = pybind11;
using namespace entspec;

namespace {

using Array = py::array_t<double>;

ExperimentConfig resolve(const std::optional<std::string>& config_json) {
  return config_json ? config_from_json(*config_json) : default_config();
}

py::dict spectrum_dict(const Spectrum& s) {
  Array wl(s.size()), value(s.size()), sigma(s.size());
  py::array_t<std::uint32_t> fl(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    wl.mutable_at(i) = s.points[i].wavelength_nm;
    value.mutable_at(i) = s.points[i].value;
    sigma.mutable_at(i) = s.points[i].sigma;
    fl.mutable_at(i) = s.points[i].flags;
  }
  py::dict d;
  d["wavelength_nm"] = wl;
  d["value"] = value;
  d["sigma"] = sigma;
  d["flags"] = fl;
  d["axis"] = std::string(to_string(s.axis));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entangled-photon absorption spectroscopy simulator";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NoRootError>(m, "NoRootError", base.ptr());
  py::register_exception<DataMismatchError>(m, "DataMismatchError", base.ptr());
  py::register_exception<AnalysisError>(m, "AnalysisError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<ScanSetting>(m, "ScanSetting")
      .def_readonly("center_wavelength_nm", &ScanSetting::center_wavelength_nm)
      .def_readonly("passband_width_nm", &ScanSetting::passband_width_nm)
      .def_property_readonly("shape", [](const ScanSetting& s) { return std::string(to_string(s.shape)); });

  py::class_<CoincidenceHistogram>(m, "Histogram")
      .def_property_readonly("edges_ns", [](const CoincidenceHistogram& h) { return Array(py::cast(h.edges_ns)); })
      .def_property_readonly("counts",
                             [](const CoincidenceHistogram& h) { return py::array_t<std::uint64_t>(py::cast(h.counts)); })
      .def_readonly("acquisition_s", &CoincidenceHistogram::acquisition_s)
      .def_readonly("setting", &CoincidenceHistogram::setting)
      .def_readonly("sample_present", &CoincidenceHistogram::sample_present)
      .def_readonly("seed", &CoincidenceHistogram::seed)
      .def("net_coincidences", [](const CoincidenceHistogram& h, const std::optional<std::string>& config_json) {
        const auto e = net_coincidences(h, resolve(config_json).windows);
        return py::make_tuple(e.value, e.sigma);
      }, py::arg("config_json") = py::none());

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("histograms", &RunRecord::histograms)
      .def_readonly("master_seed", &RunRecord::master_seed)
      .def_readonly("config_json", &RunRecord::config_snapshot)
      .def("__len__", [](const RunRecord& r) { return r.histograms.size(); })
      .def("__eq__", [](const RunRecord& a, const RunRecord& b) { return a == b; });

  m.def("default_config_json", [] { return config_to_json(default_config()); },
        "Default configuration as a JSON document.");
  m.def("normalize_config", [](const std::string& text, const std::vector<std::string>& overrides) {
    return config_to_json(config_with_overrides(text, overrides));
  }, py::arg("config_json") = "", py::arg("overrides") = std::vector<std::string>{},
        "Validate a JSON config, apply dotted.key=value overrides and return the full document.");

  m.def("resolution", [](const std::optional<std::string>& cfg) {
    return resolution(resolve(cfg).apparatus.spectrometer);
  }, py::arg("config_json") = py::none(), "Spectrometer resolution in nm.");

  m.def("conjugate_wavelength", &conjugate_wavelength, py::arg("lambda_nm"), py::arg("lambda_p_nm"));

  m.def("calibrate", [](const std::optional<std::string>& cfg, std::optional<double> signal_nm) {
    const auto c = resolve(cfg);
    const auto r = calibrate_cut_angle(c.apparatus.source.crystal, signal_nm.value_or(c.calibration_signal_nm),
                                       c.apparatus.source.pump.center_wavelength_nm);
    return py::make_tuple(r.cut_angle_deg, r.residual);
  }, py::arg("config_json") = py::none(), py::arg("signal_nm") = py::none(),
        "Cut angle (deg) phase matching the target signal, and the residual delta-k (rad/m).");

  m.def("signal_marginal", [](const std::optional<std::string>& cfg) {
    const auto c = resolve(cfg);
    const auto mg = signal_marginal(c.apparatus.source, c.apparatus.marginal_grid);
    return py::make_tuple(Array(py::cast(std::vector<double>(mg.wavelengths().begin(), mg.wavelengths().end()))),
                          Array(py::cast(std::vector<double>(mg.density().begin(), mg.density().end()))));
  }, py::arg("config_json") = py::none(), "(wavelength_nm, density) of the normalized signal marginal.");

  m.def("absorbance", [](const std::vector<double>& wl, const std::optional<std::string>& cfg) {
    const auto c = resolve(cfg);
    std::vector<double> a;
    for (double l : wl) a.push_back(absorbance(c.apparatus.sample, l));
    return Array(py::cast(a));
  }, py::arg("wavelength_nm"), py::arg("config_json") = py::none(), "Configured sample absorbance model.");

  m.def("expected_rates", [](double center_nm, bool sample_present, const std::optional<std::string>& cfg) {
    const auto c = resolve(cfg);
    const Experiment e(c.apparatus);
    const ScanSetting s{center_nm, resolution(c.apparatus.spectrometer), c.apparatus.spectrometer.passband_shape};
    const auto r = expected_rates(s, sample_present, e);
    py::dict d;
    d["true_coincidence"] = r.true_coincidence;
    d["singles_signal"] = r.singles_signal;
    d["singles_idler"] = r.singles_idler;
    d["accidental"] = r.accidental;
    return d;
  }, py::arg("center_nm"), py::arg("sample_present") = false, py::arg("config_json") = py::none(),
        "Noise-free rates (counts/s) at one scan setting.");

  m.def("simulate", [](bool sample_present, const std::optional<std::string>& cfg,
                       std::optional<std::uint64_t> seed, unsigned threads) {
    auto c = resolve(cfg);
    if (seed) c.seed = *seed;
    RunRecord rec;
    {
      py::gil_scoped_release release;
      const Experiment e(c.apparatus);
      rec = run_scan(scan_settings(c.apparatus.spectrometer), sample_present, e, c.seed, threads);
    }
    rec.config_snapshot = config_to_json(c);
    return rec;
  }, py::arg("sample_present") = false, py::arg("config_json") = py::none(), py::arg("seed") = py::none(),
        py::arg("threads") = 0u, "Run the full Monte Carlo scan.");

  m.def("write_bundle", &write_run_record, py::arg("directory"), py::arg("record"));
  m.def("read_bundle", &read_run_record, py::arg("directory"));

  m.def("coincidence_spectrum", [](const RunRecord& r, const std::optional<std::string>& cfg) {
    return spectrum_dict(coincidence_spectrum(r, resolve(cfg).windows));
  }, py::arg("record"), py::arg("config_json") = py::none(), "Net coincidences per setting (signal axis).");

  m.def("reconstruct", [](const RunRecord& ref, const RunRecord& smp, const std::optional<std::string>& cfg) {
    const auto c = resolve(cfg);
    const auto a = reconstruct_absorbance(coincidence_spectrum(ref, c.windows), coincidence_spectrum(smp, c.windows),
                                          c.min_counts, c.apparatus.source.pump.center_wavelength_nm);
    return spectrum_dict(a);
  }, py::arg("reference"), py::arg("sample"), py::arg("config_json") = py::none(),
        "Absorbance on the idler axis with propagated sigma and flags.");

  m.attr("FLAG_LOW_STATISTICS") = flags::kLowStatistics;
  m.attr("FLAG_UNDEFINED") = flags::kUndefined;

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run the command-line driver in-process; returns (exit_code, stdout, stderr).");
}
