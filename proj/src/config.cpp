#include "entspec/config.hpp"

#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "entspec/errors.hpp"
#include "entspec/io.hpp"

namespace entspec {

using json = nlohmann::json;

namespace {

/// Reads fields out of one JSON object, rejecting keys it was not told about.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, std::initializer_list<std::string_view> keys)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    for (const auto& [k, v] : j_.items()) {
      bool known = false;
      for (auto key : keys) known = known || key == k;
      if (!known) throw ConfigError(child(k), "unknown key");
    }
  }

  std::string child(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const json& at(std::string_view key) const { return j_.at(std::string(key)); }

  void number(std::string_view key, double& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(child(key), "expected a number");
    out = v.get<double>();
  }

  void integer(std::string_view key, int& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key), "expected an integer");
    out = v.get<int>();
  }

  void u64(std::string_view key, std::uint64_t& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(child(key), "expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }

  void string(std::string_view key, std::string& out) const {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(child(key), "expected a string");
    out = v.get<std::string>();
  }

  template <class F>
  void object(std::string_view key, F&& f) const {
    if (has(key)) f(at(key), child(key));
  }

 private:
  const json& j_;
  std::string path_;
};

template <class Parse>
auto with_field(const std::string& field, Parse&& parse) {
  try {
    return parse();
  } catch (const ConfigError& e) {
    throw ConfigError(field, e.what());
  }
}

json sellmeier_to_json(const SellmeierSet& s) {
  return {{"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d}, {"min_um", s.min_um}, {"max_um", s.max_um}};
}

void sellmeier_from_json(const json& j, const std::string& path, SellmeierSet& s) {
  ObjectReader r(j, path, {"a", "b", "c", "d", "min_um", "max_um"});
  r.number("a", s.a);
  r.number("b", s.b);
  r.number("c", s.c);
  r.number("d", s.d);
  r.number("min_um", s.min_um);
  r.number("max_um", s.max_um);
}

json detector_to_json(const DetectorConfig& d) {
  return {{"quantum_efficiency", d.quantum_efficiency},
          {"dark_rate", d.dark_rate},
          {"timing_jitter_sigma_ns", d.timing_jitter_sigma_ns}};
}

void detector_from_json(const json& j, const std::string& path, DetectorConfig& d) {
  ObjectReader r(j, path, {"quantum_efficiency", "dark_rate", "timing_jitter_sigma_ns"});
  r.number("quantum_efficiency", d.quantum_efficiency);
  r.number("dark_rate", d.dark_rate);
  r.number("timing_jitter_sigma_ns", d.timing_jitter_sigma_ns);
}

json interval_to_json(const Interval& i) { return json::array({i.lo, i.hi}); }

void interval_from_json(const json& j, const std::string& path, Interval& i) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path, "expected [lo, hi]");
  }
  i = {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const ExperimentConfig& c) {
  const auto& a = c.apparatus;
  const auto& cr = a.source.crystal;
  json bands = json::array();
  for (const auto& b : a.sample.bands) {
    bands.push_back({{"center_nm", b.center_nm},
                     {"fwhm_nm", b.fwhm_nm},
                     {"peak_absorbance", b.peak_absorbance},
                     {"label", b.label}});
  }
  const auto& sp = a.spectrometer;
  return {
      {"pump",
       {{"center_wavelength_nm", a.source.pump.center_wavelength_nm},
        {"linewidth_fwhm_hz", a.source.pump.linewidth_fwhm_hz},
        {"power_mw", a.source.pump.power_mw}}},
      {"crystal",
       {{"thickness_mm", cr.thickness_mm},
        {"cut_angle_deg", cr.cut_angle_deg},
        {"sellmeier_ordinary", sellmeier_to_json(cr.ordinary)},
        {"sellmeier_extraordinary", sellmeier_to_json(cr.extraordinary)},
        {"polarization",
         {{"pump", to_string(cr.pump)},
          {"signal", to_string(cr.signal)},
          {"idler", to_string(cr.idler)}}}}},
      {"source", {{"pair_generation_rate", a.source.pair_generation_rate}}},
      {"sample",
       {{"bands", bands},
        {"baseline", a.sample.baseline},
        {"thickness_scale", a.sample.thickness_scale}}},
      {"spectrometer",
       {{"groove_gap_mm", sp.groove_gap_mm},
        {"fiber_diameter_um", sp.fiber_diameter_um},
        {"lens_focal_mm", sp.lens_focal_mm},
        {"passband_shape", to_string(sp.passband_shape)},
        {"scan", sp.scan},
        {"scan_range",
         {{"start_nm", sp.scan_range.start_nm},
          {"stop_nm", sp.scan_range.stop_nm},
          {"step_nm", sp.scan_range.step_nm}}}}},
      {"detectors",
       {{"signal", detector_to_json(a.signal_detector)},
        {"idler", detector_to_json(a.idler_detector)}}},
      {"timing",
       {{"electronic_delay_ns", a.timing.electronic_delay_ns},
        {"span_start_ns", a.timing.span_start_ns},
        {"span_stop_ns", a.timing.span_stop_ns},
        {"channel_count", a.timing.channel_count},
        {"acquisition_s", a.timing.acquisition_s}}},
      {"marginal_grid",
       {{"start_nm", a.marginal_grid.start_nm},
        {"stop_nm", a.marginal_grid.stop_nm},
        {"step_nm", a.marginal_grid.step_nm}}},
      {"windows",
       {{"signal", interval_to_json(c.windows.signal)},
        {"background", interval_to_json(c.windows.background)},
        {"exclusion", interval_to_json(c.windows.exclusion)}}},
      {"analysis", {{"min_counts", c.min_counts}}},
      {"calibration", {{"signal_target_nm", c.calibration_signal_nm}}},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
  };
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c = default_config();
  auto& a = c.apparatus;
  ObjectReader root(j, "", {"pump", "crystal", "source", "sample", "spectrometer", "detectors",
                            "timing", "marginal_grid", "windows", "analysis", "calibration",
                            "seed", "output_dir"});
  root.object("pump", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"center_wavelength_nm", "linewidth_fwhm_hz", "power_mw"});
    r.number("center_wavelength_nm", a.source.pump.center_wavelength_nm);
    r.number("linewidth_fwhm_hz", a.source.pump.linewidth_fwhm_hz);
    r.number("power_mw", a.source.pump.power_mw);
  });
  root.object("crystal", [&](const json& o, const std::string& p) {
    auto& cr = a.source.crystal;
    ObjectReader r(o, p, {"thickness_mm", "cut_angle_deg", "sellmeier_ordinary",
                          "sellmeier_extraordinary", "polarization"});
    r.number("thickness_mm", cr.thickness_mm);
    r.number("cut_angle_deg", cr.cut_angle_deg);
    r.object("sellmeier_ordinary",
             [&](const json& s, const std::string& sp) { sellmeier_from_json(s, sp, cr.ordinary); });
    r.object("sellmeier_extraordinary", [&](const json& s, const std::string& sp) {
      sellmeier_from_json(s, sp, cr.extraordinary);
    });
    r.object("polarization", [&](const json& s, const std::string& sp) {
      ObjectReader pr(s, sp, {"pump", "signal", "idler"});
      auto read = [&](std::string_view key, Polarization& out) {
        std::string text;
        pr.string(key, text);
        if (!text.empty()) {
          out = with_field(pr.child(key), [&] { return polarization_from_string(text); });
        }
      };
      read("pump", cr.pump);
      read("signal", cr.signal);
      read("idler", cr.idler);
    });
  });
  root.object("source", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"pair_generation_rate"});
    r.number("pair_generation_rate", a.source.pair_generation_rate);
  });
  root.object("sample", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"bands", "baseline", "thickness_scale"});
    r.number("baseline", a.sample.baseline);
    r.number("thickness_scale", a.sample.thickness_scale);
    if (r.has("bands")) {
      const auto& arr = r.at("bands");
      if (!arr.is_array()) throw ConfigError(r.child("bands"), "expected an array");
      a.sample.bands.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        AbsorptionBand b;
        ObjectReader br(arr[i], r.child("bands") + "[" + std::to_string(i) + "]",
                        {"center_nm", "fwhm_nm", "peak_absorbance", "label"});
        br.number("center_nm", b.center_nm);
        br.number("fwhm_nm", b.fwhm_nm);
        br.number("peak_absorbance", b.peak_absorbance);
        br.string("label", b.label);
        a.sample.bands.push_back(std::move(b));
      }
    }
  });
  root.object("spectrometer", [&](const json& o, const std::string& p) {
    auto& sp = a.spectrometer;
    ObjectReader r(o, p, {"groove_gap_mm", "fiber_diameter_um", "lens_focal_mm",
                          "passband_shape", "scan", "scan_range"});
    r.number("groove_gap_mm", sp.groove_gap_mm);
    r.number("fiber_diameter_um", sp.fiber_diameter_um);
    r.number("lens_focal_mm", sp.lens_focal_mm);
    std::string shape;
    r.string("passband_shape", shape);
    if (!shape.empty()) {
      sp.passband_shape = with_field(r.child("passband_shape"), [&] { return passband_from_string(shape); });
    }
    if (r.has("scan")) {
      const auto& arr = r.at("scan");
      if (!arr.is_array()) throw ConfigError(r.child("scan"), "expected an array of wavelengths");
      sp.scan.clear();
      for (const auto& v : arr) {
        if (!v.is_number()) throw ConfigError(r.child("scan"), "expected numbers");
        sp.scan.push_back(v.get<double>());
      }
    }
    r.object("scan_range", [&](const json& s, const std::string& rp) {
      ObjectReader rr(s, rp, {"start_nm", "stop_nm", "step_nm"});
      rr.number("start_nm", sp.scan_range.start_nm);
      rr.number("stop_nm", sp.scan_range.stop_nm);
      rr.number("step_nm", sp.scan_range.step_nm);
    });
  });
  root.object("detectors", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"signal", "idler"});
    r.object("signal", [&](const json& d, const std::string& dp) {
      detector_from_json(d, dp, a.signal_detector);
    });
    r.object("idler", [&](const json& d, const std::string& dp) {
      detector_from_json(d, dp, a.idler_detector);
    });
  });
  root.object("timing", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"electronic_delay_ns", "span_start_ns", "span_stop_ns", "channel_count",
                          "acquisition_s"});
    r.number("electronic_delay_ns", a.timing.electronic_delay_ns);
    r.number("span_start_ns", a.timing.span_start_ns);
    r.number("span_stop_ns", a.timing.span_stop_ns);
    r.integer("channel_count", a.timing.channel_count);
    r.number("acquisition_s", a.timing.acquisition_s);
  });
  root.object("marginal_grid", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"start_nm", "stop_nm", "step_nm"});
    r.number("start_nm", a.marginal_grid.start_nm);
    r.number("stop_nm", a.marginal_grid.stop_nm);
    r.number("step_nm", a.marginal_grid.step_nm);
  });
  root.object("windows", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"signal", "background", "exclusion"});
    r.object("signal", [&](const json& v, const std::string& vp) { interval_from_json(v, vp, c.windows.signal); });
    r.object("background", [&](const json& v, const std::string& vp) { interval_from_json(v, vp, c.windows.background); });
    r.object("exclusion", [&](const json& v, const std::string& vp) { interval_from_json(v, vp, c.windows.exclusion); });
  });
  root.object("analysis", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"min_counts"});
    r.number("min_counts", c.min_counts);
  });
  root.object("calibration", [&](const json& o, const std::string& p) {
    ObjectReader r(o, p, {"signal_target_nm"});
    r.number("signal_target_nm", c.calibration_signal_nm);
  });
  root.u64("seed", c.seed);
  root.string("output_dir", c.output_dir);
  c.validate();
  return c;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("", "override '" + assignment + "' is not of the form dotted.key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& key = parts[i];
    if (key.empty()) throw ConfigError(path, "empty path component");
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (const std::exception&) {
        throw ConfigError(path, "expected an array index at '" + key + "'");
      }
      if (idx >= node->size()) throw ConfigError(path, "array index out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError(path, "cannot descend into a scalar");
      node = &(*node)[key];
    }
    if (last) *node = value;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  apparatus.validate();
  windows.validate("windows");
  if (!(min_counts >= 0.0)) throw ConfigError("analysis.min_counts", "must be >= 0");
  if (!(calibration_signal_nm > 0.0)) {
    throw ConfigError("calibration.signal_target_nm", "must be > 0");
  }
  if (windows.background.lo < apparatus.timing.span_start_ns ||
      windows.background.hi > apparatus.timing.span_stop_ns) {
    throw ConfigError("windows.background", "must lie inside the histogram span");
  }
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  auto& a = c.apparatus;
  a.source.crystal = bbo_type2_preset();
  a.source.crystal.cut_angle_deg = kDefaultCutAngleDeg;
  a.source.pair_generation_rate = kDefaultPairRate;
  a.sample = nd_glass_preset();
  return c;
}

ExperimentConfig config_from_json(const std::string& text) { return from_json(parse_json(text)); }

std::string config_to_json(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

ExperimentConfig config_with_overrides(const std::string& text,
                                       const std::vector<std::string>& overrides) {
  json doc = text.empty() ? json::object() : parse_json(text);
  for (const auto& o : overrides) apply_override(doc, o);
  return from_json(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw ConfigError("", e.what());
  }
  return config_with_overrides(text, overrides);
}

}  // namespace entspec
