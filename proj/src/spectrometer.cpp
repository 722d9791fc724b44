#include "entspec/spectrometer.hpp"

#include <cmath>
#include <string>

#include "entspec/errors.hpp"
#include "entspec/units.hpp"

namespace entspec {

std::string_view to_string(PassbandShape s) {
  return s == PassbandShape::tophat ? "tophat" : "gaussian";
}

PassbandShape passband_from_string(std::string_view s) {
  if (s == "tophat") return PassbandShape::tophat;
  if (s == "gaussian") return PassbandShape::gaussian;
  throw ConfigError("", "unknown passband shape '" + std::string(s) + "'");
}

void SpectrometerConfig::validate(std::string_view field) const {
  const std::string f(field);
  if (!(groove_gap_mm > 0.0)) throw ConfigError(f + ".groove_gap_mm", "must be > 0");
  if (!(fiber_diameter_um > 0.0)) throw ConfigError(f + ".fiber_diameter_um", "must be > 0");
  if (!(lens_focal_mm > 0.0)) throw ConfigError(f + ".lens_focal_mm", "must be > 0");
  if (scan.empty()) {
    if (!(scan_range.step_nm > 0.0)) throw ConfigError(f + ".scan_range.step_nm", "must be > 0");
    if (!(scan_range.start_nm > 0.0 && scan_range.stop_nm >= scan_range.start_nm)) {
      throw ConfigError(f + ".scan_range", "empty scan range");
    }
  } else {
    for (std::size_t i = 0; i < scan.size(); ++i) {
      if (!(scan[i] > 0.0)) throw ConfigError(f + ".scan", "scan wavelengths must be > 0");
      if (i > 0 && !(scan[i] > scan[i - 1])) {
        throw ConfigError(f + ".scan", "scan wavelengths must be strictly increasing");
      }
    }
  }
}

double resolution(const SpectrometerConfig& config) {
  config.validate();
  // mm * um / mm = um
  return config.groove_gap_mm * config.fiber_diameter_um / (2.0 * config.lens_focal_mm) * 1e3;
}

double transmission(const ScanSetting& setting, double lambda_nm) {
  const double dx = lambda_nm - setting.center_wavelength_nm;
  const double w = setting.passband_width_nm;
  if (setting.shape == PassbandShape::tophat) return std::abs(dx) <= 0.5 * w ? 1.0 : 0.0;
  return std::exp(-kFourLn2 * dx * dx / (w * w));
}

std::vector<ScanSetting> default_scan(const SpectrometerConfig& config, double start_nm,
                                      double stop_nm, double step_nm) {
  if (!(step_nm > 0.0)) throw DomainError("scan step must be > 0");
  if (!(stop_nm >= start_nm) || !(start_nm > 0.0)) throw DomainError("empty scan range");
  const double width = resolution(config);
  const auto n = static_cast<std::size_t>(std::floor((stop_nm - start_nm) / step_nm + 1e-9)) + 1;
  std::vector<ScanSetting> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({start_nm + static_cast<double>(i) * step_nm, width, config.passband_shape});
  }
  return out;
}

std::vector<ScanSetting> scan_settings(const SpectrometerConfig& config) {
  if (config.scan.empty()) {
    return default_scan(config, config.scan_range.start_nm, config.scan_range.stop_nm,
                        config.scan_range.step_nm);
  }
  config.validate();
  const double width = resolution(config);
  std::vector<ScanSetting> out;
  out.reserve(config.scan.size());
  for (double c : config.scan) out.push_back({c, width, config.passband_shape});
  return out;
}

}  // namespace entspec
