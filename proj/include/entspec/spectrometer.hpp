#pragma once

#include <string_view>
#include <vector>

namespace entspec {

enum class PassbandShape { tophat, gaussian };

std::string_view to_string(PassbandShape s);
PassbandShape passband_from_string(std::string_view s);

/// One grating position, addressed directly by the wavelength it sends into
/// the output fiber.
struct ScanSetting {
  double center_wavelength_nm = 0.0;
  double passband_width_nm = 1.0;
  PassbandShape shape = PassbandShape::tophat;

  friend bool operator==(const ScanSetting&, const ScanSetting&) = default;
};

/// Scan grid: start, start + step, ... up to and including stop.
struct ScanRange {
  double start_nm = 810.0;
  double stop_nm = 960.0;
  double step_nm = 2.0;

  friend bool operator==(const ScanRange&, const ScanRange&) = default;
};

struct SpectrometerConfig {
  double groove_gap_mm = 1.0 / 1400.0;
  double fiber_diameter_um = 125.0;
  double lens_focal_mm = 11.0;
  PassbandShape passband_shape = PassbandShape::tophat;
  /// Explicit scan centers; when empty, `scan_range` generates them.
  std::vector<double> scan;
  ScanRange scan_range;

  void validate(std::string_view field = "spectrometer") const;

  friend bool operator==(const SpectrometerConfig&, const SpectrometerConfig&) = default;
};

/// Fiber-limited bandpass d_g * phi_f / (2 F), in nm.
double resolution(const SpectrometerConfig& config);

/// Peak-normalized passband transmission at lambda.
double transmission(const ScanSetting& setting, double lambda_nm);

/// Settings from range.start in `step` increments up to range.stop, each with
/// the configured resolution as passband width.
std::vector<ScanSetting> default_scan(const SpectrometerConfig& config, double start_nm,
                                      double stop_nm, double step_nm);

/// The explicit scan list if present, otherwise the generated range.
std::vector<ScanSetting> scan_settings(const SpectrometerConfig& config);

}  // namespace entspec
