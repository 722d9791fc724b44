#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "entspec/acquisition.hpp"
#include "entspec/analysis.hpp"

namespace entspec {

/// Full snapshot of one virtual experiment.
struct ExperimentConfig {
  Apparatus apparatus;
  WindowConfig windows;
  double min_counts = kDefaultMinCounts;
  double calibration_signal_nm = 883.0;  ///< target signal center for `calibrate`
  std::uint64_t seed = 20021017;
  std::string output_dir = "out";

  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Golden cut angle phase-matching 883 nm signal with a 429.7 nm pump in the
/// default BBO preset (signal o, idler e, pump e).
inline constexpr double kDefaultCutAngleDeg = 39.951969413965;

/// Pairs/s at 1.5 mW giving roughly 4000 net in-window coincidences per 120 s
/// at the peak scan setting without a sample.
inline constexpr double kDefaultPairRate = 365.0;

/// Default configuration: calibrated 1-mm BBO, Nd-glass sample, 810-960 nm scan.
ExperimentConfig default_config();

/// Parses a JSON document; missing keys take defaults, unknown keys are
/// rejected. Every module invariant is checked. Throws ConfigError.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

/// Applies "dotted.path=value" overrides to a JSON document and parses it.
/// Values are read as JSON when they parse, otherwise as strings.
ExperimentConfig config_with_overrides(const std::string& text,
                                       const std::vector<std::string>& overrides);

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

}  // namespace entspec
