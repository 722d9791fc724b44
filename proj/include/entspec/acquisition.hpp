#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "entspec/biphoton.hpp"
#include "entspec/sample.hpp"
#include "entspec/spectrometer.hpp"

namespace entspec {

struct DetectorConfig {
  double quantum_efficiency = 0.6;
  double dark_rate = 100.0;             ///< counts/s
  double timing_jitter_sigma_ns = 0.35;

  void validate(std::string_view field) const;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// Delay unit + TAC/MCA settings.
struct TimingConfig {
  double electronic_delay_ns = 18.0;
  double span_start_ns = 0.0;
  double span_stop_ns = 50.0;
  int channel_count = 2048;
  double acquisition_s = 120.0;  ///< per scan setting

  double span_ns() const { return span_stop_ns - span_start_ns; }
  double channel_width_ns() const { return span_ns() / channel_count; }
  std::vector<double> channel_edges() const;

  void validate(std::string_view field = "timing") const;

  friend bool operator==(const TimingConfig&, const TimingConfig&) = default;
};

/// Everything the virtual experiment needs apart from the scan and seed.
struct Apparatus {
  BiphotonSource source;
  AbsorbanceModel sample;
  SpectrometerConfig spectrometer;
  DetectorConfig signal_detector;
  DetectorConfig idler_detector;
  TimingConfig timing;
  WavelengthGrid marginal_grid;

  void validate() const;

  friend bool operator==(const Apparatus&, const Apparatus&) = default;
};

/// Validated apparatus plus its precomputed signal marginal.
class Experiment {
 public:
  explicit Experiment(Apparatus apparatus);

  const Apparatus& apparatus() const { return apparatus_; }
  const MarginalDensity& marginal() const { return marginal_; }

 private:
  Apparatus apparatus_;
  MarginalDensity marginal_;
};

struct ExpectedRates {
  double true_coincidence = 0.0;  ///< counts/s, all in the delay peak
  double singles_signal = 0.0;    ///< counts/s including dark counts
  double singles_idler = 0.0;
  double accidental = 0.0;        ///< counts/s spread uniformly over the TAC span
};

/// Noise-free rate model; integrates the piecewise-linear marginal against the
/// passband and sample transmission with per-bin Gauss-Legendre quadrature.
ExpectedRates expected_rates(const ScanSetting& setting, bool sample_present,
                             const Experiment& experiment);

struct CoincidenceHistogram {
  std::vector<double> edges_ns;         ///< channel_count + 1 edges
  std::vector<std::uint64_t> counts;    ///< one per channel
  double acquisition_s = 0.0;
  ScanSetting setting;
  bool sample_present = false;
  std::uint64_t seed = 0;

  std::size_t channel_count() const { return counts.size(); }

  friend bool operator==(const CoincidenceHistogram&, const CoincidenceHistogram&) = default;
};

struct RunRecord {
  std::vector<CoincidenceHistogram> histograms;
  std::uint64_t master_seed = 0;
  std::string config_snapshot;  ///< serialized configuration used for the run

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// One Monte Carlo acquisition: Poisson pair emission, per-photon spectrometer
/// passband / sample / detector thinning, Gaussian timing jitter around the
/// electronic delay and a uniform accidental floor. Deterministic in `seed`.
CoincidenceHistogram run_acquisition(const ScanSetting& setting, bool sample_present,
                                     const Experiment& experiment, std::uint64_t seed);

/// Stream seed for a setting. Keyed on the setting's wavelength and the sample
/// flag, so results do not depend on scan order or scheduling.
std::uint64_t setting_seed(std::uint64_t master_seed, const ScanSetting& setting,
                           bool sample_present);

/// Runs every setting; `threads` = 0 picks the hardware concurrency.
RunRecord run_scan(const std::vector<ScanSetting>& scan, bool sample_present,
                   const Experiment& experiment, std::uint64_t master_seed,
                   unsigned threads = 0);

}  // namespace entspec
