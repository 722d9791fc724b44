#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "entspec/acquisition.hpp"

namespace entspec {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Delay windows (ns) for peak integration and background estimation.
struct WindowConfig {
  Interval signal{14.0, 22.0};
  Interval background{5.0, 45.0};
  Interval exclusion{14.0, 22.0};

  void validate(std::string_view field = "windows") const;

  friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

enum class SpectrumAxis { signal_arm, idler_arm };

std::string_view to_string(SpectrumAxis axis);

namespace flags {
inline constexpr std::uint32_t kLowStatistics = 1u << 0;
inline constexpr std::uint32_t kUndefined = 1u << 1;  // value is not finite
}  // namespace flags

struct SpectrumPoint {
  double wavelength_nm = 0.0;
  double value = 0.0;
  double sigma = 0.0;
  std::uint32_t flags = 0;

  friend bool operator==(const SpectrumPoint&, const SpectrumPoint&) = default;
};

struct Spectrum {
  std::vector<SpectrumPoint> points;
  SpectrumAxis axis = SpectrumAxis::signal_arm;

  std::size_t size() const { return points.size(); }
};

/// Mean counts per channel over channels lying wholly in the background band and
/// wholly outside the exclusion; sigma is the standard error of that mean.
Estimate background_per_channel(const CoincidenceHistogram& hist, const WindowConfig& windows);

/// Counts in channels wholly inside the signal window minus the background
/// scaled to the same number of channels.
Estimate net_coincidences(const CoincidenceHistogram& hist, const WindowConfig& windows);

/// One point per scan setting: (center wavelength, net counts, error), sorted by
/// wavelength.
Spectrum coincidence_spectrum(const RunRecord& record, const WindowConfig& windows);

/// Maps every wavelength through the energy-conservation partner and flips the
/// axis label. Applying it twice restores the input.
Spectrum to_idler_axis(const Spectrum& spectrum, double lambda_p_nm);

/// Decadic absorbance log10(R_ref / R_sample) per point on the idler axis.
/// Points where either net count is below `min_counts` are kept and flagged.
Spectrum reconstruct_absorbance(const Spectrum& reference, const Spectrum& with_sample,
                                double min_counts, double lambda_p_nm);

inline constexpr double kDefaultMinCounts = 25.0;

struct PeakShape {
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
};

/// Peak position (3-point parabolic refinement) and full width at half maximum
/// (linear interpolation of the half-maximum crossings).
PeakShape fwhm_and_center(const Spectrum& spectrum);

}  // namespace entspec
