#include "entspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "entspec/errors.hpp"

namespace entspec {

void WindowConfig::validate(std::string_view field) const {
  const std::string f(field);
  auto ordered = [&](const Interval& i, const char* name) {
    if (!(i.hi > i.lo)) throw ConfigError(f + "." + name, "interval must have hi > lo");
  };
  ordered(signal, "signal");
  ordered(background, "background");
  ordered(exclusion, "exclusion");
  if (!background.contains(signal)) {
    throw ConfigError(f + ".signal", "signal window must lie inside the background band");
  }
  if (!exclusion.contains(signal)) {
    throw ConfigError(f + ".exclusion", "exclusion must cover the signal window");
  }
}

std::string_view to_string(SpectrumAxis axis) {
  return axis == SpectrumAxis::signal_arm ? "signal_arm" : "idler_arm";
}

namespace {

bool inside(double a, double b, const Interval& i) { return a >= i.lo && b <= i.hi; }
bool outside(double a, double b, const Interval& i) { return b <= i.lo || a >= i.hi; }

void check_histogram(const CoincidenceHistogram& hist) {
  if (hist.edges_ns.size() != hist.counts.size() + 1 || hist.counts.empty()) {
    throw DataMismatchError("histogram edges and counts disagree in length");
  }
}

}  // namespace

Estimate background_per_channel(const CoincidenceHistogram& hist, const WindowConfig& windows) {
  check_histogram(hist);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double a = hist.edges_ns[i];
    const double b = hist.edges_ns[i + 1];
    if (inside(a, b, windows.background) && outside(a, b, windows.exclusion)) {
      const auto c = static_cast<double>(hist.counts[i]);
      sum += c;
      sum_sq += c * c;
      ++n;
    }
  }
  if (n == 0) throw AnalysisError("background band contains no usable channel");
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  double se = 0.0;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
    se = std::sqrt(var / nn);
  }
  return {mean, se};
}

Estimate net_coincidences(const CoincidenceHistogram& hist, const WindowConfig& windows) {
  check_histogram(hist);
  double gross = 0.0;
  std::size_t n_window = 0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    if (inside(hist.edges_ns[i], hist.edges_ns[i + 1], windows.signal)) {
      gross += static_cast<double>(hist.counts[i]);
      ++n_window;
    }
  }
  if (n_window == 0) throw AnalysisError("signal window contains no whole channel");
  const Estimate bg = background_per_channel(hist, windows);
  const double nw = static_cast<double>(n_window);
  return {gross - nw * bg.value, std::sqrt(gross + nw * nw * bg.sigma * bg.sigma)};
}

Spectrum coincidence_spectrum(const RunRecord& record, const WindowConfig& windows) {
  if (record.histograms.empty()) throw AnalysisError("run record holds no histograms");
  Spectrum s;
  s.axis = SpectrumAxis::signal_arm;
  s.points.reserve(record.histograms.size());
  for (const auto& h : record.histograms) {
    const Estimate net = net_coincidences(h, windows);
    s.points.push_back({h.setting.center_wavelength_nm, net.value, net.sigma, 0});
  }
  std::sort(s.points.begin(), s.points.end(),
            [](const auto& a, const auto& b) { return a.wavelength_nm < b.wavelength_nm; });
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    if (s.points[i].wavelength_nm == s.points[i - 1].wavelength_nm) {
      throw DataMismatchError("run record contains duplicate scan settings");
    }
  }
  return s;
}

Spectrum to_idler_axis(const Spectrum& spectrum, double lambda_p_nm) {
  Spectrum out;
  out.axis = spectrum.axis == SpectrumAxis::signal_arm ? SpectrumAxis::idler_arm
                                                       : SpectrumAxis::signal_arm;
  out.points.reserve(spectrum.points.size());
  for (const auto& p : spectrum.points) {
    auto q = p;
    q.wavelength_nm = conjugate_wavelength(p.wavelength_nm, lambda_p_nm);
    out.points.push_back(q);
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const auto& a, const auto& b) { return a.wavelength_nm < b.wavelength_nm; });
  return out;
}

Spectrum reconstruct_absorbance(const Spectrum& reference, const Spectrum& with_sample,
                                double min_counts, double lambda_p_nm) {
  if (reference.axis != with_sample.axis || reference.size() != with_sample.size()) {
    throw DataMismatchError("reference and sample spectra are on different grids");
  }
  Spectrum a;
  a.axis = reference.axis;
  a.points.reserve(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& r = reference.points[i];
    const auto& s = with_sample.points[i];
    if (r.wavelength_nm != s.wavelength_nm) {
      throw DataMismatchError("reference and sample spectra are on different grids");
    }
    SpectrumPoint p{r.wavelength_nm, 0.0, 0.0, 0};
    if (r.value < min_counts || s.value < min_counts) p.flags |= flags::kLowStatistics;
    if (!(r.value > 0.0) && !(p.flags & flags::kLowStatistics)) {
      throw DomainError("nonpositive reference rate at " + std::to_string(r.wavelength_nm) + " nm");
    }
    if (r.value > 0.0 && s.value > 0.0) {
      p.value = r.value == s.value ? 0.0 : std::log10(r.value / s.value);
      const double rr = r.sigma / r.value;
      const double rs = s.sigma / s.value;
      p.sigma = std::sqrt(rr * rr + rs * rs) / std::numbers::ln10;
    } else {
      p.value = std::numeric_limits<double>::quiet_NaN();
      p.sigma = std::numeric_limits<double>::quiet_NaN();
      p.flags |= flags::kUndefined;
    }
    a.points.push_back(p);
  }
  return a.axis == SpectrumAxis::signal_arm ? to_idler_axis(a, lambda_p_nm) : a;
}

PeakShape fwhm_and_center(const Spectrum& spectrum) {
  const auto& pts = spectrum.points;
  if (pts.size() < 3) throw AnalysisError("need at least three points to locate a peak");
  std::size_t imax = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].value > pts[imax].value) imax = i;
  }
  const double peak = pts[imax].value;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i != imax && pts[i].value == peak) throw AnalysisError("spectrum maximum is not unique");
  }
  if (imax == 0 || imax + 1 == pts.size() || !(peak > 0.0)) {
    throw AnalysisError("spectrum has no interior peak");
  }

  // Vertex of the parabola through the three points around the maximum.
  const double x0 = pts[imax - 1].wavelength_nm, y0 = pts[imax - 1].value;
  const double x1 = pts[imax].wavelength_nm, y1 = pts[imax].value;
  const double x2 = pts[imax + 1].wavelength_nm, y2 = pts[imax + 1].value;
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  double center = x1;
  if (curvature < 0.0) center = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);

  const double half = 0.5 * peak;
  auto crossing = [&](std::size_t lo, std::size_t hi) {
    const double t = (half - pts[lo].value) / (pts[hi].value - pts[lo].value);
    return pts[lo].wavelength_nm + t * (pts[hi].wavelength_nm - pts[lo].wavelength_nm);
  };
  std::size_t j = imax;
  while (j > 0 && pts[j - 1].value >= half) --j;
  if (j == 0) throw AnalysisError("half maximum not crossed below the peak");
  const double left = crossing(j - 1, j);
  std::size_t k = imax;
  while (k + 1 < pts.size() && pts[k + 1].value >= half) ++k;
  if (k + 1 == pts.size()) throw AnalysisError("half maximum not crossed above the peak");
  const double right = crossing(k + 1, k);
  return {center, right - left};
}

}  // namespace entspec
