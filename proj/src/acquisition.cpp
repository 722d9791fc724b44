#include "entspec/acquisition.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "entspec/errors.hpp"

namespace entspec {

void DetectorConfig::validate(std::string_view field) const {
  const std::string f(field);
  if (!(quantum_efficiency >= 0.0 && quantum_efficiency <= 1.0)) {
    throw ConfigError(f + ".quantum_efficiency", "must lie in [0, 1]");
  }
  if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate)) {
    throw ConfigError(f + ".dark_rate", "must be >= 0");
  }
  if (!(timing_jitter_sigma_ns >= 0.0) || !std::isfinite(timing_jitter_sigma_ns)) {
    throw ConfigError(f + ".timing_jitter_sigma_ns", "must be >= 0");
  }
}

std::vector<double> TimingConfig::channel_edges() const {
  std::vector<double> edges(static_cast<std::size_t>(channel_count) + 1);
  const double w = channel_width_ns();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = span_start_ns + static_cast<double>(i) * w;
  }
  edges.back() = span_stop_ns;
  return edges;
}

void TimingConfig::validate(std::string_view field) const {
  const std::string f(field);
  if (channel_count < 2) throw ConfigError(f + ".channel_count", "must be >= 2");
  if (!(span_stop_ns > span_start_ns)) throw ConfigError(f + ".span_stop_ns", "span must be positive");
  if (!(electronic_delay_ns >= span_start_ns && electronic_delay_ns < span_stop_ns)) {
    throw ConfigError(f + ".electronic_delay_ns", "must lie inside the histogram span");
  }
  if (!(acquisition_s > 0.0) || !std::isfinite(acquisition_s)) {
    throw ConfigError(f + ".acquisition_s", "must be > 0");
  }
}

void Apparatus::validate() const {
  source.validate("source");
  sample.validate("sample");
  spectrometer.validate("spectrometer");
  signal_detector.validate("detectors.signal");
  idler_detector.validate("detectors.idler");
  timing.validate("timing");
  marginal_grid.validate("marginal_grid");
}

namespace {
MarginalDensity validated_marginal(const Apparatus& a) {
  a.validate();
  return signal_marginal(a.source, a.marginal_grid);
}

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {-0.8611363115940526, -0.3399810435848563,
                                            0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGlWeights = {0.3478548451374538, 0.6521451548625461,
                                              0.6521451548625461, 0.3478548451374538};

/// Integral of marginal(x) * f(x) over [lo, hi] clipped to the grid, bin by bin.
template <class F>
double integrate_marginal(const MarginalDensity& m, double lo, double hi, const F& f) {
  const auto x = m.wavelengths();
  const auto p = m.density();
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    const double a = std::max(lo, x[j]);
    const double b = std::min(hi, x[j + 1]);
    if (!(b > a)) continue;
    if (p[j] == 0.0 && p[j + 1] == 0.0) continue;
    const double h = x[j + 1] - x[j];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      const double xi = mid + half * kGlNodes[k];
      const double pi = p[j] + (p[j + 1] - p[j]) * (xi - x[j]) / h;
      s += kGlWeights[k] * pi * f(xi);
    }
    total += half * s;
  }
  return total;
}

struct PassbandSupport {
  double lo;
  double hi;
};

PassbandSupport support(const ScanSetting& s, const MarginalDensity& m) {
  if (s.shape == PassbandShape::tophat) {
    return {s.center_wavelength_nm - 0.5 * s.passband_width_nm,
            s.center_wavelength_nm + 0.5 * s.passband_width_nm};
  }
  return {m.wavelengths().front(), m.wavelengths().back()};
}

/// CDF of the piecewise-linear marginal at an arbitrary wavelength.
double marginal_cdf(const MarginalDensity& m, double lambda_nm) {
  const auto x = m.wavelengths();
  const auto p = m.density();
  const auto c = m.cdf();
  if (lambda_nm <= x.front()) return 0.0;
  if (lambda_nm >= x.back()) return 1.0;
  const auto j = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), lambda_nm) -
                                          x.begin()) - 1;
  const double h = x[j + 1] - x[j];
  const double t = lambda_nm - x[j];
  return c[j] + p[j] * t + 0.5 * (p[j + 1] - p[j]) / h * t * t;
}

}  // namespace

Experiment::Experiment(Apparatus apparatus)
    : apparatus_(std::move(apparatus)), marginal_(validated_marginal(apparatus_)) {}

ExpectedRates expected_rates(const ScanSetting& setting, bool sample_present,
                             const Experiment& experiment) {
  if (!(setting.passband_width_nm > 0.0)) throw DomainError("passband width must be > 0");
  const Apparatus& a = experiment.apparatus();
  const MarginalDensity& m = experiment.marginal();
  const double lambda_p = a.source.pump.center_wavelength_nm;
  const double rate = a.source.pair_rate();
  const double eta_s = a.signal_detector.quantum_efficiency;
  const double eta_i = a.idler_detector.quantum_efficiency;

  auto sample_t = [&](double ls) {
    return sample_present ? transmittance(a.sample, conjugate_wavelength(ls, lambda_p)) : 1.0;
  };
  const auto [lo, hi] = support(setting, m);
  const double lo_grid = m.wavelengths().front();
  const double hi_grid = m.wavelengths().back();

  const double passed = integrate_marginal(m, lo, hi, [&](double ls) {
    return transmission(setting, ls);
  });
  const double joint = integrate_marginal(m, lo, hi, [&](double ls) {
    return transmission(setting, ls) * sample_t(ls);
  });
  const double idler_passed = sample_present
                                  ? integrate_marginal(m, lo_grid, hi_grid, sample_t)
                                  : 1.0;

  ExpectedRates r;
  r.true_coincidence = rate * eta_s * eta_i * joint;
  r.singles_signal = rate * eta_s * passed + a.signal_detector.dark_rate;
  r.singles_idler = rate * eta_i * idler_passed + a.idler_detector.dark_rate;
  r.accidental = r.singles_signal * r.singles_idler * a.timing.span_ns() * 1e-9;
  return r;
}

CoincidenceHistogram run_acquisition(const ScanSetting& setting, bool sample_present,
                                     const Experiment& experiment, std::uint64_t seed) {
  const Apparatus& a = experiment.apparatus();
  const MarginalDensity& m = experiment.marginal();
  const TimingConfig& timing = a.timing;
  const double t_acq = timing.acquisition_s;
  const double lambda_p = a.source.pump.center_wavelength_nm;
  const double eta_s = a.signal_detector.quantum_efficiency;
  const double eta_i = a.idler_detector.quantum_efficiency;
  const double jitter = std::hypot(a.signal_detector.timing_jitter_sigma_ns,
                                   a.idler_detector.timing_jitter_sigma_ns);
  const double width = timing.channel_width_ns();

  CoincidenceHistogram hist;
  hist.edges_ns = timing.channel_edges();
  hist.counts.assign(static_cast<std::size_t>(timing.channel_count), 0);
  hist.acquisition_s = t_acq;
  hist.setting = setting;
  hist.sample_present = sample_present;
  hist.seed = seed;

  auto deposit = [&](double delay) {
    if (!(delay >= timing.span_start_ns && delay < timing.span_stop_ns)) return;
    auto ch = static_cast<std::size_t>((delay - timing.span_start_ns) / width);
    ch = std::min(ch, hist.counts.size() - 1);
    ++hist.counts[ch];
  };

  Rng rng(seed);

  // Only pairs whose signal falls inside the passband support can register, so
  // emission is thinned to that slice of the marginal exactly.
  const auto [lo, hi] = support(setting, m);
  const double c_lo = marginal_cdf(m, lo);
  const double c_hi = marginal_cdf(m, hi);
  const double mass = std::max(c_hi - c_lo, 0.0);
  const double mean_pairs = a.source.pair_rate() * t_acq * mass;
  if (mean_pairs > 0.0) {
    std::poisson_distribution<std::uint64_t> n_pairs(mean_pairs);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::uint64_t n = n_pairs(rng);
    for (std::uint64_t k = 0; k < n; ++k) {
      const double ls = m.quantile(c_lo + mass * uniform01(rng));
      if (uniform01(rng) >= transmission(setting, ls) * eta_s) continue;
      double p_idler = eta_i;
      if (sample_present) p_idler *= transmittance(a.sample, conjugate_wavelength(ls, lambda_p));
      if (uniform01(rng) >= p_idler) continue;
      const double delay =
          timing.electronic_delay_ns + (jitter > 0.0 ? jitter * gauss(rng) : 0.0);
      deposit(delay);
    }
  }

  const double accidental_mean = expected_rates(setting, sample_present, experiment).accidental * t_acq;
  if (accidental_mean > 0.0) {
    std::poisson_distribution<std::uint64_t> n_acc(accidental_mean);
    const std::uint64_t n = n_acc(rng);
    for (std::uint64_t k = 0; k < n; ++k) {
      deposit(timing.span_start_ns + timing.span_ns() * uniform01(rng));
    }
  }
  return hist;
}

std::uint64_t setting_seed(std::uint64_t master_seed, const ScanSetting& setting,
                           bool sample_present) {
  const auto key = std::bit_cast<std::uint64_t>(setting.center_wavelength_nm);
  return combine_seed(combine_seed(master_seed, key), sample_present ? 1 : 0);
}

RunRecord run_scan(const std::vector<ScanSetting>& scan, bool sample_present,
                   const Experiment& experiment, std::uint64_t master_seed, unsigned threads) {
  if (scan.empty()) throw DomainError("scan must contain at least one setting");
  RunRecord record;
  record.master_seed = master_seed;
  record.histograms.resize(scan.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(scan.size()));

  auto work = [&](std::size_t i) {
    record.histograms[i] = run_acquisition(scan[i], sample_present, experiment,
                                           setting_seed(master_seed, scan[i], sample_present));
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < scan.size(); ++i) work(i);
    return record;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < scan.size(); i = next++) {
          try {
            work(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return record;
}

}  // namespace entspec
