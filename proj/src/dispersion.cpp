#include "entspec/dispersion.hpp"

#include <cmath>
#include <string>

#include "entspec/biphoton.hpp"
#include "entspec/errors.hpp"
#include "entspec/units.hpp"

namespace entspec {

double SellmeierSet::index_squared(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  return a + b / (l2 - c) - d * l2;
}

void SellmeierSet::validate(std::string_view field) const {
  const std::string f(field);
  if (!(std::isfinite(min_um) && std::isfinite(max_um) && min_um > 0.0 && min_um < max_um)) {
    throw ConfigError(f, "validity range must satisfy 0 < min_um < max_um");
  }
  if (b != 0.0 && c > 0.0) {
    const double pole = std::sqrt(c);
    if (pole >= min_um && pole <= max_um) {
      throw ConfigError(f, "dispersion pole lies inside the validity range");
    }
  }
  constexpr int kProbes = 256;
  for (int i = 0; i <= kProbes; ++i) {
    const double l = min_um + (max_um - min_um) * i / kProbes;
    const double n2 = index_squared(l);
    if (!(n2 > 1.0)) {
      throw ConfigError(f, "n^2 <= 1 inside the validity range at " + std::to_string(l) + " um");
    }
  }
}

SellmeierSet bbo_ordinary() { return {2.7359, 0.01878, 0.01822, 0.01354, 0.2, 2.6}; }
SellmeierSet bbo_extraordinary() { return {2.3753, 0.01224, 0.01667, 0.01516, 0.2, 2.6}; }

std::string_view to_string(Polarization p) {
  return p == Polarization::ordinary ? "o" : "e";
}

Polarization polarization_from_string(std::string_view s) {
  if (s == "o" || s == "ordinary") return Polarization::ordinary;
  if (s == "e" || s == "extraordinary") return Polarization::extraordinary;
  throw ConfigError("", "unknown polarization '" + std::string(s) + "' (expected o or e)");
}

void CrystalConfig::validate(std::string_view field) const {
  const std::string f(field);
  if (!(thickness_mm > 0.0) || !std::isfinite(thickness_mm)) {
    throw ConfigError(f + ".thickness_mm", "must be > 0");
  }
  if (!(cut_angle_deg >= 0.0 && cut_angle_deg <= 90.0)) {
    throw ConfigError(f + ".cut_angle_deg", "must lie in [0, 90] degrees");
  }
  ordinary.validate(f + ".sellmeier_ordinary");
  extraordinary.validate(f + ".sellmeier_extraordinary");
  if (signal == idler) {
    throw ConfigError(f + ".polarization", "type-II requires orthogonal signal and idler");
  }
}

CrystalConfig bbo_type2_preset() { return CrystalConfig{}; }

double index_ordinary(double lambda_um, const SellmeierSet& set, std::string_view wave) {
  if (!set.contains(lambda_um)) {
    throw RangeError(std::string(wave), lambda_um, set.min_um, set.max_um);
  }
  return std::sqrt(set.index_squared(lambda_um));
}

double index_extraordinary_angled(double lambda_um, double theta_deg, const CrystalConfig& config,
                                  std::string_view wave) {
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0)) {
    throw DomainError("propagation angle must lie in [0, 90] degrees");
  }
  const double no = index_ordinary(lambda_um, config.ordinary, wave);
  const double ne = index_ordinary(lambda_um, config.extraordinary, wave);
  if (theta_deg == 0.0) return no;
  if (theta_deg == 90.0) return ne;
  const double t = theta_deg * kPi / 180.0;
  const double c = std::cos(t) / no;
  const double s = std::sin(t) / ne;
  return 1.0 / std::sqrt(c * c + s * s);
}

double refractive_index(double lambda_um, Polarization pol, const CrystalConfig& config,
                        std::string_view wave) {
  if (pol == Polarization::ordinary) return index_ordinary(lambda_um, config.ordinary, wave);
  return index_extraordinary_angled(lambda_um, config.cut_angle_deg, config, wave);
}

double wave_number(double omega, Polarization pol, const CrystalConfig& config,
                   std::string_view wave) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError(std::string(wave) + " angular frequency must be positive and finite");
  }
  const double lambda_um = um_from_nm(nm_from_omega(omega));
  return refractive_index(lambda_um, pol, config, wave) * omega / kSpeedOfLight;
}

double delta_k(double omega_s, double omega_i, const CrystalConfig& config) {
  return wave_number(omega_s, config.signal, config, "signal") +
         wave_number(omega_i, config.idler, config, "idler") -
         wave_number(omega_s + omega_i, config.pump, config, "pump");
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double phase_match_sinc(double delta_k, double length_m) {
  if (!(length_m > 0.0)) throw DomainError("crystal length must be positive");
  return sinc(0.5 * delta_k * length_m);
}

namespace {

template <class F>
double bisect(const F& f, double lo, double hi, double f_lo) {
  // Invariant: f(lo) and f(hi) have opposite signs.
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CalibrationResult calibrate_cut_angle(const CrystalConfig& config, double lambda_s_nm,
                                      double lambda_p_nm) {
  const double lambda_i_nm = conjugate_wavelength(lambda_s_nm, lambda_p_nm);
  const double ws = omega_from_nm(lambda_s_nm);
  const double wi = omega_from_nm(lambda_i_nm);

  CrystalConfig trial = config;
  auto mismatch = [&](double theta) {
    trial.cut_angle_deg = theta;
    return delta_k(ws, wi, trial);
  };

  // Coarse scan so that non-monotone mismatch curves still get bracketed.
  constexpr int kSegments = 180;
  double prev_theta = 0.0;
  double prev = mismatch(prev_theta);
  bool all_zero = prev == 0.0;
  if (prev == 0.0 && mismatch(90.0) != 0.0) return {0.0, 0.0};
  for (int i = 1; i <= kSegments; ++i) {
    const double theta = 90.0 * i / kSegments;
    const double cur = mismatch(theta);
    all_zero = all_zero && cur == 0.0;
    if (cur == 0.0 && !all_zero) return {theta, 0.0};
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
      const double root = bisect(mismatch, prev_theta, theta, prev);
      const double residual = mismatch(root);
      if (!(std::abs(residual) < kCalibrationTolerance)) {
        throw NoRootError("phase-matching bisection did not converge below tolerance");
      }
      return {root, residual};
    }
    prev_theta = theta;
    prev = cur;
  }
  if (all_zero) return {45.0, 0.0};
  throw NoRootError("no phase-matching angle in [0, 90] deg for signal " +
                    std::to_string(lambda_s_nm) + " nm, pump " + std::to_string(lambda_p_nm) +
                    " nm");
}

}  // namespace entspec
