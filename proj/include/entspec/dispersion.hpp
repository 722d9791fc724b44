#pragma once

#include <string_view>

namespace entspec {

/// One principal-index dispersion law of the form
///   n^2(lambda) = a + b / (lambda^2 - c) - d * lambda^2,   lambda in um,
/// valid on [min_um, max_um]. Setting b = d = 0 gives a dispersionless index.
struct SellmeierSet {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double min_um = 0.2;
  double max_um = 2.6;

  /// n^2 without range checking.
  double index_squared(double lambda_um) const;

  /// Throws ConfigError (prefixed with `field`) if the range is empty, the
  /// pole falls inside it, or n^2 <= 1 anywhere on it.
  void validate(std::string_view field) const;

  bool contains(double lambda_um) const { return lambda_um >= min_um && lambda_um <= max_um; }

  friend bool operator==(const SellmeierSet&, const SellmeierSet&) = default;
};

/// Beta-barium borate principal indices (Eimerl et al. 1987 / Kato 1986 fit).
/// The fit data span 0.22-1.06 um; the evaluation range is widened to 2.6 um
/// so that idler partners of the default signal grid stay addressable.
SellmeierSet bbo_ordinary();
SellmeierSet bbo_extraordinary();

enum class Polarization { ordinary, extraordinary };

std::string_view to_string(Polarization p);
Polarization polarization_from_string(std::string_view s);

/// Uniaxial crystal, collinear propagation at `cut_angle_deg` from the optic
/// axis. Each wave carries its own polarization tag.
struct CrystalConfig {
  double thickness_mm = 1.0;
  double cut_angle_deg = 0.0;
  SellmeierSet ordinary = bbo_ordinary();
  SellmeierSet extraordinary = bbo_extraordinary();
  Polarization pump = Polarization::extraordinary;
  Polarization signal = Polarization::ordinary;
  Polarization idler = Polarization::extraordinary;

  double thickness_m() const { return thickness_mm * 1e-3; }

  void validate(std::string_view field = "crystal") const;

  friend bool operator==(const CrystalConfig&, const CrystalConfig&) = default;
};

/// 1-mm type-II BBO, pump e, signal o, idler e, cut angle left at 0 (calibrate it).
CrystalConfig bbo_type2_preset();

/// Principal ordinary index. Throws RangeError naming `wave` when out of range.
double index_ordinary(double lambda_um, const SellmeierSet& set, std::string_view wave = "wave");

/// Extraordinary-wave index at angle theta from the optic axis, from the index
/// ellipsoid 1/n^2 = cos^2/n_o^2 + sin^2/n_e^2.
double index_extraordinary_angled(double lambda_um, double theta_deg, const CrystalConfig& config,
                                  std::string_view wave = "wave");

/// Index seen by a wave of the given polarization at the crystal's cut angle.
double refractive_index(double lambda_um, Polarization pol, const CrystalConfig& config,
                        std::string_view wave = "wave");

/// k = n(lambda(omega)) * omega / c in rad/m.
double wave_number(double omega, Polarization pol, const CrystalConfig& config,
                   std::string_view wave = "wave");

/// Collinear phase mismatch k_s(omega_s) + k_i(omega_i) - k_p(omega_s + omega_i), rad/m.
double delta_k(double omega_s, double omega_i, const CrystalConfig& config);

/// sin(x)/x with x = delta_k * L / 2; exactly 1 at delta_k = 0.
double phase_match_sinc(double delta_k, double length_m);

/// Plain sin(x)/x with a series branch near zero.
double sinc(double x);

struct CalibrationResult {
  double cut_angle_deg = 0.0;
  double residual = 0.0;  ///< delta_k at the solved angle, rad/m
};

/// Tolerance on |delta_k| accepted by the calibration, rad/m.
inline constexpr double kCalibrationTolerance = 1e-3;

/// Solves for the cut angle in [0, 90] deg that phase-matches the signal target
/// with its energy-conserving idler. Throws NoRootError if delta_k(theta) never
/// changes sign, DomainError if lambda_s <= lambda_p.
CalibrationResult calibrate_cut_angle(const CrystalConfig& config, double lambda_s_nm,
                                      double lambda_p_nm);

}  // namespace entspec
