#pragma once

#include <span>
#include <vector>

#include "entspec/dispersion.hpp"
#include "entspec/random.hpp"

namespace entspec {

/// Continuous-wave pump. Zero linewidth means an ideal monochromatic pump.
struct PumpConfig {
  double center_wavelength_nm = 429.7;  // second harmonic of 859.4 nm
  double linewidth_fwhm_hz = 0.0;
  double power_mw = 1.5;

  double omega() const;
  void validate(std::string_view field = "pump") const;

  friend bool operator==(const PumpConfig&, const PumpConfig&) = default;
};

/// Pump power at which `pair_generation_rate` is quoted.
inline constexpr double kReferencePumpPowerMw = 1.5;

struct BiphotonSource {
  PumpConfig pump;
  CrystalConfig crystal;
  double pair_generation_rate = 1.0;  ///< pairs/s at the reference pump power

  /// Pair rate scaled linearly with pump power.
  double pair_rate() const { return pair_generation_rate * pump.power_mw / kReferencePumpPowerMw; }

  void validate(std::string_view field = "source") const;

  friend bool operator==(const BiphotonSource&, const BiphotonSource&) = default;
};

/// Uniform wavelength grid, start and every step up to and including stop.
struct WavelengthGrid {
  double start_nm = 700.0;
  double stop_nm = 1000.0;
  double step_nm = 0.25;

  std::vector<double> points() const;
  void validate(std::string_view field = "marginal_grid") const;

  friend bool operator==(const WavelengthGrid&, const WavelengthGrid&) = default;
};

struct PhotonPair {
  double signal_nm;
  double idler_nm;
};

/// Signal-wavelength density along the energy-conservation line, stored at grid
/// nodes and interpolated linearly between them. The trapezoidal integral over
/// the nodes is 1, which is also the exact integral of the interpolant.
class MarginalDensity {
 public:
  MarginalDensity(std::vector<double> wavelengths_nm, std::vector<double> density);

  std::span<const double> wavelengths() const { return wavelengths_; }
  std::span<const double> density() const { return density_; }
  /// Cumulative probability at each node; front() == 0, back() == 1.
  std::span<const double> cdf() const { return cdf_; }

  /// Interpolated density at lambda (0 outside the grid).
  double operator()(double lambda_nm) const;

  /// Inverse CDF of the piecewise-linear density. u in [0, 1).
  double quantile(double u) const;

  /// Grid node with the largest density (first one on ties).
  double argmax() const;

 private:
  std::vector<double> wavelengths_;
  std::vector<double> density_;
  std::vector<double> cdf_;
};

/// Partner wavelength under lambda_p^-1 = lambda^-1 + partner^-1. Throws
/// DomainError when lambda <= lambda_p.
double conjugate_wavelength(double lambda_nm, double lambda_p_nm);

/// Relative pair density |E(omega_s + omega_i) Phi_L(omega_s, omega_i)|^2,
/// peak value 1. A zero-linewidth pump confines it to the conservation line.
double joint_density(double omega_s, double omega_i, const BiphotonSource& source);

/// Normalized signal marginal |Phi_L(omega_s, omega_p - omega_s)|^2 per unit
/// wavelength (includes the 2 pi c / lambda^2 Jacobian).
MarginalDensity signal_marginal(const BiphotonSource& source, const WavelengthGrid& grid);

/// Draws one signal wavelength from the marginal and pairs it with its conjugate.
PhotonPair sample_pair(const BiphotonSource& source, const MarginalDensity& marginal, Rng& rng);

}  // namespace entspec
