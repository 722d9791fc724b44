#pragma once

#include <numbers>

namespace entspec {

/// Vacuum speed of light in m/s.
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFourLn2 = 4.0 * std::numbers::ln2;

// All wavelengths are vacuum wavelengths. These are the only places where
// wavelength <-> angular frequency conversions happen.

/// Angular frequency (rad/s) of a vacuum wavelength given in nm.
constexpr double omega_from_nm(double lambda_nm) {
  return 2.0 * kPi * kSpeedOfLight / (lambda_nm * 1e-9);
}

/// Vacuum wavelength in nm of an angular frequency in rad/s.
constexpr double nm_from_omega(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega * 1e9;
}

/// |d omega / d lambda| in (rad/s) per nm at the given wavelength.
constexpr double omega_jacobian_per_nm(double lambda_nm) {
  return 2.0 * kPi * kSpeedOfLight / (lambda_nm * lambda_nm * 1e-9);
}

constexpr double um_from_nm(double lambda_nm) { return lambda_nm * 1e-3; }

}  // namespace entspec
