#include "entspec/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entspec/errors.hpp"
#include "entspec/units.hpp"

namespace entspec {

double PumpConfig::omega() const { return omega_from_nm(center_wavelength_nm); }

void PumpConfig::validate(std::string_view field) const {
  const std::string f(field);
  if (!(center_wavelength_nm > 0.0) || !std::isfinite(center_wavelength_nm)) {
    throw ConfigError(f + ".center_wavelength_nm", "must be > 0");
  }
  if (!(linewidth_fwhm_hz >= 0.0)) throw ConfigError(f + ".linewidth_fwhm_hz", "must be >= 0");
  if (!(power_mw >= 0.0)) throw ConfigError(f + ".power_mw", "must be >= 0");
}

void BiphotonSource::validate(std::string_view field) const {
  pump.validate("pump");
  crystal.validate("crystal");
  if (!(pair_generation_rate > 0.0) || !std::isfinite(pair_generation_rate)) {
    throw ConfigError(std::string(field) + ".pair_generation_rate", "must be > 0");
  }
}

std::vector<double> WavelengthGrid::points() const {
  const auto n = static_cast<std::size_t>(std::floor((stop_nm - start_nm) / step_nm + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start_nm + static_cast<double>(i) * step_nm;
  return out;
}

void WavelengthGrid::validate(std::string_view field) const {
  const std::string f(field);
  if (!(step_nm > 0.0)) throw ConfigError(f + ".step_nm", "must be > 0");
  if (!(start_nm > 0.0 && stop_nm > start_nm)) {
    throw ConfigError(f, "empty wavelength grid (need 0 < start_nm < stop_nm)");
  }
}

MarginalDensity::MarginalDensity(std::vector<double> wavelengths_nm, std::vector<double> density)
    : wavelengths_(std::move(wavelengths_nm)), density_(std::move(density)) {
  if (wavelengths_.size() < 2 || wavelengths_.size() != density_.size()) {
    throw DomainError("marginal density needs at least two matching grid points");
  }
  for (std::size_t i = 1; i < wavelengths_.size(); ++i) {
    if (!(wavelengths_[i] > wavelengths_[i - 1])) {
      throw DomainError("marginal wavelength grid must be strictly increasing");
    }
  }
  if (std::any_of(density_.begin(), density_.end(),
                  [](double d) { return !(d >= 0.0) || !std::isfinite(d); })) {
    throw DomainError("marginal density values must be finite and non-negative");
  }
  cdf_.assign(wavelengths_.size(), 0.0);
  for (std::size_t i = 1; i < wavelengths_.size(); ++i) {
    const double h = wavelengths_[i] - wavelengths_[i - 1];
    cdf_[i] = cdf_[i - 1] + 0.5 * h * (density_[i] + density_[i - 1]);
  }
  const double total = cdf_.back();
  if (!(total > 0.0)) throw DomainError("marginal density has zero total probability");
  for (auto& d : density_) d /= total;
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double MarginalDensity::operator()(double lambda_nm) const {
  if (lambda_nm < wavelengths_.front() || lambda_nm > wavelengths_.back()) return 0.0;
  auto it = std::upper_bound(wavelengths_.begin(), wavelengths_.end(), lambda_nm);
  if (it == wavelengths_.end()) return density_.back();
  const auto j = static_cast<std::size_t>(it - wavelengths_.begin()) - 1;
  const double t = (lambda_nm - wavelengths_[j]) / (wavelengths_[j + 1] - wavelengths_[j]);
  return density_[j] + t * (density_[j + 1] - density_[j]);
}

double MarginalDensity::quantile(double u) const {
  // Bin j satisfies cdf[j] <= u < cdf[j+1]; zero-mass bins are never selected.
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return wavelengths_.front();
  if (it == cdf_.end()) return wavelengths_.back();
  const auto j = static_cast<std::size_t>(it - cdf_.begin()) - 1;
  const double h = wavelengths_[j + 1] - wavelengths_[j];
  const double p0 = density_[j];
  const double slope = (density_[j + 1] - p0) / h;
  const double r = u - cdf_[j];
  // Solve p0 x + slope x^2 / 2 = r for x in [0, h] in cancellation-free form.
  double x;
  const double disc = p0 * p0 + 2.0 * slope * r;
  x = 2.0 * r / (p0 + std::sqrt(std::max(disc, 0.0)));
  if (!std::isfinite(x)) x = 0.0;
  return wavelengths_[j] + std::clamp(x, 0.0, h);
}

double MarginalDensity::argmax() const {
  const auto it = std::max_element(density_.begin(), density_.end());
  return wavelengths_[static_cast<std::size_t>(it - density_.begin())];
}

double conjugate_wavelength(double lambda_nm, double lambda_p_nm) {
  if (!(lambda_p_nm > 0.0) || !(lambda_nm > lambda_p_nm)) {
    throw DomainError("conjugate wavelength requires 0 < lambda_p < lambda (got lambda = " +
                      std::to_string(lambda_nm) + " nm, lambda_p = " +
                      std::to_string(lambda_p_nm) + " nm)");
  }
  return 1.0 / (1.0 / lambda_p_nm - 1.0 / lambda_nm);
}

double joint_density(double omega_s, double omega_i, const BiphotonSource& source) {
  const double omega_p = source.pump.omega();
  const double detuning = omega_s + omega_i - omega_p;
  double pump_weight;
  if (source.pump.linewidth_fwhm_hz == 0.0) {
    // Ideal cw pump: only pairs on the conservation line (to rounding) exist.
    if (std::abs(detuning) > 1e-12 * omega_p) return 0.0;
    pump_weight = 1.0;
  } else {
    const double df = detuning / (2.0 * kPi);
    const double w = source.pump.linewidth_fwhm_hz;
    pump_weight = std::exp(-kFourLn2 * df * df / (w * w));
    if (pump_weight == 0.0) return 0.0;
  }
  const double phi = phase_match_sinc(delta_k(omega_s, omega_i, source.crystal),
                                      source.crystal.thickness_m());
  return pump_weight * phi * phi;
}

MarginalDensity signal_marginal(const BiphotonSource& source, const WavelengthGrid& grid) {
  grid.validate();
  const double omega_p = source.pump.omega();
  const double length = source.crystal.thickness_m();
  auto lambdas = grid.points();
  if (lambdas.size() < 2) throw DomainError("marginal grid must hold at least two points");
  std::vector<double> density(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double ls = lambdas[i];
    if (!(ls > source.pump.center_wavelength_nm)) {
      throw DomainError("marginal grid must lie above the pump wavelength");
    }
    const double ws = omega_from_nm(ls);
    const double phi = phase_match_sinc(delta_k(ws, omega_p - ws, source.crystal), length);
    density[i] = phi * phi * omega_jacobian_per_nm(ls);
  }
  return MarginalDensity(std::move(lambdas), std::move(density));
}

PhotonPair sample_pair(const BiphotonSource& source, const MarginalDensity& marginal, Rng& rng) {
  const double ls = marginal.quantile(uniform01(rng));
  return {ls, conjugate_wavelength(ls, source.pump.center_wavelength_nm)};
}

}  // namespace entspec
