#include "entspec/sample.hpp"

#include <cmath>

#include "entspec/errors.hpp"
#include "entspec/units.hpp"

namespace entspec {

void AbsorbanceModel::validate(std::string_view field) const {
  const std::string f(field);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    const std::string bf = f + ".bands[" + std::to_string(i) + "]";
    if (!(b.center_nm > 0.0)) throw ConfigError(bf + ".center_nm", "must be > 0");
    if (!(b.fwhm_nm > 0.0)) throw ConfigError(bf + ".fwhm_nm", "must be > 0");
    if (!(b.peak_absorbance >= 0.0)) throw ConfigError(bf + ".peak_absorbance", "must be >= 0");
  }
  if (!(baseline >= 0.0)) throw ConfigError(f + ".baseline", "must be >= 0");
  if (!(thickness_scale >= 0.0) || !std::isfinite(thickness_scale)) {
    throw ConfigError(f + ".thickness_scale", "must be >= 0");
  }
}

AbsorbanceModel nd_glass_preset() {
  AbsorbanceModel m;
  m.bands = {
      {580.0, 25.0, 0.6, "4I9/2 -> 2G7/2 (4G5/2)"},
      {750.0, 25.0, 0.4, "4I9/2 -> 4F7/2"},
      {810.0, 25.0, 0.9, "4I9/2 -> 4F5/2"},
      {870.0, 25.0, 1.2, "4I9/2 -> 4F3/2"},
  };
  return m;
}

AbsorbanceModel flat_absorber(double absorbance) {
  AbsorbanceModel m;
  m.baseline = absorbance;
  return m;
}

double absorbance(const AbsorbanceModel& model, double lambda_nm) {
  double a = model.baseline;
  for (const auto& b : model.bands) {
    const double x = (lambda_nm - b.center_nm) / b.fwhm_nm;
    a += b.peak_absorbance * std::exp(-kFourLn2 * x * x);
  }
  return a * model.thickness_scale;
}

double transmittance(const AbsorbanceModel& model, double lambda_nm) {
  return std::pow(10.0, -absorbance(model, lambda_nm));
}

}  // namespace entspec
