#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace entspec {

/// Gaussian absorption band in decadic absorbance units.
struct AbsorptionBand {
  double center_nm = 0.0;
  double fwhm_nm = 1.0;
  double peak_absorbance = 0.0;
  std::string label;  // free-form, e.g. the transition name

  friend bool operator==(const AbsorptionBand&, const AbsorptionBand&) = default;
};

/// A(lambda) = thickness_scale * (baseline + sum of Gaussian bands).
struct AbsorbanceModel {
  std::vector<AbsorptionBand> bands;
  double baseline = 0.0;
  double thickness_scale = 1.0;

  void validate(std::string_view field = "sample") const;

  friend bool operator==(const AbsorbanceModel&, const AbsorbanceModel&) = default;
};

/// Nd3+-doped glass with bands near 580, 750, 810 and 870 nm. Widths and
/// heights are model parameters, not measured data.
AbsorbanceModel nd_glass_preset();

/// Wavelength-independent absorber.
AbsorbanceModel flat_absorber(double absorbance);

double absorbance(const AbsorbanceModel& model, double lambda_nm);

/// 10^-A.
double transmittance(const AbsorbanceModel& model, double lambda_nm);

}  // namespace entspec
