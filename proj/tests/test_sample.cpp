#include <doctest.h>

#include <cmath>

#include "entspec/errors.hpp"
#include "entspec/sample.hpp"

using namespace entspec;

TEST_CASE("absorbance of simple models") {
  AbsorbanceModel empty;
  for (double l : {400.0, 810.0, 1200.0}) CHECK(absorbance(empty, l) == 0.0);

  AbsorbanceModel one;
  one.bands = {{870.0, 25.0, 1.0, ""}};
  one.baseline = 0.05;
  CHECK(absorbance(one, 870.0) == doctest::Approx(1.05).epsilon(1e-15));
  CHECK(absorbance(one, 870.0 + 12.5) == doctest::Approx(0.05 + 0.5).epsilon(1e-14));
  CHECK(absorbance(one, 870.0 - 12.5) == doctest::Approx(0.05 + 0.5).epsilon(1e-14));

  one.thickness_scale = 2.0;
  CHECK(absorbance(one, 870.0) == doctest::Approx(2.1).epsilon(1e-15));
}

TEST_CASE("transmittance is decadic") {
  CHECK(transmittance(flat_absorber(0.0), 800.0) == 1.0);
  CHECK(transmittance(flat_absorber(1.0), 800.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(transmittance(flat_absorber(2.0), 800.0) == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("Nd glass preset properties on the default grid") {
  const auto m = nd_glass_preset();
  CHECK_NOTHROW(m.validate());
  REQUIRE(m.bands.size() == 4);
  CHECK(m.bands[0].center_nm == 580.0);
  CHECK(m.bands[3].center_nm == 870.0);

  double max_second_diff = 0.0;
  const double h = 0.25;
  for (double l = 700.0; l <= 1000.0; l += h) {
    const double a = absorbance(m, l);
    const double t = transmittance(m, l);
    CHECK(a >= 0.0);
    CHECK(t > 0.0);
    CHECK(t <= 1.0);
    CHECK(std::abs(-std::log10(t) - a) < 1e-12);
    const double d2 = (absorbance(m, l + h) - 2 * a + absorbance(m, l - h)) / (h * h);
    max_second_diff = std::max(max_second_diff, std::abs(d2));
  }
  // Peak curvature of a Gaussian band is 8 ln2 * peak / fwhm^2; the 870 nm band dominates.
  CHECK(max_second_diff <= 1.01 * 8 * std::log(2.0) * 1.2 / (25.0 * 25.0) + 0.001);
}

TEST_CASE("absorbance model validation") {
  AbsorbanceModel m = nd_glass_preset();
  m.bands[1].fwhm_nm = 0.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = nd_glass_preset();
  m.bands[2].peak_absorbance = -0.1;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = nd_glass_preset();
  m.baseline = -1e-3;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}
