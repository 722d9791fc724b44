#include <doctest.h>

#include <cmath>

#include "entspec/errors.hpp"
#include "entspec/spectrometer.hpp"
#include "entspec/units.hpp"

using namespace entspec;

TEST_CASE("resolution") {
  SpectrometerConfig cfg;
  // (1/1400 mm) * 125 um / (2 * 11 mm) = 4.05844... nm
  CHECK(resolution(cfg) == doctest::Approx(125.0 / 1400.0 / 22.0 * 1e3).epsilon(1e-15));
  CHECK(std::abs(resolution(cfg) - 4.058) < 0.001);

  auto longer = cfg;
  longer.lens_focal_mm *= 2;
  CHECK(resolution(longer) == doctest::Approx(resolution(cfg) / 2).epsilon(1e-15));

  auto zero = cfg;
  zero.fiber_diameter_um = 0.0;
  CHECK_THROWS_AS(zero.validate(), ConfigError);
  CHECK_THROWS_AS(resolution(zero), ConfigError);
}

TEST_CASE("resolution is invariant under common rescaling of the geometry") {
  SpectrometerConfig cfg;
  for (double s : {0.001, 0.5, 3.0, 1000.0}) {
    auto scaled = cfg;
    scaled.groove_gap_mm *= s;
    scaled.fiber_diameter_um *= s;
    scaled.lens_focal_mm *= s;
    CHECK(resolution(scaled) == doctest::Approx(resolution(cfg) * s).epsilon(1e-14));
    // Rescaling only d_g and F (both mm) leaves the width unchanged.
    auto mm_only = cfg;
    mm_only.groove_gap_mm *= s;
    mm_only.lens_focal_mm *= s;
    CHECK(resolution(mm_only) == doctest::Approx(resolution(cfg)).epsilon(1e-14));
  }
}

TEST_CASE("transmission") {
  const ScanSetting top{883.0, 4.0, PassbandShape::tophat};
  CHECK(transmission(top, 883.0) == 1.0);
  CHECK(transmission(top, 885.0) == 1.0);
  CHECK(transmission(top, 887.0) == 0.0);
  CHECK(transmission(top, 879.0) == 0.0);

  const ScanSetting gauss{883.0, 4.0, PassbandShape::gaussian};
  CHECK(transmission(gauss, 883.0) == 1.0);
  CHECK(transmission(gauss, 885.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(transmission(gauss, 881.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double l = 800.0; l < 960.0; l += 0.37) {
    CHECK(transmission(gauss, l) <= 1.0);
    CHECK(transmission(top, l) <= 1.0);
  }
}

TEST_CASE("passband integrals by quadrature") {
  const double w = 4.0584415584415585;
  SUBCASE("tophat integrates to its width") {
    const ScanSetting s{900.0, w, PassbandShape::tophat};
    const int n = 4000000;
    const double a = 900.0 - w, b = 900.0 + w, h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += transmission(s, a + (i + 0.5) * h);
    CHECK(sum * h == doctest::Approx(w).epsilon(1e-6));
  }
  SUBCASE("gaussian integrates to width * sqrt(pi / (4 ln 2))") {
    const ScanSetting s{900.0, w, PassbandShape::gaussian};
    const int n = 20000;  // Simpson over +-10 widths
    const double a = 900.0 - 10 * w, b = 900.0 + 10 * w, h = (b - a) / n;
    double sum = transmission(s, a) + transmission(s, b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * transmission(s, a + i * h);
    CHECK(sum * h / 3 == doctest::Approx(w * std::sqrt(kPi / kFourLn2)).epsilon(1e-6));
  }
}

TEST_CASE("default_scan") {
  SpectrometerConfig cfg;
  const auto scan = default_scan(cfg, 810.0, 960.0, 2.0);
  CHECK(scan.size() == 76);
  CHECK(scan.front().center_wavelength_nm == 810.0);
  CHECK(scan.back().center_wavelength_nm == 960.0);
  for (const auto& s : scan) CHECK(s.passband_width_nm == resolution(cfg));

  const auto single = default_scan(cfg, 810.0, 812.0, 5.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].center_wavelength_nm == 810.0);

  CHECK_THROWS_AS(default_scan(cfg, 900.0, 800.0, 2.0), DomainError);
  CHECK_THROWS_AS(default_scan(cfg, 800.0, 900.0, 0.0), DomainError);

  CHECK(scan_settings(cfg).size() == 76);
  cfg.scan = {850.0, 860.0, 870.0};
  CHECK(scan_settings(cfg).size() == 3);
  cfg.scan = {850.0, 850.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
