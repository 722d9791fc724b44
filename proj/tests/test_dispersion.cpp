#include <doctest.h>

#include <cmath>
#include <cstring>

#include "entspec/biphoton.hpp"
#include "entspec/config.hpp"
#include "entspec/dispersion.hpp"
#include "entspec/errors.hpp"
#include "entspec/units.hpp"

using namespace entspec;

namespace {

CrystalConfig calibrated_bbo() {
  auto c = bbo_type2_preset();
  c.cut_angle_deg = kDefaultCutAngleDeg;
  return c;
}

CrystalConfig dispersionless(double n = 1.5) {
  CrystalConfig c;
  c.ordinary = {n * n, 0.0, 0.0, 0.0, 0.2, 2.6};
  c.extraordinary = c.ordinary;
  c.cut_angle_deg = 30.0;
  return c;
}

// Direct Sellmeier evaluation, kept separate from the library path.
double hand_sellmeier(double a, double b, double c, double d, double l) {
  return std::sqrt(a + b / (l * l - c) - d * l * l);
}

}  // namespace

TEST_CASE("index_ordinary matches hand evaluation of the BBO dispersion law") {
  // mpmath, 30 digits: sqrt(2.7359 + 0.01878/(0.5893^2 - 0.01822) - 0.01354*0.5893^2)
  CHECK(index_ordinary(0.5893, bbo_ordinary()) == doctest::Approx(1.6698115216189442).epsilon(1e-14));
  CHECK(index_ordinary(0.5893, bbo_ordinary()) ==
        doctest::Approx(hand_sellmeier(2.7359, 0.01878, 0.01822, 0.01354, 0.5893)).epsilon(1e-15));
}

TEST_CASE("index_ordinary is deterministic and range checked") {
  const double a = index_ordinary(0.84, bbo_ordinary());
  const double b = index_ordinary(0.84, bbo_ordinary());
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);

  try {
    index_ordinary(0.1, bbo_ordinary(), "idler");
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(e.wave() == "idler");
    CHECK(std::string(e.what()).find("idler") != std::string::npos);
  }
  CHECK_THROWS_AS(index_ordinary(3.0, bbo_ordinary()), RangeError);
}

TEST_CASE("extraordinary index follows the index ellipsoid") {
  const auto cfg = bbo_type2_preset();
  const double l = 0.8;
  const double no = index_ordinary(l, cfg.ordinary);
  const double ne = index_ordinary(l, cfg.extraordinary);
  CHECK(index_extraordinary_angled(l, 0.0, cfg) == no);
  CHECK(index_extraordinary_angled(l, 90.0, cfg) == ne);
  // numpy: 1/sqrt(cos^2(45)/n_o^2 + sin^2(45)/n_e^2) at 0.8 um
  const double n45 = index_extraordinary_angled(l, 45.0, cfg);
  CHECK(n45 == doctest::Approx(1.599333235570578).epsilon(1e-13));
  CHECK(n45 < no);
  CHECK(n45 > ne);
  CHECK_THROWS_AS(index_extraordinary_angled(l, 91.0, cfg), DomainError);
}

TEST_CASE("extraordinary index is monotone in angle") {
  const auto cfg = bbo_type2_preset();
  for (double l : {0.3, 0.43, 0.84, 1.1, 2.0}) {
    double prev = index_extraordinary_angled(l, 0.0, cfg);
    for (int i = 1; i <= 900; ++i) {
      const double cur = index_extraordinary_angled(l, 0.1 * i, cfg);
      CHECK(cur <= prev);  // BBO is negative uniaxial
      prev = cur;
    }
  }
}

TEST_CASE("wave_number") {
  SUBCASE("linear in omega at fixed index") {
    const auto cfg = dispersionless();
    const double w = omega_from_nm(1600.0);
    CHECK(wave_number(2 * w, Polarization::ordinary, cfg) ==
          doctest::Approx(2 * wave_number(w, Polarization::ordinary, cfg)).epsilon(1e-15));
  }
  SUBCASE("BBO ordinary at 840 nm") {
    // numpy: n_o(0.84) * 2 pi / 840e-9
    const double k = wave_number(omega_from_nm(840.0), Polarization::ordinary, bbo_type2_preset());
    CHECK(k == doctest::Approx(12412415.833173992).epsilon(1e-13));
  }
  SUBCASE("zero frequency is rejected") {
    CHECK_THROWS_AS(wave_number(0.0, Polarization::ordinary, bbo_type2_preset()), DomainError);
  }
}

TEST_CASE("delta_k") {
  const auto cfg = calibrated_bbo();
  const double wp = omega_from_nm(429.7);
  const double ws = omega_from_nm(883.0);

  SUBCASE("vanishes at the calibrated operating point") {
    CHECK(std::abs(delta_k(ws, wp - ws, cfg)) * cfg.thickness_m() / 2 < 1e-6);
  }
  SUBCASE("zero without dispersion for every conserving pair") {
    const auto flat = dispersionless();
    for (double l : {700.0, 800.0, 859.4, 950.0, 1100.0}) {
      const double w = omega_from_nm(l);
      const double kp = wave_number(wp, Polarization::extraordinary, flat);
      CHECK(std::abs(delta_k(w, wp - w, flat)) <= 1e-12 * kp);
    }
  }
  SUBCASE("role swap with polarization tags leaves delta_k unchanged") {
    auto swapped = cfg;
    std::swap(swapped.signal, swapped.idler);
    for (double l : {850.0, 883.0, 920.0}) {
      const double a = omega_from_nm(l);
      CHECK(delta_k(a, wp - a, cfg) == doctest::Approx(delta_k(wp - a, a, swapped)).epsilon(1e-12));
    }
  }
  SUBCASE("antisymmetric detuning flips sign and matches a central difference") {
    const double h = 1e10;
    const double deriv = (delta_k(ws + h, wp - ws - h, cfg) - delta_k(ws - h, wp - ws + h, cfg)) / (2 * h);
    REQUIRE(deriv != 0.0);
    for (double delta : {1e11, 5e11, 2e12}) {
      const double up = delta_k(ws + delta, wp - ws - delta, cfg);
      const double down = delta_k(ws - delta, wp - ws + delta, cfg);
      CHECK(up * down < 0.0);
      CHECK(up == doctest::Approx(deriv * delta).epsilon(0.02));
    }
  }
  SUBCASE("range error names the offending wave") {
    const double w = omega_from_nm(3000.0);
    try {
      delta_k(w, wp - w, cfg);
      FAIL("expected RangeError");
    } catch (const RangeError& e) {
      CHECK(e.wave() == "signal");
    }
  }
}

TEST_CASE("phase_match_sinc") {
  CHECK(phase_match_sinc(0.0, 1e-3) == 1.0);
  for (double L : {1e-6, 1e-3, 0.5, 7.0}) CHECK(phase_match_sinc(0.0, L) == 1.0);
  const double L = 1e-3;
  CHECK(std::abs(phase_match_sinc(2 * kPi / L, L)) < 1e-12);
  CHECK(phase_match_sinc(kPi / L, L) == doctest::Approx(2 / kPi).epsilon(1e-15));
  for (int m = 2; m <= 5; ++m) CHECK(std::abs(phase_match_sinc(2 * m * kPi / L, L)) < 1e-12);
  // series branch and direct branch agree across the switch point
  CHECK(sinc(0.99999e-4) == doctest::Approx(std::sin(0.99999e-4) / 0.99999e-4).epsilon(1e-16));
  CHECK(sinc(-1.00001e-4) == doctest::Approx(std::sin(1.00001e-4) / 1.00001e-4).epsilon(1e-16));
  CHECK(phase_match_sinc(123.0, L) >= -0.2173);
  CHECK_THROWS_AS(phase_match_sinc(1.0, 0.0), DomainError);
}

TEST_CASE("sinc^2 bandwidth in delta_k scales inversely with length") {
  auto half_width = [](double L) {
    double lo = 0.0, hi = 2 * kPi / L;  // half maximum lies before the first zero
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double s = phase_match_sinc(mid, L);
      (s * s > 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  for (double L : {0.5e-3, 1e-3, 3e-3}) {
    const double f1 = 2 * half_width(L);
    const double f2 = 2 * half_width(2 * L);
    CHECK(f2 == doctest::Approx(f1 / 2).epsilon(1e-9));
  }
}

TEST_CASE("calibrate_cut_angle") {
  SUBCASE("reproduces the golden angle for the 883 / 429.7 nm target") {
    const auto res = calibrate_cut_angle(bbo_type2_preset(), 883.0, 429.7);
    // scipy brentq (xtol 1e-15) on an independent implementation
    CHECK(res.cut_angle_deg == doctest::Approx(39.951969413964854).epsilon(1e-11));
    CHECK(std::abs(res.residual) < kCalibrationTolerance);
    CHECK(res.cut_angle_deg == doctest::Approx(kDefaultCutAngleDeg).epsilon(1e-12));
    const auto again = calibrate_cut_angle(bbo_type2_preset(), 883.0, 429.7);
    CHECK(again.cut_angle_deg == res.cut_angle_deg);
  }
  SUBCASE("dispersionless crystal returns the bracket midpoint") {
    CHECK(calibrate_cut_angle(dispersionless(), 883.0, 429.7).cut_angle_deg == 45.0);
  }
  SUBCASE("isotropic dispersive crystal has no phase-matching angle") {
    auto c = bbo_type2_preset();
    c.extraordinary = c.ordinary;
    CHECK_THROWS_AS(calibrate_cut_angle(c, 883.0, 429.7), NoRootError);
  }
  SUBCASE("signal shorter than the pump is a domain error") {
    CHECK_THROWS_AS(calibrate_cut_angle(bbo_type2_preset(), 300.0, 429.7), DomainError);
  }
}

TEST_CASE("crystal validation") {
  auto c = bbo_type2_preset();
  CHECK_NOTHROW(c.validate());
  c.thickness_mm = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = bbo_type2_preset();
  c.cut_angle_deg = 95.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = bbo_type2_preset();
  c.idler = c.signal;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = bbo_type2_preset();
  c.ordinary.min_um = 3.0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "crystal.sellmeier_ordinary");
  }
  c = bbo_type2_preset();
  c.ordinary.min_um = 0.1;  // pole at 0.135 um
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
