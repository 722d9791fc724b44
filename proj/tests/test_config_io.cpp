#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "entspec/config.hpp"
#include "entspec/errors.hpp"
#include "entspec/io.hpp"
#include "test_support.hpp"

using namespace entspec;

TEST_CASE("default config") {
  const auto c = default_config();
  CHECK_NOTHROW(c.validate());
  CHECK(c.apparatus.source.crystal.cut_angle_deg == kDefaultCutAngleDeg);
  CHECK(scan_settings(c.apparatus.spectrometer).size() == 76);
  CHECK(c.apparatus.sample.bands.size() == 4);
}

TEST_CASE("json round trip") {
  auto c = default_config();
  c.seed = 7;
  c.apparatus.source.crystal.thickness_mm = 0.5;
  c.apparatus.spectrometer.scan = {880.0, 884.0};
  c.apparatus.spectrometer.passband_shape = PassbandShape::gaussian;
  c.windows.signal = {15.0, 21.0};
  const auto text = config_to_json(c);
  CHECK(config_from_json(text) == c);
  CHECK(config_to_json(config_from_json(text)) == text);
  CHECK(config_from_json("{}") == default_config());
}

TEST_CASE("json errors name the field") {
  auto field_of = [](const std::string& text) -> std::string {
    try {
      config_from_json(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return "<accepted>";
  };
  CHECK(field_of(R"({"pump": {"colour": 1}})") == "pump.colour");
  CHECK(field_of(R"({"detectors": {"signal": {"quantum_efficiency": 2}}})") ==
        "detectors.signal.quantum_efficiency");
  CHECK(field_of(R"({"crystal": {"thickness_mm": "thick"}})") == "crystal.thickness_mm");
  CHECK(field_of(R"({"crystal": {"sellmeier_ordinary": {"c": 0.5}}})").rfind("crystal.sellmeier_ordinary", 0) == 0);
  CHECK(field_of(R"({"windows": {"signal": [30, 20]}})").rfind("windows", 0) == 0);
  CHECK(field_of("{not json") != "<accepted>");
  CHECK(field_of("{}") == "<accepted>");
}

TEST_CASE("dotted overrides") {
  const auto c = config_with_overrides("", {"crystal.thickness_mm=2", "spectrometer.passband_shape=gaussian",
                                            "seed=5"});
  CHECK(c.apparatus.source.crystal.thickness_mm == 2.0);
  CHECK(c.apparatus.spectrometer.passband_shape == PassbandShape::gaussian);
  CHECK(c.seed == 5);
  CHECK_THROWS_AS(config_with_overrides("", {"crystal.thickness"}), ConfigError);
  CHECK_THROWS_AS(config_with_overrides("", {"crystal.bogus=1"}), ConfigError);
}

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::bit_cast<double>(rng());
    if (!std::isfinite(v)) continue;
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(std::isnan(parse_double("nan")));
  CHECK(parse_double("-inf") == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(parse_double("1.5x"), IoError);
  CHECK_THROWS_AS(parse_double(""), IoError);
}

TEST_CASE("run record bundle round trip") {
  auto c = default_config();
  c.apparatus.spectrometer.scan_range = {876.0, 890.0, 2.0};
  const Experiment e(c.apparatus);
  auto rec = run_scan(scan_settings(c.apparatus.spectrometer), true, e, 31);
  rec.config_snapshot = config_to_json(c);

  test::TempDir dir;
  write_run_record(dir.path(), rec);
  const auto back = read_run_record(dir.path());
  CHECK(back == rec);

  SUBCASE("rewriting gives identical bytes") {
    test::TempDir again;
    write_run_record(again.path(), back);
    for (const char* f : {"manifest.csv", "hist_0000.csv", "config.json"}) {
      CHECK(read_text(dir.path() / f) == read_text(again.path() / f));
    }
  }
  SUBCASE("corrupt bundles are rejected") {
    auto text = read_text(dir.path() / "hist_0001.csv");
    write_text(dir.path() / "hist_0001.csv", text.substr(0, text.size() / 2) + "\n");
    CHECK_THROWS(read_run_record(dir.path()));
  }
  SUBCASE("missing bundle") {
    CHECK_THROWS_AS(read_run_record(dir.path() / "nowhere"), IoError);
  }
}

TEST_CASE("csv writers") {
  Spectrum s;
  s.points = {{830.5, 0.25, 0.01, 0}, {840.0, std::nan(""), std::nan(""), flags::kUndefined | flags::kLowStatistics}};
  const auto csv = spectrum_csv(s);
  CHECK(csv.rfind("wavelength_nm,value,sigma,flags\n", 0) == 0);
  CHECK(csv.find("830.5,0.25,0.01,\n") != std::string::npos);
  CHECK(csv.find("low_statistics|undefined") != std::string::npos);
  CHECK(flags_to_string(0).empty());
}
