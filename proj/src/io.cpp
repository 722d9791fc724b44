#include "entspec/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>
#include <vector>

#include "entspec/errors.hpp"

namespace entspec {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError("malformed number '" + std::string(s) + "'");
  }
  return v;
}

namespace {

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError("malformed integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

/// Rows of a CSV file after checking its header.
std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError(path.string() + ": expected header '" + header + "'");
  }
  const auto width = split(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != width) throw IoError(path.string() + ": wrong column count");
    rows.push_back(std::move(cells));
  }
  return rows;
}

constexpr const char* kManifestHeader =
    "index,center_nm,passband_width_nm,passband_shape,sample_present,seed,acquisition_s,"
    "master_seed,histogram";
constexpr const char* kHistogramHeader = "channel_start_ns,channel_end_ns,counts";

std::string histogram_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "hist_%04zu.csv", i);
  return buf;
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_run_record(const fs::path& dir, const RunRecord& record) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::string manifest = std::string(kManifestHeader) + "\n";
  for (std::size_t i = 0; i < record.histograms.size(); ++i) {
    const auto& h = record.histograms[i];
    const auto name = histogram_name(i);
    manifest += std::to_string(i) + "," + format_double(h.setting.center_wavelength_nm) + "," +
                format_double(h.setting.passband_width_nm) + "," +
                std::string(to_string(h.setting.shape)) + "," + (h.sample_present ? "1" : "0") +
                "," + std::to_string(h.seed) + "," + format_double(h.acquisition_s) + "," +
                std::to_string(record.master_seed) + "," + name + "\n";

    std::string body = std::string(kHistogramHeader) + "\n";
    for (std::size_t c = 0; c < h.counts.size(); ++c) {
      body += format_double(h.edges_ns[c]) + "," + format_double(h.edges_ns[c + 1]) + "," +
              std::to_string(h.counts[c]) + "\n";
    }
    write_text(dir / name, body);
  }
  write_text(dir / "manifest.csv", manifest);
  write_text(dir / "config.json", record.config_snapshot);
}

RunRecord read_run_record(const fs::path& dir) {
  RunRecord record;
  const auto rows = read_csv(dir / "manifest.csv", kManifestHeader);
  if (rows.empty()) throw IoError((dir / "manifest.csv").string() + ": no settings");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (parse_u64(r[0]) != i) throw IoError("manifest rows out of order");
    CoincidenceHistogram h;
    try {
      h.setting.shape = passband_from_string(r[3]);
    } catch (const ConfigError&) {
      throw IoError("manifest: unknown passband shape '" + r[3] + "'");
    }
    h.setting.center_wavelength_nm = parse_double(r[1]);
    h.setting.passband_width_nm = parse_double(r[2]);
    if (r[4] != "0" && r[4] != "1") throw IoError("manifest: sample_present must be 0 or 1");
    h.sample_present = r[4] == "1";
    h.seed = parse_u64(r[5]);
    h.acquisition_s = parse_double(r[6]);
    record.master_seed = parse_u64(r[7]);
    if (r[8].find('/') != std::string::npos || r[8].find('\\') != std::string::npos) {
      throw IoError("manifest: histogram file must be a plain file name");
    }

    const auto hrows = read_csv(dir / r[8], kHistogramHeader);
    if (hrows.empty()) throw IoError(r[8] + ": empty histogram");
    h.edges_ns.reserve(hrows.size() + 1);
    h.counts.reserve(hrows.size());
    for (std::size_t c = 0; c < hrows.size(); ++c) {
      const double start = parse_double(hrows[c][0]);
      if (c > 0 && start != h.edges_ns.back()) throw IoError(r[8] + ": channels not contiguous");
      if (c == 0) h.edges_ns.push_back(start);
      const double end = parse_double(hrows[c][1]);
      if (!(end > start)) throw IoError(r[8] + ": channel edges must increase");
      h.edges_ns.push_back(end);
      h.counts.push_back(parse_u64(hrows[c][2]));
    }
    record.histograms.push_back(std::move(h));
  }
  record.config_snapshot = read_text(dir / "config.json");
  return record;
}

std::string flags_to_string(std::uint32_t f) {
  std::string s;
  if (f & flags::kLowStatistics) s += "low_statistics";
  if (f & flags::kUndefined) s += s.empty() ? "undefined" : "|undefined";
  return s;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::string out = "wavelength_nm,value,sigma,flags\n";
  for (const auto& p : spectrum.points) {
    out += format_double(p.wavelength_nm) + "," + format_double(p.value) + "," +
           format_double(p.sigma) + "," + flags_to_string(p.flags) + "\n";
  }
  return out;
}

std::string marginal_csv(const MarginalDensity& marginal) {
  std::string out = "wavelength_nm,density\n";
  const auto x = marginal.wavelengths();
  const auto p = marginal.density();
  for (std::size_t i = 0; i < x.size(); ++i) {
    out += format_double(x[i]) + "," + format_double(p[i]) + "\n";
  }
  return out;
}

std::string absorbance_comparison_csv(const Spectrum& reconstructed, const AbsorbanceModel& model) {
  std::string out = "wavelength_nm,reconstructed,sigma,flags,model\n";
  for (const auto& p : reconstructed.points) {
    out += format_double(p.wavelength_nm) + "," + format_double(p.value) + "," +
           format_double(p.sigma) + "," + flags_to_string(p.flags) + "," +
           format_double(absorbance(model, p.wavelength_nm)) + "\n";
  }
  return out;
}

}  // namespace entspec
