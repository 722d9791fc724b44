#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "entspec/acquisition.hpp"
#include "entspec/analysis.hpp"
#include "entspec/biphoton.hpp"
#include "entspec/sample.hpp"

namespace entspec {

/// Shortest decimal form that reads back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view s);

// RunRecord bundle layout inside `dir`:
//   manifest.csv   index,center_nm,passband_width_nm,passband_shape,sample_present,
//                  seed,acquisition_s,master_seed,histogram
//   hist_NNNN.csv  channel_start_ns,channel_end_ns,counts
//   config.json    configuration snapshot
void write_run_record(const std::filesystem::path& dir, const RunRecord& record);
RunRecord read_run_record(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// wavelength_nm,value,sigma,flags
std::string spectrum_csv(const Spectrum& spectrum);
/// wavelength_nm,density
std::string marginal_csv(const MarginalDensity& marginal);
/// wavelength_nm,reconstructed,sigma,flags,model
std::string absorbance_comparison_csv(const Spectrum& reconstructed, const AbsorbanceModel& model);

/// "low_statistics|undefined" style flag text (empty when clear).
std::string flags_to_string(std::uint32_t f);

}  // namespace entspec
