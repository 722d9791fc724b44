#include "entspec/errors.hpp"

#include <sstream>

namespace entspec {

namespace {
std::string range_message(const std::string& wave, double lambda_um, double min_um,
                          double max_um) {
  std::ostringstream os;
  os << wave << " wavelength " << lambda_um << " um outside dispersion validity range ["
     << min_um << ", " << max_um << "] um";
  return os.str();
}
}  // namespace

RangeError::RangeError(std::string wave, double lambda_um, double min_um, double max_um)
    : Error(range_message(wave, lambda_um, min_um, max_um)),
      wave_(std::move(wave)),
      lambda_um_(lambda_um) {}

ConfigError::ConfigError(std::string field, const std::string& what)
    : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

}  // namespace entspec
