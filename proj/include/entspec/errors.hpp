#pragma once

#include <stdexcept>
#include <string>

namespace entspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A wavelength fell outside a dispersion formula's validity range.
class RangeError : public Error {
 public:
  RangeError(std::string wave, double lambda_um, double min_um, double max_um);

  const std::string& wave() const noexcept { return wave_; }
  double wavelength_um() const noexcept { return lambda_um_; }

 private:
  std::string wave_;
  double lambda_um_;
};

/// Degenerate or unphysical argument (zero frequency, lambda <= lambda_p, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration value violated a module invariant. `field` is the dotted
/// path of the offending key when known.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Bracketed root search found no sign change.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// Two data sets that must share a grid do not.
class DataMismatchError : public Error {
 public:
  using Error::Error;
};

/// An analysis region (background band, signal window, peak) is unusable.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// File system or parse failure while reading/writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace entspec
