#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hmux {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value is outside its documented domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Mutually dependent parameters disagree (e.g. bins exceed the clock cycle).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// A pair-number query beyond the distribution's cutoff order.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// A herald pattern does not fit the configured number of bins.
class LengthError : public Error {
 public:
  using Error::Error;
};

// Calibration target outside the attainable enhancement range.
class NoSolutionError : public Error {
 public:
  NoSolutionError(const std::string& what, double attainable_lo, double attainable_hi)
      : Error(what), attainable_lo(attainable_lo), attainable_hi(attainable_hi) {}
  double attainable_lo;
  double attainable_hi;
};

// Too few events for the requested estimate.
class InsufficientStatisticsError : public Error {
 public:
  using Error::Error;
};

// Simulation and model prediction describe different setups.
class MismatchError : public Error {
 public:
  using Error::Error;
};

// Malformed CSV/JSON payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Config file could not be parsed or validated; carries every problem found.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> problems)
      : Error(what), problems(std::move(problems)) {}
  std::vector<std::string> problems;
};

}  // namespace hmux
