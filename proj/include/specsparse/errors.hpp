#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace specsparse {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is 1-based, 0 when not tied to a line.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line(line) {}
  std::size_t line;
};

struct EmptyDatasetError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ParameterError : Error {
  using Error::Error;
};

struct ConnectivityError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

/// Dense oracle requested above the configured size cap.
struct SizeError : Error {
  using Error::Error;
};

/// Iterative eigensolver did not reach the residual target.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, std::vector<double> best_residuals)
      : Error(what), residuals(std::move(best_residuals)) {}
  std::vector<double> residuals;
};

}  // namespace specsparse
