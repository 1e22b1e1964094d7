#ifndef PAIRSIM_ERRORS_HPP
#define PAIRSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pairsim {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside a model validity window (wavelength/temperature range, clipped spectra).
class RangeError : public Error {
public:
  explicit RangeError(const std::string& msg) : Error(msg) {}
};

// Root finder / fixed point failed: no bracket, no convergence, span too small.
class SolverError : public Error {
public:
  explicit SolverError(const std::string& msg) : Error(msg) {}
};

// Internal numerical failure (non-finite amplitudes, eigensolver breakdown).
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

// Configuration / schema violations, reported with a field path.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace pairsim

#endif
