#ifndef LAGSIM_ERRORS_HPP
#define LAGSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lagsim {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The requested measure has infinite mass under the given truncation.
class InfiniteRateError : public Error {
 public:
  explicit InfiniteRateError(const std::string& what) : Error(what) {}
};

/// Adaptive integration exhausted its refinement budget.
class NonConvergentError : public Error {
 public:
  explicit NonConvergentError(const std::string& what) : Error(what) {}
};

/// The integrand has a detected non-integrable singularity.
class DivergentError : public Error {
 public:
  explicit DivergentError(const std::string& what) : Error(what) {}
};

/// Invalid scenario configuration; the message names the offending key.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Filesystem failure while emitting results.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

/// A pathwise check was asked to run on a window where it is undefined
/// (e.g. log|x| diagnostics on a path that reaches zero).
class WindowViolationError : public Error {
 public:
  explicit WindowViolationError(const std::string& what) : Error(what) {}
};

}  // namespace lagsim

#endif  // LAGSIM_ERRORS_HPP
