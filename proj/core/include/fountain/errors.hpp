#pragma once

#include <stdexcept>
#include <string>

namespace fountain {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical hypothesis of a theorem is not met by the inputs
// (spectral gap, coercivity, infeasible geometry). The CLI maps these to exit 2.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class LevelOutOfRange : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fountain
