// errors.hpp -- exception types, one per CLI exit class
#pragma once

#include <stdexcept>
#include <string>

namespace fairclust {

// Bad usage or malformed input data (CLI exit 2).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values produced during optimization (CLI exit 3).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures (CLI exit 4).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fairclust
