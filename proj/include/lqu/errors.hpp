#pragma once

#include <stdexcept>
#include <string>

namespace lqu {

// Input violates a domain invariant (non-Hermitian, not PSD, bad dimensions, ...).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input file or text cannot be decoded.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lqu
