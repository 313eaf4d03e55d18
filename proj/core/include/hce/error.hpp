#pragma once

#include <stdexcept>
#include <string>

namespace hce {

/// Malformed or invalid user input (configuration, CSV rows, flags).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input was well-formed but the requested analysis cannot be carried out
/// on it, e.g. an empty arm.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hce
