#pragma once

#include <stdexcept>

namespace su11 {

// Exit-code-relevant error categories (see tools/verify_main.cpp).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateWeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace su11
