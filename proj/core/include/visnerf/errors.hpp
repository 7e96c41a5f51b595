#pragma once

#include <stdexcept>

namespace visnerf {

/// Bad user input: malformed scene/plan files, out-of-domain arguments.
/// Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numeric kernel produced or consumed a non-finite value.
/// Maps to CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An inpaint/enhance/depth provider failed. Maps to CLI exit code 4.
struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace visnerf
