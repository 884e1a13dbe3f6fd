#pragma once

#include <stdexcept>
#include <string>

namespace tnorm {

/// Shapes or vector lengths that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An epsilon-net (or a product of nets) that exceeds the configured cap.
class NetTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tnorm
