#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qkd {

// An operation tried to observe or act on quantum state its caller no longer
// holds (a qubit surrendered to the channel), or tried to duplicate state.
class NoCloneViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Protocol sequencing misuse, e.g. transmitting the same qubit twice.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The log-ratio denominator 1 + ln(q) is too close to zero to evaluate.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The embedded correlation-string check failed during key recovery.
class EavesdropDetected : public std::runtime_error {
 public:
  EavesdropDetected(std::size_t disagreements, std::size_t width)
      : std::runtime_error("eavesdropping detected: embedded correlation check failed on " +
                           std::to_string(disagreements) + " of " + std::to_string(width) +
                           " bits"),
        disagreements_(disagreements),
        width_(width) {}

  std::size_t disagreements() const noexcept { return disagreements_; }
  std::size_t width() const noexcept { return width_; }

 private:
  std::size_t disagreements_;
  std::size_t width_;
};

// Malformed or rejected session configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qkd
