#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tofmux {

// Base for every domain failure raised by the library. Precondition
// violations on plain arguments (negative counts, empty windows) throw
// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested duty cycle does not fit in a quad at this resolution and
// frame rate (negative quad dead time).
class InfeasibleTiming : public Error {
 public:
  explicit InfeasibleTiming(const std::string& what) : Error(what) {}
};

class CapacityExceeded : public Error {
 public:
  CapacityExceeded(std::size_t requested, std::size_t bound)
      : Error("capacity exceeded: " + std::to_string(requested) +
              " cameras requested, at most " + std::to_string(bound) +
              " fit without integration overlap"),
        requested_(requested),
        bound_(bound) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t requested_;
  std::size_t bound_;
};

// Zero-amplitude correlation samples: phase is undefined.
class DegenerateSamples : public Error {
 public:
  explicit DegenerateSamples(const std::string& what) : Error(what) {}
};

class ScenarioInvalid : public Error {
 public:
  explicit ScenarioInvalid(const std::string& what) : Error(what) {}
};

class RateMismatch : public Error {
 public:
  explicit RateMismatch(const std::string& what) : Error(what) {}
};

class InsufficientFrames : public Error {
 public:
  InsufficientFrames(std::size_t available, std::size_t required)
      : Error("insufficient frames: " + std::to_string(available) +
              " available, " + std::to_string(required) + " required") {}
};

class NoCommonValidPixels : public Error {
 public:
  NoCommonValidPixels() : Error("no pixel is valid in every frame") {}
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what) {}
};

}  // namespace tofmux
