#pragma once

#include <stdexcept>
#include <string>

namespace emx {

struct NonzeroMeanError : std::runtime_error {
  explicit NonzeroMeanError(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfRangeError : std::runtime_error {
  explicit OutOfRangeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested scale count exceeds what the grid resolves.
struct UnderResolvedError : std::runtime_error {
  UnderResolvedError(const std::string& msg, int max_admissible)
      : std::runtime_error(msg), max_admissible_scales(max_admissible) {}
  int max_admissible_scales;
};

struct BlowupDetected : std::runtime_error {
  BlowupDetected(const std::string& msg, double time)
      : std::runtime_error(msg), t(time) {}
  double t;
};

struct DegenerateFlowError : std::runtime_error {
  explicit DegenerateFlowError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientSnapshotsError : std::runtime_error {
  explicit InsufficientSnapshotsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace emx
