#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "walksense/direction.hpp"
#include "walksense/fusion.hpp"
#include "walksense/ground.hpp"

namespace walksense {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every tunable threshold of the engine in one place. The on-disk form
/// is a flat "section.key = value" text file; unknown keys are rejected
/// by name.
struct EngineConfig {
  GroundConfig ground;
  DirectionConfig direction;
  FusionConfig fusion;
  int detector_timeout_ms = 1000;
  int detector_retries = 2;
  std::vector<std::int64_t> trigger_frames;  // frames that run 2.5-D detection
  std::uint64_t seed = 1;
};

/// Parses and validates; ConfigError messages name the offending key.
EngineConfig load_config(const std::filesystem::path& path);

/// Re-validates a config assembled in code (same errors as load_config).
void validate(const EngineConfig& cfg);

/// Serializes with comments, suitable as a starting config file.
std::string render_config(const EngineConfig& cfg);

}  // namespace walksense
