#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "puzzleboard/pipeline.hpp"

namespace puzzleboard {

/// Version of the detection JSON layout (docs/detection.schema.json).
inline constexpr int kDetectionSchemaVersion = 1;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flat camelCase object, every field present.
std::string config_to_json(const PipelineConfig& config, int indent = 2);

/// Starts from `base` and overrides the keys present in `text`. Throws
/// ConfigError on malformed JSON, unknown keys, wrong types or values the
/// pipeline rejects.
PipelineConfig config_from_json(std::string_view text, const PipelineConfig& base = {});
PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base = {});

/// Detection output. `image` is echoed verbatim. Global coordinates, origin
/// and orientation are null for components that did not decode.
std::string detection_to_json(const DetectionResult& result, const PipelineConfig& config,
                              std::string_view image, int indent = 2);

}  // namespace puzzleboard
