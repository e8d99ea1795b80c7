#pragma once

// Binary checkpoints: a JSON header (model config, featurization version,
// parameter shapes, caller metadata) followed by raw little-endian doubles.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "dtagraph/model.hpp"

namespace dtagraph {

/// Written atomically. `metadata` is stored verbatim under "metadata".
void save_checkpoint(const std::filesystem::path& path, nn::Model& model, const std::string& feature_version,
                     const nlohmann::json& metadata = nlohmann::json::object());

struct LoadedCheckpoint {
  nn::Model model;
  std::string feature_version;
  nlohmann::json metadata;
};

/// Throws IntegrityError when the stored featurization version differs from
/// `expected_feature_version` or the parameter layout does not match the config.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, const std::string& expected_feature_version);

/// Overwrites parameter values in place; shapes must match exactly.
void copy_parameters(nn::Model& from, nn::Model& to);

}  // namespace dtagraph
