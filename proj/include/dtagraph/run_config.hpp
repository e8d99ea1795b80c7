#pragma once

// Experiment configuration file shared by the train and ablate commands.
//
//   {
//     "dataset": "data/kiba",            directory with the three TSV files
//     "structures": "data/structures",   AF-*.pdb files
//     "cache": "cache",                  optional feature cache
//     "min_interactions": 10,            optional filter before splitting
//     "split": {"seed": 42, "test_fraction": 0.1666},
//     "model": { ModelConfig fields },
//     "train": { TrainConfig fields }
//   }
//
// Relative paths resolve against the config file's directory.

#include <filesystem>
#include <optional>

#include "json.hpp"

#include "dtagraph/dataset.hpp"
#include "dtagraph/model.hpp"
#include "dtagraph/trainer.hpp"

namespace dtagraph {

struct RunConfig {
  std::filesystem::path dataset_dir;
  std::filesystem::path structure_dir;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<int> min_interactions;
  dataset::SplitSpec split;
  nn::ModelConfig model;
  training::TrainConfig train;
};

RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& file);

/// Overrides the split, model and training seeds.
void apply_seed(RunConfig& c, std::uint64_t seed);

/// Every field, as echoed into result files.
nlohmann::json to_json(const RunConfig& c);

}  // namespace dtagraph
