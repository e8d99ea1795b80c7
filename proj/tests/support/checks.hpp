#pragma once

// Whole-model checks shared by the unit tests and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dtagraph/feature_cache.hpp"
#include "dtagraph/model.hpp"

namespace dtagraph::test {

/// Featurized frozen batch: `examples` rows over a few proteins and drugs.
struct FrozenBatch {
  features::FeatureStore store;
  std::vector<dataset::AffinityExample> examples;
  std::vector<std::size_t> indices;
  Eigen::VectorXd targets;
};

FrozenBatch make_frozen_batch(std::size_t examples, std::size_t proteins, std::size_t drugs, std::uint64_t seed);

struct GradientCheckResult {
  std::size_t parameter_count = 0;
  std::size_t sampled = 0;
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;  // into the sample
  std::string worst_name;
  /// Relative gap between the staged loss evaluator and Model::forward.
  double evaluator_mismatch = 0.0;
  /// Entries whose central difference straddles a ReLU switch: the analytic
  /// value matches a one-sided slope at step / 100 but not the central one.
  std::size_t kinks = 0;
  double max_relative_error_smooth = 0.0;  // over the non-kink entries
  std::string worst_smooth_name;
  double seconds = 0.0;
};

/// Compares analytic MSE-loss gradients with central differences on a seeded
/// sample of `fraction` of all scalar parameters. Dropout is off. Relative
/// error is |a - n| / max(|a|, |n|, floor). The perturbed losses come from a
/// staged re-evaluation that reuses everything upstream of the parameter.
GradientCheckResult gradient_check(nn::Model& model, const FrozenBatch& batch, double fraction, std::uint64_t seed,
                                   double step = 1e-5, double kink_tolerance = 1e-3, double floor = 1e-6);

}  // namespace dtagraph::test
