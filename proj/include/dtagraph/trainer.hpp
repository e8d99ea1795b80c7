#pragma once

// Adam/MSE training loop, evaluation and the result file writers.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dtagraph/dataset.hpp"
#include "dtagraph/feature_cache.hpp"
#include "dtagraph/metrics.hpp"
#include "dtagraph/model.hpp"

namespace dtagraph::training {

struct TrainConfig {
  int epochs = 300;
  int batch_size = 512;
  double learning_rate = 5e-4;
  std::uint64_t seed = 42;
  int checkpoint_every = 0;  // epochs; 0 disables periodic checkpoints
  bool keep_best = false;    // restore the parameters of the lowest-loss epoch at the end
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct TrainHistory {
  std::vector<double> train_mse;                       // mean loss over each epoch's batches
  std::vector<metrics::MetricsReport> validation;      // filled when a validation set is given
  int best_epoch = -1;
};

struct Prediction {
  std::string drug_id;
  std::string protein_id;
  double y_true = 0.0;
  double y_pred = 0.0;
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Gathers the features of the selected examples, each distinct protein and
/// drug once. The result points into `store`.
nn::ModelInputs make_inputs(const features::FeatureStore& store, const std::vector<dataset::AffinityExample>& examples,
                            std::span<const std::size_t> indices);

class Adam {
 public:
  Adam(std::vector<nn::Parameter*> params, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step();
  long steps() const noexcept { return t_; }

 private:
  std::vector<nn::Parameter*> params_;
  std::vector<nn::Matrix> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

struct TrainOptions {
  std::optional<std::filesystem::path> checkpoint_path;  // written every checkpoint_every epochs and at the end
  nlohmann::json checkpoint_metadata = nlohmann::json::object();
  const dataset::Dataset* validation = nullptr;
  std::function<void(int epoch, double train_mse)> on_epoch;
  /// Sets the output bias to the mean training target before the first step.
  bool init_output_bias = true;
};

/// Minimizes MSE with Adam. Deterministic for a fixed seed. Throws
/// TrainingDiverged on a non-finite batch loss, naming epoch, batch and
/// learning rate.
TrainHistory train(nn::Model& model, const dataset::Dataset& train_set, const features::FeatureStore& store,
                   const TrainConfig& cfg, const TrainOptions& options = {});

struct Evaluation {
  std::vector<Prediction> predictions;
  metrics::MetricsReport report;
};

/// Maps a batch of example indices to predictions.
using BatchPredictor = std::function<Eigen::VectorXd(std::span<const std::size_t>)>;

/// Runs `predict` over the test examples in order. Throws InvalidArgument on an empty set.
Evaluation evaluate_with(const BatchPredictor& predict, const dataset::Dataset& test, std::size_t batch_size = 512);
/// Inference with dropout disabled.
Evaluation evaluate(nn::Model& model, const dataset::Dataset& test, const features::FeatureStore& store,
                    std::size_t batch_size = 512);

nlohmann::json to_json(const metrics::MetricsReport& r);

void write_history_csv(const std::filesystem::path& path, const TrainHistory& history);
void write_predictions_csv(const std::filesystem::path& path, const std::vector<Prediction>& predictions);
std::vector<Prediction> read_predictions_csv(const std::filesystem::path& path);
/// Six metrics, n, the echoed configs and the epoch count.
void write_metrics_json(const std::filesystem::path& path, const metrics::MetricsReport& report,
                        const nlohmann::json& config_echo, int epochs);

}  // namespace dtagraph::training
