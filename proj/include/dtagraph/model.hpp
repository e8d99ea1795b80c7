#pragma once

// Four-branch affinity regressor: GIN branches over the protein residue graph
// (P_G) and drug molecular graph (D_G), 1D-conv branches over the protein
// (P_F) and drug (D_F) fingerprints, concatenated in that order and fed to an
// MLP that outputs one affinity value.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dtagraph/nn_layers.hpp"

namespace dtagraph::nn {

enum class Branch : std::uint8_t { ProteinGraph = 0, ProteinFingerprint = 1, DrugGraph = 2, DrugFingerprint = 3 };

inline constexpr std::array<Branch, 4> kAllBranches = {Branch::ProteinGraph, Branch::ProteinFingerprint,
                                                       Branch::DrugGraph, Branch::DrugFingerprint};

/// "P_G", "P_F", "D_G", "D_F".
std::string_view branch_name(Branch b);
Branch parse_branch(std::string_view name);

/// Ordered by concatenation order.
using BranchSet = std::set<Branch>;

std::string branch_set_label(const BranchSet& set);  // e.g. "D_F+P_G", "none" when empty

inline constexpr Eigen::Index kProteinNodeWidth = 29;
inline constexpr Eigen::Index kDrugNodeWidth = 78;
inline constexpr Eigen::Index kProteinFingerprintWidth = 8863;
inline constexpr Eigen::Index kDrugFingerprintWidth = 3072;

struct ModelConfig {
  BranchSet active_branches{kAllBranches.begin(), kAllBranches.end()};
  int gin_hidden = 64;
  int gin_layers = 5;
  int branch_embed_dim = 128;
  int bottleneck_dim = 64;
  int conv_channels = 16;
  int conv_kernel = 8;
  int conv_stride = 4;
  std::vector<int> fusion_hidden{1024, 512};
  double dropout = 0.2;
  double gin_eps = 0.0;
  std::uint64_t seed = 42;

  /// Throws InvalidArgument on an empty branch set or non-positive sizes.
  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Copy of `base` without the `removed` branches. Throws when nothing is left.
ModelConfig make_ablation_config(const ModelConfig& base, const BranchSet& removed);

struct GraphView {
  const Matrix* features = nullptr;
  const std::vector<std::pair<int, int>>* edges = nullptr;
};

/// Graph-level embedding: gin_layers GIN blocks, mean pooling, then
/// projection to branch_embed_dim and the embed -> bottleneck -> embed block.
class GraphBranch {
 public:
  GraphBranch(const std::string& name, Eigen::Index input_width, const ModelConfig& config, Rng& rng);

  Matrix forward(std::span<const GraphView> graphs);
  void backward(const Matrix& grad_embeddings);

  /// GIN stage only: per-node features after the last block.
  Matrix node_embeddings(std::span<const GraphView> graphs);
  /// Stage after pooling: maps pooled rows to embeddings.
  Matrix head(const Matrix& pooled);

  void collect(std::vector<Parameter*>& out);
  Eigen::Index input_width() const { return input_width_; }

 private:
  struct GinBlock {
    Linear first;
    ReLU first_act;
    Linear second;
    ReLU second_act;
    LayerNorm norm;
  };

  Eigen::Index input_width_;
  double eps_;
  std::vector<GinBlock> blocks_;
  Linear project_;
  ReLU project_act_;
  Linear squeeze_;
  ReLU squeeze_act_;
  Linear expand_;
  GraphBatch batch_;
};

/// Conv1d over the fingerprint as a single-channel signal, ReLU, flatten, linear.
class FingerprintBranch {
 public:
  FingerprintBranch(const std::string& name, Eigen::Index input_width, const ModelConfig& config, Rng& rng,
                    bool conv_bias = true);

  Matrix forward(const Matrix& fingerprints);
  void backward(const Matrix& grad_embeddings);

  /// Conv responses before the nonlinearity.
  Matrix conv_responses(const Matrix& fingerprints) { return conv_.forward(fingerprints); }

  void collect(std::vector<Parameter*>& out);
  Eigen::Index input_width() const { return input_width_; }

 private:
  Eigen::Index input_width_;
  Conv1d conv_;
  ReLU act_;
  Linear out_;
};

/// Featurized inputs for one batch. Entity lists hold each distinct protein
/// and drug once; `protein_of[i]` / `drug_of[i]` select them per example.
/// Lists for inactive branches may be empty.
struct ModelInputs {
  std::vector<GraphView> protein_graphs;
  std::vector<std::span<const double>> protein_fingerprints;
  std::vector<GraphView> drug_graphs;
  std::vector<std::span<const double>> drug_fingerprints;
  std::vector<int> protein_of;
  std::vector<int> drug_of;

  std::size_t size() const { return protein_of.size(); }
};

class Model {
 public:
  explicit Model(ModelConfig config);

  const ModelConfig& config() const noexcept { return config_; }
  Eigen::Index fusion_input_width() const noexcept { return fusion_width_; }

  Eigen::VectorXd forward(const ModelInputs& inputs, bool training = false);
  /// Accumulates parameter gradients for d(loss)/d(predictions) of the last forward.
  void backward(const Eigen::VectorXd& grad_predictions);

  std::vector<Parameter*> parameters();
  std::size_t parameter_count();
  void zero_grad();

  GraphBranch* graph_branch(Branch b);
  FingerprintBranch* fingerprint_branch(Branch b);
  Linear& output_layer() { return fusion_.back(); }

 private:
  ModelConfig config_;
  Eigen::Index fusion_width_ = 0;
  std::optional<GraphBranch> protein_graph_;
  std::optional<FingerprintBranch> protein_fp_;
  std::optional<GraphBranch> drug_graph_;
  std::optional<FingerprintBranch> drug_fp_;
  std::vector<Linear> fusion_;
  std::vector<ReLU> fusion_act_;
  std::vector<Dropout> fusion_dropout_;
  Rng dropout_rng_;

  // last forward
  std::vector<int> protein_of_, drug_of_;
  std::vector<std::pair<Branch, Eigen::Index>> slots_;  // active branch -> column offset
  Eigen::Index protein_count_ = 0, drug_count_ = 0;
};

}  // namespace dtagraph::nn
