#pragma once

// Minimal layer set with explicit backward passes. Every layer caches what
// its last forward call needs, so a layer instance is used once per forward.
// Rows are samples (or graph nodes), columns are features.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dtagraph::nn {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

/// Deterministic uniform source for initialization and dropout masks.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

class Linear {
 public:
  Linear() = default;
  Linear(std::string name, Eigen::Index in, Eigen::Index out, Rng& rng);

  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out);
  void collect(std::vector<Parameter*>& out) { out.push_back(&weight_); out.push_back(&bias_); }

  Eigen::Index in_features() const { return weight_.value.rows(); }
  Eigen::Index out_features() const { return weight_.value.cols(); }
  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }

 private:
  Parameter weight_;  // in x out
  Parameter bias_;    // 1 x out
  Matrix input_;
};

class ReLU {
 public:
  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out) const;

 private:
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> active_;
};

/// Per-row normalization across features with learnable gain and shift.
class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(std::string name, Eigen::Index dim, double eps = 1e-5);

  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out);
  void collect(std::vector<Parameter*>& out) { out.push_back(&gain_); out.push_back(&shift_); }

 private:
  Parameter gain_;
  Parameter shift_;
  double eps_ = 1e-5;
  Matrix normalized_;
  Eigen::VectorXd inv_std_;
};

/// Inverted dropout; identity unless `training`.
class Dropout {
 public:
  explicit Dropout(double p = 0.0) : p_(p) {}
  Matrix forward(const Matrix& x, bool training, Rng& rng);
  Matrix backward(const Matrix& grad_out) const;

 private:
  double p_;
  bool applied_ = false;
  Matrix mask_;
};

/// Single-input-channel 1D convolution. Input rows are length-N signals; the
/// output row holds the P x C responses flattened position-major
/// (index p * C + c), P = (N - kernel) / stride + 1.
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(std::string name, Eigen::Index length, Eigen::Index channels, Eigen::Index kernel, Eigen::Index stride,
         Rng& rng, bool with_bias = true);

  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& grad_out);
  void collect(std::vector<Parameter*>& out) {
    out.push_back(&weight_);
    if (with_bias_) out.push_back(&bias_);
  }

  Eigen::Index positions() const { return positions_; }
  Eigen::Index output_width() const { return positions_ * weight_.value.cols(); }
  Parameter& weight() { return weight_; }

 private:
  Parameter weight_;  // kernel x channels
  Parameter bias_;    // 1 x channels
  bool with_bias_ = true;
  Eigen::Index length_ = 0, kernel_ = 0, stride_ = 0, positions_ = 0;
  Matrix columns_;  // (batch * positions) x kernel
  Eigen::Index batch_ = 0;
};

/// Disjoint union of several graphs laid out as consecutive node blocks.
struct GraphBatch {
  Matrix features;                        // total_nodes x width
  std::vector<std::pair<int, int>> edges; // undirected, global node ids
  std::vector<int> offsets;               // graph g owns nodes [offsets[g], offsets[g+1])
  int num_graphs() const { return static_cast<int>(offsets.size()) - 1; }
};

/// Sum aggregation h_i' = (1 + eps) h_i + sum_{j ~ i} h_j.
Matrix aggregate_neighbors(const Matrix& h, const std::vector<std::pair<int, int>>& edges, double eps);
/// Adjoint of aggregate_neighbors (the operator is symmetric).
Matrix aggregate_neighbors_backward(const Matrix& grad, const std::vector<std::pair<int, int>>& edges, double eps);

Matrix mean_pool(const Matrix& h, const std::vector<int>& offsets);
Matrix mean_pool_backward(const Matrix& grad, const std::vector<int>& offsets);

}  // namespace dtagraph::nn
