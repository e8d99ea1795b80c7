#include "dtagraph/nn_layers.hpp"

#include <cmath>

#include "dtagraph/error.hpp"

namespace dtagraph::nn {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {
void fill_uniform(Matrix& m, double bound, Rng& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
  }
}
}  // namespace

Linear::Linear(std::string name, Eigen::Index in, Eigen::Index out, Rng& rng) {
  if (in <= 0 || out <= 0) throw InvalidArgument("Linear " + name + ": dimensions must be positive");
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  weight_ = {name + ".weight", Matrix(in, out), Matrix::Zero(in, out)};
  bias_ = {name + ".bias", Matrix(1, out), Matrix::Zero(1, out)};
  fill_uniform(weight_.value, bound, rng);
  fill_uniform(bias_.value, bound, rng);
}

Matrix Linear::forward(const Matrix& x) {
  if (x.cols() != weight_.value.rows()) {
    throw InvalidArgument(weight_.name + ": expected " + std::to_string(weight_.value.rows()) + " inputs, got " +
                          std::to_string(x.cols()));
  }
  input_ = x;
  Matrix y = x * weight_.value;
  y.rowwise() += bias_.value.row(0);
  return y;
}

Matrix Linear::backward(const Matrix& grad_out) {
  weight_.grad.noalias() += input_.transpose() * grad_out;
  bias_.grad.row(0) += grad_out.colwise().sum();
  return grad_out * weight_.value.transpose();
}

Matrix ReLU::forward(const Matrix& x) {
  active_ = x.array() > 0.0;
  return active_.select(x, 0.0);
}

Matrix ReLU::backward(const Matrix& grad_out) const { return active_.select(grad_out, 0.0); }

LayerNorm::LayerNorm(std::string name, Eigen::Index dim, double eps) : eps_(eps) {
  gain_ = {name + ".gain", Matrix::Ones(1, dim), Matrix::Zero(1, dim)};
  shift_ = {name + ".shift", Matrix::Zero(1, dim), Matrix::Zero(1, dim)};
}

Matrix LayerNorm::forward(const Matrix& x) {
  const double d = static_cast<double>(x.cols());
  const Eigen::VectorXd mean = x.rowwise().mean();
  Matrix centered = x.colwise() - mean;
  const Eigen::VectorXd var = centered.array().square().rowwise().sum() / d;
  inv_std_ = (var.array() + eps_).rsqrt();
  normalized_ = centered.array().colwise() * inv_std_.array();
  Matrix y = normalized_.array().rowwise() * gain_.value.row(0).array();
  y.rowwise() += shift_.value.row(0);
  return y;
}

Matrix LayerNorm::backward(const Matrix& grad_out) {
  const double d = static_cast<double>(grad_out.cols());
  gain_.grad.row(0) += (grad_out.array() * normalized_.array()).colwise().sum().matrix();
  shift_.grad.row(0) += grad_out.colwise().sum();
  const Matrix g = grad_out.array().rowwise() * gain_.value.row(0).array();
  const Eigen::VectorXd g_mean = g.rowwise().mean();
  const Eigen::VectorXd gx_mean = (g.array() * normalized_.array()).rowwise().sum() / d;
  Matrix dx = g.colwise() - g_mean;
  dx -= (normalized_.array().colwise() * gx_mean.array()).matrix();
  return dx.array().colwise() * inv_std_.array();
}

Matrix Dropout::forward(const Matrix& x, bool training, Rng& rng) {
  applied_ = training && p_ > 0.0;
  if (!applied_) return x;
  const double keep = 1.0 - p_;
  mask_.resize(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) mask_(i, j) = rng.uniform() < keep ? 1.0 / keep : 0.0;
  }
  return x.cwiseProduct(mask_);
}

Matrix Dropout::backward(const Matrix& grad_out) const {
  return applied_ ? Matrix(grad_out.cwiseProduct(mask_)) : grad_out;
}

Conv1d::Conv1d(std::string name, Eigen::Index length, Eigen::Index channels, Eigen::Index kernel,
               Eigen::Index stride, Rng& rng, bool with_bias)
    : with_bias_(with_bias), length_(length), kernel_(kernel), stride_(stride) {
  if (channels <= 0 || kernel <= 0 || stride <= 0 || kernel > length) {
    throw InvalidArgument("Conv1d " + name + ": inconsistent dimensions");
  }
  positions_ = (length - kernel) / stride + 1;
  const double bound = 1.0 / std::sqrt(static_cast<double>(kernel));
  weight_ = {name + ".weight", Matrix(kernel, channels), Matrix::Zero(kernel, channels)};
  bias_ = {name + ".bias", Matrix::Zero(1, channels), Matrix::Zero(1, channels)};
  fill_uniform(weight_.value, bound, rng);
  if (with_bias_) fill_uniform(bias_.value, bound, rng);
}

Matrix Conv1d::forward(const Matrix& x) {
  if (x.cols() != length_) {
    throw InvalidArgument(weight_.name + ": expected signal length " + std::to_string(length_) + ", got " +
                          std::to_string(x.cols()));
  }
  batch_ = x.rows();
  columns_.resize(batch_ * positions_, kernel_);
  for (Eigen::Index b = 0; b < batch_; ++b) {
    for (Eigen::Index p = 0; p < positions_; ++p) {
      columns_.row(b * positions_ + p) = x.row(b).segment(p * stride_, kernel_);
    }
  }
  Matrix responses = columns_ * weight_.value;  // (batch*P) x C
  if (with_bias_) responses.rowwise() += bias_.value.row(0);
  const Eigen::Index channels = weight_.value.cols();
  Matrix out(batch_, positions_ * channels);
  for (Eigen::Index b = 0; b < batch_; ++b) {
    for (Eigen::Index p = 0; p < positions_; ++p) {
      out.row(b).segment(p * channels, channels) = responses.row(b * positions_ + p);
    }
  }
  return out;
}

Matrix Conv1d::backward(const Matrix& grad_out) {
  const Eigen::Index channels = weight_.value.cols();
  Matrix grad_responses(batch_ * positions_, channels);
  for (Eigen::Index b = 0; b < batch_; ++b) {
    for (Eigen::Index p = 0; p < positions_; ++p) {
      grad_responses.row(b * positions_ + p) = grad_out.row(b).segment(p * channels, channels);
    }
  }
  weight_.grad.noalias() += columns_.transpose() * grad_responses;
  if (with_bias_) bias_.grad.row(0) += grad_responses.colwise().sum();
  const Matrix grad_columns = grad_responses * weight_.value.transpose();
  Matrix dx = Matrix::Zero(batch_, length_);
  for (Eigen::Index b = 0; b < batch_; ++b) {
    for (Eigen::Index p = 0; p < positions_; ++p) {
      dx.row(b).segment(p * stride_, kernel_) += grad_columns.row(b * positions_ + p);
    }
  }
  return dx;
}

Matrix aggregate_neighbors(const Matrix& h, const std::vector<std::pair<int, int>>& edges, double eps) {
  Matrix out = (1.0 + eps) * h;
  for (const auto& [a, b] : edges) {
    out.row(a) += h.row(b);
    out.row(b) += h.row(a);
  }
  return out;
}

Matrix aggregate_neighbors_backward(const Matrix& grad, const std::vector<std::pair<int, int>>& edges, double eps) {
  return aggregate_neighbors(grad, edges, eps);
}

Matrix mean_pool(const Matrix& h, const std::vector<int>& offsets) {
  const auto graphs = static_cast<Eigen::Index>(offsets.size()) - 1;
  Matrix out(graphs, h.cols());
  for (Eigen::Index g = 0; g < graphs; ++g) {
    const int begin = offsets[g], count = offsets[g + 1] - offsets[g];
    if (count <= 0) throw InvalidArgument("mean_pool: graph without nodes");
    out.row(g) = h.middleRows(begin, count).colwise().mean();
  }
  return out;
}

Matrix mean_pool_backward(const Matrix& grad, const std::vector<int>& offsets) {
  const auto graphs = static_cast<Eigen::Index>(offsets.size()) - 1;
  Matrix out(offsets.back(), grad.cols());
  for (Eigen::Index g = 0; g < graphs; ++g) {
    const int begin = offsets[g], count = offsets[g + 1] - offsets[g];
    out.middleRows(begin, count) = (grad.row(g) / static_cast<double>(count)).replicate(count, 1);
  }
  return out;
}

}  // namespace dtagraph::nn
