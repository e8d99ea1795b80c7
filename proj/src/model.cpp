#include "dtagraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "dtagraph/error.hpp"

namespace dtagraph::nn {

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::ProteinGraph: return "P_G";
    case Branch::ProteinFingerprint: return "P_F";
    case Branch::DrugGraph: return "D_G";
    case Branch::DrugFingerprint: return "D_F";
  }
  return "?";
}

Branch parse_branch(std::string_view name) {
  for (Branch b : kAllBranches)
    if (branch_name(b) == name) return b;
  throw InvalidArgument("unknown branch '" + std::string(name) + "' (expected P_G, P_F, D_G or D_F)");
}

std::string branch_set_label(const BranchSet& set) {
  if (set.empty()) return "none";
  // drug branches first, matching the usual table ordering (D_F+P_F, D_F+P_G)
  std::vector<std::string_view> names;
  for (Branch b : set) names.push_back(branch_name(b));
  std::sort(names.begin(), names.end());
  std::string out;
  for (auto n : names) {
    if (!out.empty()) out += '+';
    out += n;
  }
  return out;
}

void ModelConfig::validate() const {
  if (active_branches.empty()) throw InvalidArgument("model needs at least one active branch");
  auto positive = [](int v, const char* what) {
    if (v <= 0) throw InvalidArgument(std::string(what) + " must be positive, got " + std::to_string(v));
  };
  positive(gin_hidden, "gin_hidden");
  positive(gin_layers, "gin_layers");
  positive(branch_embed_dim, "branch_embed_dim");
  positive(bottleneck_dim, "bottleneck_dim");
  positive(conv_channels, "conv_channels");
  positive(conv_kernel, "conv_kernel");
  positive(conv_stride, "conv_stride");
  for (int h : fusion_hidden) positive(h, "fusion_hidden entry");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw InvalidArgument("dropout must be in [0, 1)");
  if (!std::isfinite(gin_eps)) throw InvalidArgument("gin_eps must be finite");
  if (conv_kernel > kDrugFingerprintWidth) throw InvalidArgument("conv_kernel exceeds fingerprint length");
}

nlohmann::json to_json(const ModelConfig& c) {
  nlohmann::json branches = nlohmann::json::array();
  for (Branch b : c.active_branches) branches.push_back(std::string(branch_name(b)));
  return {{"active_branches", branches}, {"gin_hidden", c.gin_hidden},
          {"gin_layers", c.gin_layers},   {"branch_embed_dim", c.branch_embed_dim},
          {"bottleneck_dim", c.bottleneck_dim}, {"conv_channels", c.conv_channels},
          {"conv_kernel", c.conv_kernel}, {"conv_stride", c.conv_stride},
          {"fusion_hidden", c.fusion_hidden}, {"dropout", c.dropout},
          {"gin_eps", c.gin_eps},         {"seed", c.seed}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  if (!j.is_object()) throw InvalidArgument("model config must be a JSON object");
  try {
    if (j.contains("active_branches")) {
      c.active_branches.clear();
      for (const auto& b : j.at("active_branches")) c.active_branches.insert(parse_branch(b.get<std::string>()));
    }
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("gin_hidden", c.gin_hidden);
    get("gin_layers", c.gin_layers);
    get("branch_embed_dim", c.branch_embed_dim);
    get("bottleneck_dim", c.bottleneck_dim);
    get("conv_channels", c.conv_channels);
    get("conv_kernel", c.conv_kernel);
    get("conv_stride", c.conv_stride);
    get("fusion_hidden", c.fusion_hidden);
    get("dropout", c.dropout);
    get("gin_eps", c.gin_eps);
    get("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad model config: ") + e.what());
  }
  c.validate();
  return c;
}

ModelConfig make_ablation_config(const ModelConfig& base, const BranchSet& removed) {
  ModelConfig c = base;
  for (Branch b : removed) c.active_branches.erase(b);
  if (c.active_branches.empty())
    throw InvalidArgument("removing " + branch_set_label(removed) + " leaves no active branch");
  return c;
}

// ---------------------------------------------------------------- GraphBranch

GraphBranch::GraphBranch(const std::string& name, Eigen::Index input_width, const ModelConfig& config, Rng& rng)
    : input_width_(input_width), eps_(config.gin_eps) {
  Eigen::Index width = input_width;
  for (int l = 0; l < config.gin_layers; ++l) {
    const std::string p = name + ".gin" + std::to_string(l);
    blocks_.push_back(GinBlock{Linear(p + ".lin1", width, config.gin_hidden, rng), ReLU{},
                               Linear(p + ".lin2", config.gin_hidden, config.gin_hidden, rng), ReLU{},
                               LayerNorm(p + ".norm", config.gin_hidden)});
    width = config.gin_hidden;
  }
  project_ = Linear(name + ".project", width, config.branch_embed_dim, rng);
  squeeze_ = Linear(name + ".squeeze", config.branch_embed_dim, config.bottleneck_dim, rng);
  expand_ = Linear(name + ".expand", config.bottleneck_dim, config.branch_embed_dim, rng);
}

Matrix GraphBranch::node_embeddings(std::span<const GraphView> graphs) {
  batch_ = GraphBatch{};
  Eigen::Index total = 0;
  batch_.offsets.push_back(0);
  for (const auto& g : graphs) {
    if (g.features == nullptr || g.edges == nullptr) throw InvalidArgument("graph input is missing");
    if (g.features->cols() != input_width_)
      throw InvalidArgument("graph node width " + std::to_string(g.features->cols()) + " != expected " +
                            std::to_string(input_width_));
    if (g.features->rows() == 0) throw InvalidArgument("graph has no nodes");
    total += g.features->rows();
    batch_.offsets.push_back(static_cast<int>(total));
  }
  batch_.features.resize(total, input_width_);
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const int base = batch_.offsets[gi];
    batch_.features.middleRows(base, graphs[gi].features->rows()) = *graphs[gi].features;
    for (auto [a, b] : *graphs[gi].edges) batch_.edges.emplace_back(a + base, b + base);
  }

  Matrix h = batch_.features;
  for (auto& blk : blocks_) {
    h = aggregate_neighbors(h, batch_.edges, eps_);
    h = blk.first_act.forward(blk.first.forward(h));
    h = blk.second_act.forward(blk.second.forward(h));
    h = blk.norm.forward(h);
  }
  return h;
}

Matrix GraphBranch::head(const Matrix& pooled) {
  Matrix z = project_act_.forward(project_.forward(pooled));
  z = squeeze_act_.forward(squeeze_.forward(z));
  return expand_.forward(z);
}

Matrix GraphBranch::forward(std::span<const GraphView> graphs) {
  return head(mean_pool(node_embeddings(graphs), batch_.offsets));
}

void GraphBranch::backward(const Matrix& grad_embeddings) {
  Matrix g = expand_.backward(grad_embeddings);
  g = squeeze_.backward(squeeze_act_.backward(g));
  g = project_.backward(project_act_.backward(g));
  g = mean_pool_backward(g, batch_.offsets);
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
    g = it->norm.backward(g);
    g = it->second.backward(it->second_act.backward(g));
    g = it->first.backward(it->first_act.backward(g));
    if (std::next(it) != blocks_.rend()) g = aggregate_neighbors_backward(g, batch_.edges, eps_);
  }
}

void GraphBranch::collect(std::vector<Parameter*>& out) {
  for (auto& blk : blocks_) {
    blk.first.collect(out);
    blk.second.collect(out);
    blk.norm.collect(out);
  }
  project_.collect(out);
  squeeze_.collect(out);
  expand_.collect(out);
}

// ---------------------------------------------------------- FingerprintBranch

FingerprintBranch::FingerprintBranch(const std::string& name, Eigen::Index input_width, const ModelConfig& config,
                                     Rng& rng, bool conv_bias)
    : input_width_(input_width),
      conv_(name + ".conv", input_width, config.conv_channels, config.conv_kernel, config.conv_stride, rng,
            conv_bias) {
  out_ = Linear(name + ".out", conv_.output_width(), config.branch_embed_dim, rng);
}

Matrix FingerprintBranch::forward(const Matrix& fingerprints) {
  if (fingerprints.cols() != input_width_)
    throw InvalidArgument("fingerprint width " + std::to_string(fingerprints.cols()) + " != expected " +
                          std::to_string(input_width_));
  return out_.forward(act_.forward(conv_.forward(fingerprints)));
}

void FingerprintBranch::backward(const Matrix& grad_embeddings) {
  conv_.backward(act_.backward(out_.backward(grad_embeddings)));
}

void FingerprintBranch::collect(std::vector<Parameter*>& out) {
  conv_.collect(out);
  out_.collect(out);
}

// ---------------------------------------------------------------------- Model

namespace {

Matrix stack_fingerprints(std::span<const std::span<const double>> rows, Eigen::Index width) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != width)
      throw InvalidArgument("fingerprint length " + std::to_string(rows[i].size()) + " != expected " +
                            std::to_string(width));
    m.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const RowVector>(rows[i].data(), width);
  }
  return m;
}

void check_indices(const std::vector<int>& of, std::size_t available, const char* what) {
  for (int v : of)
    if (v < 0 || static_cast<std::size_t>(v) >= available)
      throw InvalidArgument(std::string(what) + " index " + std::to_string(v) + " out of range (" +
                            std::to_string(available) + " available)");
}

}  // namespace

Model::Model(ModelConfig config) : config_(std::move(config)), dropout_rng_(config_.seed ^ 0xd1b54a32d192ed03ULL) {
  config_.validate();
  Rng rng(config_.seed);
  const auto& act = config_.active_branches;
  if (act.contains(Branch::ProteinGraph)) protein_graph_.emplace("P_G", kProteinNodeWidth, config_, rng);
  if (act.contains(Branch::ProteinFingerprint))
    protein_fp_.emplace("P_F", kProteinFingerprintWidth, config_, rng);
  if (act.contains(Branch::DrugGraph)) drug_graph_.emplace("D_G", kDrugNodeWidth, config_, rng);
  if (act.contains(Branch::DrugFingerprint)) drug_fp_.emplace("D_F", kDrugFingerprintWidth, config_, rng);

  fusion_width_ = static_cast<Eigen::Index>(act.size()) * config_.branch_embed_dim;
  Eigen::Index width = fusion_width_;
  for (std::size_t i = 0; i < config_.fusion_hidden.size(); ++i) {
    fusion_.emplace_back("fusion" + std::to_string(i), width, config_.fusion_hidden[i], rng);
    fusion_act_.emplace_back();
    fusion_dropout_.emplace_back(config_.dropout);
    width = config_.fusion_hidden[i];
  }
  fusion_.emplace_back("output", width, 1, rng);
}

Eigen::VectorXd Model::forward(const ModelInputs& in, bool training) {
  const auto n = static_cast<Eigen::Index>(in.size());
  if (in.drug_of.size() != in.protein_of.size()) throw InvalidArgument("protein_of and drug_of differ in length");
  const auto& act = config_.active_branches;
  auto count = [](std::optional<std::size_t> graphs, std::optional<std::size_t> fps, const char* what) {
    if (graphs && fps && *graphs != *fps)
      throw InvalidArgument(std::string(what) + " graph/fingerprint count mismatch (" + std::to_string(*graphs) +
                            " vs " + std::to_string(*fps) + ")");
    const std::size_t c = graphs ? *graphs : fps.value_or(0);
    if ((graphs || fps) && c == 0) throw InvalidArgument(std::string("no ") + what + " inputs for an active branch");
    return static_cast<Eigen::Index>(c);
  };
  auto size_if = [&](Branch b, std::size_t size) {
    return act.contains(b) ? std::optional<std::size_t>(size) : std::nullopt;
  };
  protein_count_ = count(size_if(Branch::ProteinGraph, in.protein_graphs.size()),
                         size_if(Branch::ProteinFingerprint, in.protein_fingerprints.size()), "protein");
  drug_count_ = count(size_if(Branch::DrugGraph, in.drug_graphs.size()),
                      size_if(Branch::DrugFingerprint, in.drug_fingerprints.size()), "drug");
  const bool needs_protein = act.contains(Branch::ProteinGraph) || act.contains(Branch::ProteinFingerprint);
  const bool needs_drug = act.contains(Branch::DrugGraph) || act.contains(Branch::DrugFingerprint);
  if (needs_protein) check_indices(in.protein_of, static_cast<std::size_t>(protein_count_), "protein");
  if (needs_drug) check_indices(in.drug_of, static_cast<std::size_t>(drug_count_), "drug");
  protein_of_ = in.protein_of;
  drug_of_ = in.drug_of;

  const Eigen::Index e = config_.branch_embed_dim;
  Matrix fused(n, fusion_width_);
  slots_.clear();
  Eigen::Index col = 0;
  auto place = [&](Branch b, const Matrix& unique, const std::vector<int>& of) {
    for (Eigen::Index i = 0; i < n; ++i) fused.block(i, col, 1, e) = unique.row(of[static_cast<std::size_t>(i)]);
    slots_.emplace_back(b, col);
    col += e;
  };
  if (protein_graph_) place(Branch::ProteinGraph, protein_graph_->forward(in.protein_graphs), protein_of_);
  if (protein_fp_)
    place(Branch::ProteinFingerprint,
          protein_fp_->forward(stack_fingerprints(in.protein_fingerprints, kProteinFingerprintWidth)), protein_of_);
  if (drug_graph_) place(Branch::DrugGraph, drug_graph_->forward(in.drug_graphs), drug_of_);
  if (drug_fp_)
    place(Branch::DrugFingerprint, drug_fp_->forward(stack_fingerprints(in.drug_fingerprints, kDrugFingerprintWidth)),
          drug_of_);

  Matrix h = fused;
  for (std::size_t i = 0; i + 1 < fusion_.size(); ++i) {
    h = fusion_act_[i].forward(fusion_[i].forward(h));
    h = fusion_dropout_[i].forward(h, training, dropout_rng_);
  }
  return fusion_.back().forward(h).col(0);
}

void Model::backward(const Eigen::VectorXd& grad_predictions) {
  Matrix g = fusion_.back().backward(grad_predictions);
  for (std::size_t i = fusion_.size() - 1; i-- > 0;) {
    g = fusion_dropout_[i].backward(g);
    g = fusion_[i].backward(fusion_act_[i].backward(g));
  }
  const Eigen::Index e = config_.branch_embed_dim;
  const auto n = g.rows();
  for (auto [b, col] : slots_) {
    const bool protein = b == Branch::ProteinGraph || b == Branch::ProteinFingerprint;
    const auto& of = protein ? protein_of_ : drug_of_;
    Matrix unique = Matrix::Zero(protein ? protein_count_ : drug_count_, e);
    for (Eigen::Index i = 0; i < n; ++i) unique.row(of[static_cast<std::size_t>(i)]) += g.block(i, col, 1, e);
    switch (b) {
      case Branch::ProteinGraph: protein_graph_->backward(unique); break;
      case Branch::ProteinFingerprint: protein_fp_->backward(unique); break;
      case Branch::DrugGraph: drug_graph_->backward(unique); break;
      case Branch::DrugFingerprint: drug_fp_->backward(unique); break;
    }
  }
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  if (protein_graph_) protein_graph_->collect(out);
  if (protein_fp_) protein_fp_->collect(out);
  if (drug_graph_) drug_graph_->collect(out);
  if (drug_fp_) drug_fp_->collect(out);
  for (auto& l : fusion_) l.collect(out);
  return out;
}

std::size_t Model::parameter_count() {
  std::size_t total = 0;
  for (auto* p : parameters()) total += static_cast<std::size_t>(p->value.size());
  return total;
}

void Model::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

GraphBranch* Model::graph_branch(Branch b) {
  if (b == Branch::ProteinGraph) return protein_graph_ ? &*protein_graph_ : nullptr;
  if (b == Branch::DrugGraph) return drug_graph_ ? &*drug_graph_ : nullptr;
  return nullptr;
}

FingerprintBranch* Model::fingerprint_branch(Branch b) {
  if (b == Branch::ProteinFingerprint) return protein_fp_ ? &*protein_fp_ : nullptr;
  if (b == Branch::DrugFingerprint) return drug_fp_ ? &*drug_fp_ : nullptr;
  return nullptr;
}

}  // namespace dtagraph::nn
