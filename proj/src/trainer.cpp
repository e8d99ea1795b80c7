#include "dtagraph/trainer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dtagraph/checkpoint.hpp"
#include "dtagraph/error.hpp"
#include "dtagraph/hashing.hpp"

namespace dtagraph::training {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw ParseError("bad number '" + std::string(s) + "'", line);
  return v;
}

std::uint64_t epoch_seed(std::uint64_t seed, int epoch) {
  return seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(epoch + 1));
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InvalidArgument("learning_rate must be > 0");
  if (checkpoint_every < 0) throw InvalidArgument("checkpoint_every must be >= 0");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && adam_eps > 0))
    throw InvalidArgument("Adam betas must lie in [0, 1) and eps must be positive");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},         {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
          {"seed", c.seed},             {"checkpoint_every", c.checkpoint_every}, {"keep_best", c.keep_best},
          {"beta1", c.beta1},           {"beta2", c.beta2},           {"adam_eps", c.adam_eps}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("train config must be a JSON object");
  TrainConfig c;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("epochs", c.epochs);
    get("batch_size", c.batch_size);
    get("learning_rate", c.learning_rate);
    get("seed", c.seed);
    get("checkpoint_every", c.checkpoint_every);
    get("keep_best", c.keep_best);
    get("beta1", c.beta1);
    get("beta2", c.beta2);
    get("adam_eps", c.adam_eps);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad train config: ") + e.what());
  }
  c.validate();
  return c;
}

nn::ModelInputs make_inputs(const features::FeatureStore& store, const std::vector<dataset::AffinityExample>& examples,
                            std::span<const std::size_t> indices) {
  nn::ModelInputs in;
  std::unordered_map<std::string_view, int> protein_slot, drug_slot;
  for (std::size_t idx : indices) {
    const auto& ex = examples.at(idx);
    auto [pit, p_new] = protein_slot.try_emplace(ex.protein_id, static_cast<int>(protein_slot.size()));
    if (p_new) {
      auto f = store.proteins.find(ex.protein_id);
      if (f == store.proteins.end()) throw InvalidArgument("protein " + ex.protein_id + " is not featurized");
      in.protein_graphs.push_back({&f->second.graph.node_features, &f->second.graph.edges});
      in.protein_fingerprints.push_back(f->second.fingerprint.values());
    }
    auto [dit, d_new] = drug_slot.try_emplace(ex.drug_id, static_cast<int>(drug_slot.size()));
    if (d_new) {
      auto f = store.drugs.find(ex.drug_id);
      if (f == store.drugs.end()) throw InvalidArgument("drug " + ex.drug_id + " is not featurized");
      in.drug_graphs.push_back({&f->second.graph.node_features, &f->second.graph.edges});
      in.drug_fingerprints.push_back(f->second.fingerprint.values());
    }
    in.protein_of.push_back(pit->second);
    in.drug_of.push_back(dit->second);
  }
  return in;
}

Adam::Adam(std::vector<nn::Parameter*> params, double lr, double beta1, double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (auto* p : params_) {
    m_.push_back(nn::Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(nn::Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step() {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ / c1;
  const double inv_sqrt_c2 = 1.0 / std::sqrt(c2);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& g = params_[i]->grad;
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
    params_[i]->value.array() -= step * m_[i].array() / ((v_[i].array().sqrt() * inv_sqrt_c2) + eps_);
  }
}

TrainHistory train(nn::Model& model, const dataset::Dataset& train_set, const features::FeatureStore& store,
                   const TrainConfig& cfg, const TrainOptions& options) {
  cfg.validate();
  const auto& examples = train_set.examples();
  if (examples.empty()) throw InvalidArgument("training set is empty");
  const std::size_t n = examples.size();

  if (options.init_output_bias) {
    double mean = 0.0;
    for (const auto& ex : examples) mean += ex.kiba_score;
    model.output_layer().bias().value.setConstant(mean / static_cast<double>(n));
  }

  auto params = model.parameters();
  Adam adam(params, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_eps);
  TrainHistory history;
  std::optional<nn::Model> best;
  double best_loss = std::numeric_limits<double>::infinity();

  auto write_checkpoint = [&](int epochs_done) {
    if (!options.checkpoint_path) return;
    auto meta = options.checkpoint_metadata;
    meta["epochs_completed"] = epochs_done;
    meta["train_config"] = to_json(cfg);
    save_checkpoint(*options.checkpoint_path, model, features::featurization_version(), meta);
  };

  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = dataset::seeded_permutation(n, epoch_seed(cfg.seed, epoch));
    double loss_sum = 0.0;
    int batch_no = 0;
    for (std::size_t start = 0; start < n; start += batch, ++batch_no) {
      const std::span<const std::size_t> idx(order.data() + start, std::min(batch, n - start));
      const auto inputs = make_inputs(store, examples, idx);
      const Eigen::VectorXd pred = model.forward(inputs, /*training=*/true);
      Eigen::VectorXd target(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i) target[static_cast<Eigen::Index>(i)] = examples[idx[i]].kiba_score;
      const Eigen::VectorXd residual = pred - target;
      const double loss = residual.squaredNorm() / static_cast<double>(idx.size());
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << ", batch " << batch_no << " (learning rate "
            << cfg.learning_rate << ", batch size " << idx.size() << ")";
        throw TrainingDiverged(msg.str());
      }
      loss_sum += loss * static_cast<double>(idx.size());
      model.zero_grad();
      model.backward(residual * (2.0 / static_cast<double>(idx.size())));
      adam.step();
    }
    const double epoch_loss = loss_sum / static_cast<double>(n);
    history.train_mse.push_back(epoch_loss);
    if (options.validation) history.validation.push_back(evaluate(model, *options.validation, store, batch).report);
    if (cfg.keep_best && epoch_loss < best_loss) {
      best_loss = epoch_loss;
      history.best_epoch = epoch;
      if (!best) best.emplace(model.config());
      copy_parameters(model, *best);
    }
    if (options.on_epoch) options.on_epoch(epoch, epoch_loss);
    if (cfg.checkpoint_every > 0 && (epoch + 1) % cfg.checkpoint_every == 0) write_checkpoint(epoch + 1);
  }
  if (best) copy_parameters(*best, model);
  write_checkpoint(cfg.epochs);
  return history;
}

Evaluation evaluate_with(const BatchPredictor& predict, const dataset::Dataset& test, std::size_t batch_size) {
  const auto& examples = test.examples();
  if (examples.empty()) throw InvalidArgument("test set is empty");
  if (batch_size == 0) throw InvalidArgument("batch size must be positive");
  Evaluation out;
  std::vector<std::size_t> all(examples.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<double> p, y;
  for (std::size_t start = 0; start < all.size(); start += batch_size) {
    const std::span<const std::size_t> idx(all.data() + start, std::min(batch_size, all.size() - start));
    const Eigen::VectorXd pred = predict(idx);
    if (pred.size() != static_cast<Eigen::Index>(idx.size())) throw InvalidArgument("predictor returned wrong count");
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& ex = examples[idx[i]];
      const double v = pred[static_cast<Eigen::Index>(i)];
      if (!std::isfinite(v)) throw InvalidArgument("non-finite prediction for " + ex.drug_id + "/" + ex.protein_id);
      out.predictions.push_back({ex.drug_id, ex.protein_id, ex.kiba_score, v});
      p.push_back(v);
      y.push_back(ex.kiba_score);
    }
  }
  out.report = p.size() >= 2 ? metrics::evaluate_all(p, y) : metrics::MetricsReport{};
  if (p.size() < 2) {
    out.report.mse = metrics::mse(p, y);
    out.report.rmse = std::sqrt(out.report.mse);
    out.report.ci = out.report.rm2 = out.report.spearman = out.report.pearson = std::nan("");
    out.report.n = p.size();
  }
  return out;
}

Evaluation evaluate(nn::Model& model, const dataset::Dataset& test, const features::FeatureStore& store,
                    std::size_t batch_size) {
  const auto& examples = test.examples();
  return evaluate_with(
      [&](std::span<const std::size_t> idx) { return model.forward(make_inputs(store, examples, idx), false); }, test,
      batch_size);
}

nlohmann::json to_json(const metrics::MetricsReport& r) {
  auto num = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"mse", num(r.mse)},           {"rmse", num(r.rmse)},         {"ci", num(r.ci)},
          {"rm2", num(r.rm2)},           {"spearman", num(r.spearman)}, {"pearson", num(r.pearson)},
          {"n", r.n}};
}

void write_history_csv(const std::filesystem::path& path, const TrainHistory& history) {
  std::string out = "epoch,train_mse\n";
  for (std::size_t e = 0; e < history.train_mse.size(); ++e)
    out += std::to_string(e + 1) + "," + format_double(history.train_mse[e]) + "\n";
  write_file_atomic(path, out);
}

void write_predictions_csv(const std::filesystem::path& path, const std::vector<Prediction>& predictions) {
  std::string out = "drug_id,protein_id,y_true,y_pred\n";
  for (const auto& p : predictions)
    out += p.drug_id + "," + p.protein_id + "," + format_double(p.y_true) + "," + format_double(p.y_pred) + "\n";
  write_file_atomic(path, out);
}

std::vector<Prediction> read_predictions_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty predictions file " + path.string(), 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "drug_id,protein_id,y_true,y_pred")
    throw ParseError("predictions header must be drug_id,protein_id,y_true,y_pred", 1);
  std::vector<Prediction> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 4) throw ParseError("expected 4 fields, got " + std::to_string(f.size()), line_no);
    out.push_back({std::string(f[0]), std::string(f[1]), parse_double(f[2], line_no), parse_double(f[3], line_no)});
  }
  return out;
}

void write_metrics_json(const std::filesystem::path& path, const metrics::MetricsReport& report,
                        const nlohmann::json& config_echo, int epochs) {
  nlohmann::json j = to_json(report);
  j["config"] = config_echo;
  j["epochs"] = epochs;
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace dtagraph::training
