#include "dtagraph/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "dtagraph/error.hpp"
#include "dtagraph/hashing.hpp"
#include "dtagraph/svg_plot.hpp"

namespace dtagraph::analysis {

namespace {

double contribution(const training::Prediction& p, ErrorMode mode) {
  const double d = p.y_pred - p.y_true;
  return mode == ErrorMode::Absolute ? std::abs(d) : d * d;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string error_label(ErrorMode m) {
  return m == ErrorMode::Absolute ? "total absolute error" : "total squared error";
}

}  // namespace

std::string_view entity_kind_name(EntityKind k) { return k == EntityKind::Drug ? "drug" : "protein"; }

std::string_view error_mode_name(ErrorMode m) { return m == ErrorMode::Absolute ? "abs" : "sq"; }

ErrorMode parse_error_mode(std::string_view name) {
  if (name == "abs") return ErrorMode::Absolute;
  if (name == "sq") return ErrorMode::Squared;
  throw InvalidArgument("unknown error mode '" + std::string(name) + "' (expected abs or sq)");
}

ErrorBreakdown error_by_entity(const std::vector<training::Prediction>& preds, EntityKind kind, ErrorMode mode) {
  if (preds.empty()) throw InvalidArgument("error_by_entity: no predictions");
  std::unordered_map<std::string, std::size_t> slot;
  ErrorBreakdown out{kind, mode, {}};
  for (const auto& p : preds) {
    const auto& id = kind == EntityKind::Drug ? p.drug_id : p.protein_id;
    auto [it, fresh] = slot.try_emplace(id, out.rows.size());
    if (fresh) out.rows.push_back({id, 0.0, 0});
    auto& row = out.rows[it->second];
    row.total_error += contribution(p, mode);
    ++row.example_count;
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const BreakdownRow& a, const BreakdownRow& b) {
    return a.total_error != b.total_error ? a.total_error > b.total_error : a.entity_id < b.entity_id;
  });
  return out;
}

std::string_view property_name(MoleculeProperty p) {
  switch (p) {
    case MoleculeProperty::AtomCount: return "atom_count";
    case MoleculeProperty::AromaticAtomCount: return "aromatic_atom_count";
    case MoleculeProperty::BondCount: return "bond_count";
  }
  return "?";
}

std::size_t property_value(const chem::MoleculeCounts& c, MoleculeProperty p) {
  switch (p) {
    case MoleculeProperty::AtomCount: return c.atoms;
    case MoleculeProperty::AromaticAtomCount: return c.aromatic_atoms;
    case MoleculeProperty::BondCount: return c.bonds;
  }
  return 0;
}

PropertyScatter error_vs_property(const std::vector<training::Prediction>& preds,
                                  const std::map<std::string, chem::MoleculeCounts>& molecules,
                                  MoleculeProperty property, ErrorMode mode) {
  if (preds.empty()) throw InvalidArgument("error_vs_property: no predictions");
  std::map<std::string, double> totals;
  for (const auto& p : preds) totals[p.drug_id] += contribution(p, mode);
  PropertyScatter out{property, mode, {}, std::nullopt};
  std::vector<double> xs, ys;
  for (const auto& [id, total] : totals) {
    auto it = molecules.find(id);
    if (it == molecules.end()) throw InvalidArgument("no molecule for drug " + id);
    const auto v = property_value(it->second, property);
    out.points.push_back({id, v, total});
    xs.push_back(static_cast<double>(v));
    ys.push_back(total);
  }
  try {
    out.pearson_r = metrics::pearson(xs, ys);
  } catch (const UndefinedMetric&) {
  } catch (const InvalidArgument&) {
  }
  return out;
}

PropertyScatter error_vs_property(const std::vector<training::Prediction>& preds,
                                  const std::map<std::string, chem::Molecule>& molecules, MoleculeProperty property,
                                  ErrorMode mode) {
  std::map<std::string, chem::MoleculeCounts> counts;
  for (const auto& [id, m] : molecules) counts.emplace(id, chem::molecule_counts(m));
  return error_vs_property(preds, counts, property, mode);
}

const std::vector<nn::BranchSet>& ablation_removals() {
  using nn::Branch;
  static const std::vector<nn::BranchSet> rows = {
      {},
      {Branch::ProteinGraph},
      {Branch::DrugGraph},
      {Branch::ProteinFingerprint},
      {Branch::DrugFingerprint},
      {Branch::DrugFingerprint, Branch::ProteinFingerprint},
      {Branch::DrugFingerprint, Branch::ProteinGraph},
  };
  return rows;
}

std::vector<AblationRow> run_ablation_matrix(const nn::ModelConfig& base, const training::TrainConfig& train_cfg,
                                             const dataset::Dataset& train_set, const dataset::Dataset& test_set,
                                             const features::FeatureStore& store, const AblationOptions& options) {
  std::vector<AblationRow> rows;
  for (const auto& removed : ablation_removals()) {
    AblationRow row;
    row.removed = removed;
    row.train_config = train_cfg;
    try {
      row.config = nn::make_ablation_config(base, removed);
      nn::Model model(row.config);
      row.history = training::train(model, train_set, store, train_cfg);
      row.train_mse = training::evaluate(model, train_set, store, static_cast<std::size_t>(train_cfg.batch_size)).report.mse;
      if (!test_set.examples().empty())
        row.test = training::evaluate(model, test_set, store, static_cast<std::size_t>(train_cfg.batch_size)).report;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    if (options.on_row) options.on_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ablation_csv(const std::filesystem::path& path, const std::vector<AblationRow>& rows) {
  std::string out = "removed,CI,RMSE,MSE,Spearman,Pearson,train_mse,status\n";
  for (const auto& r : rows) {
    out += nn::branch_set_label(r.removed) + ",";
    if (r.test) {
      out += fmt(r.test->ci) + "," + fmt(r.test->rmse) + "," + fmt(r.test->mse) + "," + fmt(r.test->spearman) + "," +
             fmt(r.test->pearson) + ",";
    } else {
      out += ",,,,,";
    }
    out += (r.train_mse ? fmt(*r.train_mse) : std::string()) + ",";
    std::string status = r.error.empty() ? "ok" : "failed: " + r.error;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out += status + "\n";
  }
  write_file_atomic(path, out);
}

std::string breakdown_csv(const ErrorBreakdown& b) {
  std::string out = "entity_id,total_error,example_count\n";
  for (const auto& r : b.rows) out += r.entity_id + "," + fmt(r.total_error) + "," + std::to_string(r.example_count) + "\n";
  return out;
}

std::string scatter_csv(const PropertyScatter& s) {
  std::string out = "drug_id,property_value,total_error\n";
  for (const auto& p : s.points) out += p.drug_id + "," + std::to_string(p.property_value) + "," + fmt(p.total_error) + "\n";
  return out;
}

std::vector<std::filesystem::path> emit_plots(const std::vector<ErrorBreakdown>& breakdowns,
                                              const std::vector<PropertyScatter>& scatters,
                                              const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> images;
  for (const auto& b : breakdowns) {
    const std::string stem = "error_by_" + std::string(entity_kind_name(b.entity_kind));
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& r : b.rows) {
      labels.push_back(r.entity_id);
      values.push_back(r.total_error);
    }
    const auto svg = out_dir / (stem + ".svg");
    write_file_atomic(svg, plot::bar_chart_svg(error_label(b.mode) + " per " + std::string(entity_kind_name(b.entity_kind)),
                                               labels, values, std::string(entity_kind_name(b.entity_kind)),
                                               error_label(b.mode)));
    write_file_atomic(out_dir / (stem + ".csv"), breakdown_csv(b));
    images.push_back(svg);
  }
  for (const auto& s : scatters) {
    const std::string stem = "error_vs_" + std::string(property_name(s.property));
    std::vector<double> xs, ys;
    for (const auto& p : s.points) {
      xs.push_back(static_cast<double>(p.property_value));
      ys.push_back(p.total_error);
    }
    std::string title = error_label(s.mode) + " vs " + std::string(property_name(s.property));
    title += s.pearson_r ? " (r = " + fmt(std::round(*s.pearson_r * 1e4) / 1e4) + ")" : " (r undefined)";
    const auto svg = out_dir / (stem + ".svg");
    write_file_atomic(svg, plot::scatter_svg(title, xs, ys, std::string(property_name(s.property)), error_label(s.mode)));
    write_file_atomic(out_dir / (stem + ".csv"), scatter_csv(s));
    images.push_back(svg);
  }
  return images;
}

}  // namespace dtagraph::analysis
