#pragma once

// Error attribution by entity and by molecular property, the branch-ablation
// matrix, and plot/CSV emission.

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtagraph/dataset.hpp"
#include "dtagraph/drug_features.hpp"
#include "dtagraph/feature_cache.hpp"
#include "dtagraph/metrics.hpp"
#include "dtagraph/model.hpp"
#include "dtagraph/trainer.hpp"

namespace dtagraph::analysis {

enum class EntityKind { Drug, Protein };
std::string_view entity_kind_name(EntityKind k);  // "drug" / "protein"

/// Per-prediction error contribution: |p - y| (default) or (p - y)^2.
enum class ErrorMode { Absolute, Squared };
std::string_view error_mode_name(ErrorMode m);  // "abs" / "sq"
ErrorMode parse_error_mode(std::string_view name);

struct BreakdownRow {
  std::string entity_id;
  double total_error = 0.0;
  std::size_t example_count = 0;
};

struct ErrorBreakdown {
  EntityKind entity_kind = EntityKind::Drug;
  ErrorMode mode = ErrorMode::Absolute;
  std::vector<BreakdownRow> rows;  // descending by total_error, ties by id
};

ErrorBreakdown error_by_entity(const std::vector<training::Prediction>& preds, EntityKind kind,
                               ErrorMode mode = ErrorMode::Absolute);

enum class MoleculeProperty { AtomCount, AromaticAtomCount, BondCount };
inline constexpr std::array<MoleculeProperty, 3> kAllProperties = {
    MoleculeProperty::AtomCount, MoleculeProperty::AromaticAtomCount, MoleculeProperty::BondCount};
std::string_view property_name(MoleculeProperty p);  // "atom_count", ...
std::size_t property_value(const chem::MoleculeCounts& counts, MoleculeProperty p);

struct ScatterPoint {
  std::string drug_id;
  std::size_t property_value = 0;
  double total_error = 0.0;
};

struct PropertyScatter {
  MoleculeProperty property = MoleculeProperty::AtomCount;
  ErrorMode mode = ErrorMode::Absolute;
  std::vector<ScatterPoint> points;  // one per drug, ordered by drug_id
  std::optional<double> pearson_r;   // empty when undefined (constant property or error, or < 2 drugs)
};

/// Throws InvalidArgument naming the first drug without molecule data.
PropertyScatter error_vs_property(const std::vector<training::Prediction>& preds,
                                  const std::map<std::string, chem::MoleculeCounts>& molecules,
                                  MoleculeProperty property, ErrorMode mode = ErrorMode::Absolute);
PropertyScatter error_vs_property(const std::vector<training::Prediction>& preds,
                                  const std::map<std::string, chem::Molecule>& molecules, MoleculeProperty property,
                                  ErrorMode mode = ErrorMode::Absolute);

/// The seven removal sets: none; P_G; D_G; P_F; D_F; D_F+P_F; D_F+P_G.
const std::vector<nn::BranchSet>& ablation_removals();

struct AblationRow {
  nn::BranchSet removed;
  nn::ModelConfig config;
  training::TrainConfig train_config;
  std::optional<training::TrainHistory> history;
  std::optional<double> train_mse;              // dropout-off MSE on the training set after training
  std::optional<metrics::MetricsReport> test;   // on the held-out set
  std::string error;                            // set when the row failed
};

struct AblationOptions {
  /// Called after each finished row.
  std::function<void(const AblationRow&)> on_row;
};

/// Trains one model per removal set with the same seed, split and TrainConfig.
/// A failing row records its error; the matrix continues.
std::vector<AblationRow> run_ablation_matrix(const nn::ModelConfig& base, const training::TrainConfig& train_cfg,
                                             const dataset::Dataset& train_set, const dataset::Dataset& test_set,
                                             const features::FeatureStore& store, const AblationOptions& options = {});

/// Columns: removed,CI,RMSE,MSE,Spearman,Pearson,train_mse,status.
void write_ablation_csv(const std::filesystem::path& path, const std::vector<AblationRow>& rows);

std::string breakdown_csv(const ErrorBreakdown& b);
std::string scatter_csv(const PropertyScatter& s);

/// Writes error_by_<kind>.{svg,csv} and error_vs_<property>.{svg,csv};
/// returns the image paths. Throws IoError when the directory is unwritable.
std::vector<std::filesystem::path> emit_plots(const std::vector<ErrorBreakdown>& breakdowns,
                                              const std::vector<PropertyScatter>& scatters,
                                              const std::filesystem::path& out_dir);

}  // namespace dtagraph::analysis
