#pragma once

// Featurization of whole datasets and the per-entity binary feature cache.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "dtagraph/dataset.hpp"
#include "dtagraph/drug_features.hpp"
#include "dtagraph/feature_vector.hpp"
#include "dtagraph/protein_graph.hpp"

namespace dtagraph::features {

/// Hex digest over every constant that shapes the features (widths, tables,
/// thresholds, hash choices). Cached features and checkpoints carry it.
const std::string& featurization_version();

struct ProteinFeatures {
  structure::ResidueGraph graph;
  FeatureVector fingerprint{FeatureKind::PROTEIN_CONCAT, std::vector<double>(8863, 0.0)};
  std::size_t dropped_residues = 0;
};

struct DrugFeatures {
  chem::MoleculeGraph graph;
  FeatureVector fingerprint{FeatureKind::DRUG_CONCAT, std::vector<double>(3072, 0.0)};
  chem::MoleculeCounts counts;
};

/// Graph from the structure text, fingerprint from the record's sequence.
ProteinFeatures featurize_protein(const dataset::ProteinRecord& record, std::string_view pdb_text);
DrugFeatures featurize_drug(const dataset::DrugRecord& record);

/// Cache layout: <dir>/proteins/<key>.bin and <dir>/drugs/<key>.bin.
std::filesystem::path protein_cache_path(const std::filesystem::path& dir, const std::string& protein_id);
std::filesystem::path drug_cache_path(const std::filesystem::path& dir, const std::string& drug_id);

void save_protein(const std::filesystem::path& file, const std::string& protein_id, const ProteinFeatures& f);
void save_drug(const std::filesystem::path& file, const std::string& drug_id, const DrugFeatures& f);
/// nullopt when the file is absent, was written for another id, or carries a
/// different featurization version. Throws IoError on a corrupt file.
std::optional<ProteinFeatures> load_protein(const std::filesystem::path& file, const std::string& protein_id);
std::optional<DrugFeatures> load_drug(const std::filesystem::path& file, const std::string& drug_id);

struct FeatureStore {
  std::map<std::string, ProteinFeatures> proteins;
  std::map<std::string, DrugFeatures> drugs;
};

struct FeaturizeOptions {
  std::filesystem::path structure_dir;          // AF-<accession>-F1-model_v<N>.pdb files
  std::optional<std::filesystem::path> cache_dir;
  unsigned threads = 1;
};

struct FeaturizeStats {
  std::size_t proteins_computed = 0;
  std::size_t proteins_cached = 0;
  std::size_t drugs_computed = 0;
  std::size_t drugs_cached = 0;
  std::size_t dropped_residues = 0;
  std::size_t clamped_counts = 0;
};

/// Featurizes every record of `ds`. Throws NotFoundError naming the protein
/// when its structure is missing, and rethrows the first featurization error.
FeatureStore featurize_dataset(const dataset::Dataset& ds, const FeaturizeOptions& options,
                               FeaturizeStats* stats = nullptr);

}  // namespace dtagraph::features
