#pragma once

// KIBA-style affinity data: loading, interaction filtering, seeded splits and
// the curated-bundle export.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dtagraph::dataset {

struct DrugRecord {
  std::string drug_id;
  std::string smiles;
  friend bool operator==(const DrugRecord&, const DrugRecord&) = default;
};

struct ProteinRecord {
  std::string protein_id;
  std::string uniprot_accession;
  std::string sequence;
  friend bool operator==(const ProteinRecord&, const ProteinRecord&) = default;
};

/// Scores are ingested verbatim; in KIBA a larger score is a weaker binder.
struct AffinityExample {
  std::string drug_id;
  std::string protein_id;
  double kiba_score = 0.0;
  friend bool operator==(const AffinityExample&, const AffinityExample&) = default;
};

/// Immutable, validated collection of drugs, proteins and affinity examples.
class Dataset {
 public:
  Dataset() = default;
  /// Throws IntegrityError on duplicate ids or pairs, dangling references,
  /// empty SMILES/sequences, invalid residue symbols or non-finite scores.
  Dataset(std::vector<DrugRecord> drugs, std::vector<ProteinRecord> proteins,
          std::vector<AffinityExample> examples);

  const std::vector<DrugRecord>& drugs() const noexcept { return drugs_; }
  const std::vector<ProteinRecord>& proteins() const noexcept { return proteins_; }
  const std::vector<AffinityExample>& examples() const noexcept { return examples_; }

  const DrugRecord& drug(const std::string& id) const;
  const ProteinRecord& protein(const std::string& id) const;
  bool has_drug(const std::string& id) const { return drug_index_.contains(id); }
  bool has_protein(const std::string& id) const { return protein_index_.contains(id); }

  /// Subset restricted to the given example indices; only referenced records are kept.
  Dataset subset(const std::vector<std::size_t>& example_indices) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.drugs_ == b.drugs_ && a.proteins_ == b.proteins_ && a.examples_ == b.examples_;
  }

 private:
  std::vector<DrugRecord> drugs_;
  std::vector<ProteinRecord> proteins_;
  std::vector<AffinityExample> examples_;
  std::unordered_map<std::string, std::size_t> drug_index_;
  std::unordered_map<std::string, std::size_t> protein_index_;
};

inline constexpr const char* kDrugsFile = "drugs.tsv";
inline constexpr const char* kProteinsFile = "proteins.tsv";
inline constexpr const char* kAffinitiesFile = "affinities.tsv";

/// Loads the three tab-separated files. Malformed rows raise ParseError with
/// the 1-based line number; dangling references raise IntegrityError.
Dataset load_kiba(const std::filesystem::path& affinity_path, const std::filesystem::path& drugs_path,
                  const std::filesystem::path& proteins_path);

/// Single-table loaders (no cross-file validation).
std::vector<DrugRecord> load_drugs(const std::filesystem::path& drugs_path);
std::vector<ProteinRecord> load_proteins(const std::filesystem::path& proteins_path);

/// Loads drugs.tsv / proteins.tsv / affinities.tsv from one directory.
Dataset load_dataset_dir(const std::filesystem::path& dir);

/// Writes the three files into `dir` (created if needed). Output is byte-stable.
void write_dataset_dir(const Dataset& ds, const std::filesystem::path& dir);

/// Drops drugs and proteins with fewer than `min_count` examples, repeating
/// until no entity falls below the threshold.
Dataset filter_min_interactions(const Dataset& ds, int min_count);

struct SplitSpec {
  std::uint64_t seed = 42;
  double test_fraction = 1.0 / 6.0;
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;  // into the source example list, ascending
  std::vector<std::size_t> test_indices;
};

/// Seeded example-level split; |test| = round-half-up(test_fraction * n).
Split split_dataset(const Dataset& ds, const SplitSpec& spec);

/// Portable 64-bit generator used wherever seeded randomness must reproduce
/// across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates permutation of 0..n-1 driven by SplitMix64.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct ManifestEntry {
  std::string filename;  // relative to the bundle root
  std::string sha256;
  std::uintmax_t size_bytes = 0;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline constexpr const char* kManifestFile = "manifest.json";

/// Copies the dataset files and every protein's structure file into `out_dir`
/// and writes manifest.json. Throws IoError naming the protein when a
/// structure file is missing.
std::filesystem::path export_curated_bundle(const Dataset& ds, const std::filesystem::path& structure_dir,
                                            const std::filesystem::path& out_dir);

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path);

}  // namespace dtagraph::dataset
