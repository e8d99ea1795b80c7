#pragma once

// Shared test helpers: data-file access, temporary directories, generated
// PDB structures and a small KIBA-shaped dataset built from real SMILES.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dtagraph/dataset.hpp"

namespace dtagraph::test {

std::filesystem::path data_path(const std::string& name);
nlohmann::json load_json(const std::string& name);
/// Non-empty, non-comment lines of a data file.
std::vector<std::string> load_lines(const std::string& name);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Helical backbone (N, CA, C, O, plus CB for non-glycine) in PDB format,
/// 1.5 Angstrom rise and 100 degrees turn per residue.
std::string helix_pdb(const std::string& sequence, char chain = 'A', double x_offset = 0.0);

/// Deterministic random sequence over the 20 standard residues.
std::string random_sequence(std::size_t length, std::uint64_t seed);

/// Drug-like SMILES from the frozen corpus (salts, ions and single atoms excluded).
const std::vector<std::string>& druglike_smiles();

struct SyntheticKiba {
  dataset::Dataset dataset;
  std::filesystem::path dir;            // drugs.tsv, proteins.tsv, affinities.tsv
  std::filesystem::path structure_dir;  // dir / "structures"
};

/// KIBA-shaped fixture: real SMILES, generated structures and a smooth,
/// noise-free score that depends on both partners, rescaled to mean 11.7 and
/// standard deviation 0.8.
SyntheticKiba make_synthetic_kiba(const std::filesystem::path& dir, std::size_t num_proteins, std::size_t num_drugs,
                                  std::size_t num_examples, std::uint64_t seed = 7,
                                  std::size_t min_length = 50, std::size_t max_length = 90);

}  // namespace dtagraph::test
