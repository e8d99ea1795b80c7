#pragma once

// Drug featurization: the 78-wide atom-feature molecular graph and the
// Morgan (circular) and path-based bit fingerprints.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dtagraph/feature_vector.hpp"
#include "dtagraph/molecule.hpp"

namespace dtagraph::chem {

/// Atom-type vocabulary of the one-hot symbol block; the last slot catches
/// every symbol not listed.
inline constexpr std::array<std::string_view, 44> kAtomSymbols = {
    "C",  "N",  "O",  "S",  "F",  "Si", "P",  "Cl", "Br", "Mg", "Na", "Ca", "Fe", "As", "Al",
    "I",  "B",  "V",  "K",  "Tl", "Yb", "Sb", "Sn", "Ag", "Pd", "Co", "Se", "Ti", "Zn", "H",
    "Li", "Ge", "Cu", "Au", "Ni", "Cd", "In", "Mn", "Zr", "Cr", "Pt", "Hg", "Pb", "Unknown"};

inline constexpr std::size_t kAtomFeatureWidth = 78;
inline constexpr std::size_t kCountBuckets = 11;  // one-hot over 0..10

namespace atom_column {
inline constexpr std::size_t kSymbol = 0;
inline constexpr std::size_t kDegree = 44;
inline constexpr std::size_t kHydrogens = 55;
inline constexpr std::size_t kImplicitValence = 66;
inline constexpr std::size_t kAromatic = 77;
}  // namespace atom_column

struct MoleculeGraph {
  Eigen::MatrixXd node_features;            // num_atoms x 78
  std::vector<std::pair<int, int>> edges;   // one entry per bond, first < second
  std::size_t clamped_counts = 0;           // counts above 10 folded into the last bucket
};

MoleculeGraph build_drug_graph(const Molecule& m);

/// Unfolded Morgan identifiers (one per retained atom environment).
std::vector<std::uint32_t> morgan_identifiers(const Molecule& m, int radius = 2);

FeatureVector morgan_fingerprint(const Molecule& m, int radius = 2, std::size_t nbits = 1024);

/// Hashes of the distinct linear-path classes with 1..max_path bonds.
std::vector<std::uint32_t> path_identifiers(const Molecule& m, int max_path = 7);

FeatureVector daylight_fingerprint(const Molecule& m, int max_path = 7, std::size_t nbits = 2048);

/// [MORGAN | DAYLIGHT], 3072 entries.
FeatureVector drug_fingerprint(const Molecule& m);

/// Heavy-atom count, aromatic-atom count and bond count used by error analysis.
struct MoleculeCounts {
  std::size_t atoms = 0;
  std::size_t aromatic_atoms = 0;
  std::size_t bonds = 0;
};
MoleculeCounts molecule_counts(const Molecule& m);

}  // namespace dtagraph::chem
