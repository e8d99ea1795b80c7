#pragma once

// PDB parsing and the residue-level contact graph: one node per residue at its
// center of mass, physicochemical node features, contact + backbone edges.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dtagraph::structure {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct Atom {
  std::string element;
  double x = 0.0, y = 0.0, z = 0.0;
  double mass = 0.0;  // Da
};

struct Residue {
  int index = 0;  // 0-based position in parse order
  char aa_code = 'X';
  char chain_id = ' ';
  std::vector<Atom> atoms;
};

/// Reads ATOM records of the first model. Hydrogens, alternate locations other
/// than ' '/'A', and residue names outside the standard 20 (plus a few common
/// modified residues) are skipped.
std::vector<Residue> parse_structure(std::string_view pdb_text);

/// Standard atomic weight for an element symbol (case-insensitive), 0 if unknown.
double element_mass(std::string_view element) noexcept;

/// One-letter code for a three-letter residue name, or '\0'.
char residue_one_letter(std::string_view resname) noexcept;

/// Mass-weighted mean of the residue's atom coordinates.
Vec3 residue_center_of_mass(const Residue& residue);

/// Per-residue physicochemical table entry.
struct ResidueProperties {
  double molecular_weight;  // Da, free amino acid
  bool polar;
  double hydropathy;  // Kyte-Doolittle
  double pka_carboxyl;
  double pka_amino;
  double pka_side_chain;  // 0 when the side chain is not ionizable
};

const ResidueProperties& residue_properties(char aa);

// Fixed standardization constants for the continuous node features.
inline constexpr double kWeightMean = 136.90;
inline constexpr double kWeightStd = 30.08;
inline constexpr double kHydropathyMean = -0.49;
inline constexpr double kHydropathyStd = 2.91;
inline constexpr double kPkaScale = 14.0;
inline constexpr double kCoordinateScale = 0.1;  // Angstrom -> nm

inline constexpr std::size_t kResidueFeatureWidth = 29;
inline constexpr double kDefaultContactThreshold = 8.0;

// Column layout of ResidueGraph::node_features.
namespace column {
inline constexpr std::size_t kOneHot = 0;  // 20 entries
inline constexpr std::size_t kWeight = 20;
inline constexpr std::size_t kPolar = 21;
inline constexpr std::size_t kHydropathy = 22;
inline constexpr std::size_t kPkaCarboxyl = 23;
inline constexpr std::size_t kPkaAmino = 24;
inline constexpr std::size_t kPkaSideChain = 25;
inline constexpr std::size_t kX = 26;
inline constexpr std::size_t kY = 27;
inline constexpr std::size_t kZ = 28;
}  // namespace column

using Edge = std::pair<int, int>;

struct ResidueGraph {
  Eigen::MatrixXd node_features;  // num_residues x 29
  std::vector<Edge> edges;        // undirected, stored once with first < second, sorted
  int num_residues = 0;
};

/// Builds the residue graph. Edges join residues whose centers of mass are
/// within `contact_threshold` Angstrom, plus consecutive residues of the same
/// chain. Coordinates are centered on the whole-protein center of mass.
ResidueGraph build_protein_graph(const std::vector<Residue>& residues,
                                 double contact_threshold = kDefaultContactThreshold);

/// One-letter sequence of parsed residues.
std::string residue_sequence(const std::vector<Residue>& residues);

}  // namespace dtagraph::structure
