#pragma once

// Sequence-only protein descriptors: k-mer composition (k = 1, 2, 3),
// conjoint triad and quasi-sequence order, plus their concatenation.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dtagraph/feature_vector.hpp"

namespace dtagraph::protein {

/// Canonical residue order used by every descriptor index.
inline constexpr std::string_view kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";

/// Residue symbols that are accepted in input but removed before featurization.
inline constexpr std::string_view kDroppedResidues = "XBZUO";

/// Index of `aa` in kAminoAcids, or -1.
int residue_index(char aa) noexcept;

struct SanitizedSequence {
  std::string residues;
  std::size_t dropped = 0;  // count of nonstandard residues removed
};

/// Upper-cases, removes X/B/Z/U/O, and rejects any other symbol.
SanitizedSequence sanitize_sequence(std::string_view sequence);

/// Frequencies of 1-, 2- and 3-mers in lexicographic order over kAminoAcids
/// (20 + 400 + 8000 entries). A block whose k exceeds the length is zero.
FeatureVector aac_fingerprint(std::string_view sequence);

/// Seven-class index of a residue for the conjoint triad, or -1.
int triad_class(char aa) noexcept;

/// Normalized frequency of class triads; entry index 49*c1 + 7*c2 + c3.
FeatureVector ctriad_fingerprint(std::string_view sequence);

using DistanceMatrix = std::array<std::array<double, 20>, 20>;
extern const DistanceMatrix kSchneiderWredeDistance;
extern const DistanceMatrix kGranthamDistance;

inline constexpr int kDefaultQsoLag = 30;
inline constexpr double kDefaultQsoWeight = 0.1;

/// Quasi-sequence-order values for arbitrary lag: for each distance matrix
/// (Schneider-Wrede, then Grantham) 20 composition terms followed by `nlag`
/// coupling terms, each block normalized by 1 + weight * sum(tau).
std::vector<double> qsorder_values(std::string_view sequence, int nlag, double weight);

/// The 100-wide descriptor (nlag = 30).
FeatureVector qsorder_fingerprint(std::string_view sequence, double weight = kDefaultQsoWeight);

/// [AAC | CTRIAD | QSORDER], 8863 entries.
FeatureVector protein_fingerprint(std::string_view sequence);

}  // namespace dtagraph::protein
