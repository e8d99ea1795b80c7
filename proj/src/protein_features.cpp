#include "dtagraph/protein_features.hpp"

#include <cctype>
#include <string>

#include "dtagraph/error.hpp"

namespace dtagraph::protein {

namespace {

constexpr std::array<int, 256> make_residue_lookup() {
  std::array<int, 256> table{};
  for (auto& v : table) v = -1;
  for (std::size_t i = 0; i < kAminoAcids.size(); ++i) {
    table[static_cast<unsigned char>(kAminoAcids[i])] = static_cast<int>(i);
  }
  return table;
}
constexpr auto kResidueLookup = make_residue_lookup();

// {AGV} {ILFP} {YMTS} {HNQW} {RK} {DE} {C}
constexpr std::array<int, 256> make_triad_lookup() {
  std::array<int, 256> table{};
  for (auto& v : table) v = -1;
  constexpr std::string_view groups[] = {"AGV", "ILFP", "YMTS", "HNQW", "RK", "DE", "C"};
  for (int g = 0; g < 7; ++g) {
    for (char c : groups[g]) table[static_cast<unsigned char>(c)] = g;
  }
  return table;
}
constexpr auto kTriadLookup = make_triad_lookup();

std::string require_residues(std::string_view sequence, std::size_t min_length, const char* what) {
  auto clean = sanitize_sequence(sequence);
  if (clean.residues.size() < min_length) {
    throw InvalidArgument(std::string(what) + ": sequence needs at least " +
                          std::to_string(min_length) + " standard residues, got " +
                          std::to_string(clean.residues.size()));
  }
  return std::move(clean.residues);
}

}  // namespace

int residue_index(char aa) noexcept { return kResidueLookup[static_cast<unsigned char>(aa)]; }

int triad_class(char aa) noexcept { return kTriadLookup[static_cast<unsigned char>(aa)]; }

SanitizedSequence sanitize_sequence(std::string_view sequence) {
  SanitizedSequence out;
  out.residues.reserve(sequence.size());
  for (char raw : sequence) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
    if (residue_index(c) >= 0) {
      out.residues.push_back(c);
    } else if (kDroppedResidues.find(c) != std::string_view::npos) {
      ++out.dropped;
    } else {
      throw InvalidArgument(std::string("invalid residue symbol '") + raw + "' in sequence");
    }
  }
  return out;
}

FeatureVector aac_fingerprint(std::string_view sequence) {
  const std::string seq = require_residues(sequence, 1, "aac_fingerprint");
  const std::size_t n = seq.size();
  std::vector<double> values(feature_length(FeatureKind::AAC), 0.0);

  std::size_t offset = 0;
  std::size_t block = 20;
  for (std::size_t k = 1; k <= 3; ++k) {
    if (n >= k) {
      const std::size_t windows = n - k + 1;
      for (std::size_t i = 0; i < windows; ++i) {
        std::size_t index = 0;
        for (std::size_t j = 0; j < k; ++j) index = index * 20 + residue_index(seq[i + j]);
        values[offset + index] += 1.0;
      }
      for (std::size_t i = 0; i < block; ++i) values[offset + i] /= static_cast<double>(windows);
    }
    offset += block;
    block *= 20;
  }
  return FeatureVector(FeatureKind::AAC, std::move(values));
}

FeatureVector ctriad_fingerprint(std::string_view sequence) {
  const std::string seq = require_residues(sequence, 3, "ctriad_fingerprint");
  std::vector<double> values(feature_length(FeatureKind::CTRIAD), 0.0);
  const std::size_t triads = seq.size() - 2;
  for (std::size_t i = 0; i < triads; ++i) {
    const int index = 49 * triad_class(seq[i]) + 7 * triad_class(seq[i + 1]) + triad_class(seq[i + 2]);
    values[static_cast<std::size_t>(index)] += 1.0;
  }
  for (double& v : values) v /= static_cast<double>(triads);
  return FeatureVector(FeatureKind::CTRIAD, std::move(values));
}

std::vector<double> qsorder_values(std::string_view sequence, int nlag, double weight) {
  if (nlag < 1) throw InvalidArgument("qsorder: nlag must be >= 1");
  if (!(weight >= 0.0)) throw InvalidArgument("qsorder: weight must be non-negative");
  const std::string seq = require_residues(sequence, static_cast<std::size_t>(nlag) + 1, "qsorder");
  const std::size_t n = seq.size();

  std::vector<int> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = residue_index(seq[i]);

  std::array<double, 20> composition{};
  for (int r : idx) composition[static_cast<std::size_t>(r)] += 1.0;
  for (double& c : composition) c /= static_cast<double>(n);

  const std::size_t block = 20 + static_cast<std::size_t>(nlag);
  std::vector<double> out(2 * block, 0.0);
  const DistanceMatrix* matrices[] = {&kSchneiderWredeDistance, &kGranthamDistance};
  for (std::size_t m = 0; m < 2; ++m) {
    const DistanceMatrix& dist = *matrices[m];
    std::vector<double> tau(static_cast<std::size_t>(nlag), 0.0);
    for (int d = 1; d <= nlag; ++d) {
      double sum = 0.0;
      for (std::size_t i = 0; i + static_cast<std::size_t>(d) < n; ++i) {
        const double v = dist[idx[i]][idx[i + d]];
        sum += v * v;
      }
      tau[static_cast<std::size_t>(d - 1)] = sum;
    }
    double tau_total = 0.0;
    for (double t : tau) tau_total += t;
    const double denom = 1.0 + weight * tau_total;
    double* dst = out.data() + m * block;
    for (std::size_t a = 0; a < 20; ++a) dst[a] = composition[a] / denom;
    for (std::size_t d = 0; d < tau.size(); ++d) dst[20 + d] = weight * tau[d] / denom;
  }
  return out;
}

FeatureVector qsorder_fingerprint(std::string_view sequence, double weight) {
  return FeatureVector(FeatureKind::QSORDER, qsorder_values(sequence, kDefaultQsoLag, weight));
}

FeatureVector protein_fingerprint(std::string_view sequence) {
  const auto aac = aac_fingerprint(sequence);
  const auto ctriad = ctriad_fingerprint(sequence);
  const auto qso = qsorder_fingerprint(sequence);
  std::vector<double> values;
  values.reserve(feature_length(FeatureKind::PROTEIN_CONCAT));
  for (const auto* part : {&aac, &ctriad, &qso}) {
    values.insert(values.end(), part->values().begin(), part->values().end());
  }
  return FeatureVector(FeatureKind::PROTEIN_CONCAT, std::move(values));
}

}  // namespace dtagraph::protein
