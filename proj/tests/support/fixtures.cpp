#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "dtagraph/drug_features.hpp"
#include "dtagraph/hashing.hpp"
#include "dtagraph/molecule.hpp"
#include "dtagraph/protein_features.hpp"
#include "dtagraph/structure_fetch.hpp"

namespace dtagraph::test {

namespace fs = std::filesystem;

fs::path data_path(const std::string& name) { return fs::path(DTAGRAPH_TEST_DATA) / name; }

nlohmann::json load_json(const std::string& name) { return nlohmann::json::parse(read_file(data_path(name))); }

std::vector<std::string> load_lines(const std::string& name) {
  std::istringstream in(read_file(data_path(name)));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

TempDir::TempDir() {
  static std::uint64_t counter = 0;
  std::random_device rd;
  for (;;) {
    path_ = fs::temp_directory_path() /
            ("dtagraph-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (fs::create_directories(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

const char* three_letter(char aa) {
  switch (aa) {
    case 'A': return "ALA"; case 'C': return "CYS"; case 'D': return "ASP"; case 'E': return "GLU";
    case 'F': return "PHE"; case 'G': return "GLY"; case 'H': return "HIS"; case 'I': return "ILE";
    case 'K': return "LYS"; case 'L': return "LEU"; case 'M': return "MET"; case 'N': return "ASN";
    case 'P': return "PRO"; case 'Q': return "GLN"; case 'R': return "ARG"; case 'S': return "SER";
    case 'T': return "THR"; case 'V': return "VAL"; case 'W': return "TRP"; case 'Y': return "TYR";
  }
  return "UNK";
}

}  // namespace

std::string helix_pdb(const std::string& sequence, char chain, double x_offset) {
  struct Offset {
    const char* name;
    char element;
    double dr, dtheta, dz;
  };
  static const Offset backbone[] = {{"N", 'N', -0.8, -0.35, -0.5}, {"CA", 'C', 0.0, 0.0, 0.0},
                                    {"C", 'C', -0.6, 0.40, 0.6},   {"O", 'O', -0.9, 0.55, 1.5},
                                    {"CB", 'C', 1.5, 0.05, -0.2}};
  std::string out;
  char line[100];
  int serial = 1;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const double theta = static_cast<double>(i) * 100.0 * M_PI / 180.0;
    for (const auto& o : backbone) {
      if (o.name == std::string("CB") && sequence[i] == 'G') continue;
      const double r = 2.3 + o.dr, t = theta + o.dtheta;
      std::snprintf(line, sizeof line, "ATOM  %5d  %-3s %3s %c%4d    %8.3f%8.3f%8.3f  1.00 90.00           %c\n",
                    serial++, o.name, three_letter(sequence[i]), chain, static_cast<int>(i + 1),
                    r * std::cos(t) + x_offset, r * std::sin(t), 1.5 * static_cast<double>(i) + o.dz, o.element);
      out += line;
    }
  }
  out += "TER\nEND\n";
  return out;
}

std::string random_sequence(std::size_t length, std::uint64_t seed) {
  dataset::SplitMix64 rng(seed);
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s += protein::kAminoAcids[rng.below(20)];
  return s;
}

const std::vector<std::string>& druglike_smiles() {
  static const std::vector<std::string> list = [] {
    std::vector<std::string> out;
    for (const auto& smi : load_lines("../oracles/smiles_corpus.txt")) {
      if (smi.find('.') != std::string::npos) continue;
      const auto m = chem::parse_smiles(smi);
      if (chem::molecule_counts(m).atoms >= 4) out.push_back(smi);
    }
    return out;
  }();
  return list;
}

SyntheticKiba make_synthetic_kiba(const fs::path& dir, std::size_t num_proteins, std::size_t num_drugs,
                                  std::size_t num_examples, std::uint64_t seed, std::size_t min_length,
                                  std::size_t max_length) {
  const auto& smiles = druglike_smiles();
  num_drugs = std::min(num_drugs, smiles.size());
  dataset::SplitMix64 rng(seed);

  std::vector<dataset::DrugRecord> drugs;
  std::vector<double> drug_term;
  for (std::size_t d = 0; d < num_drugs; ++d) {
    char id[32];
    std::snprintf(id, sizeof id, "CHEMBL%06zu", 100 + d);
    drugs.push_back({id, smiles[d]});
    const auto c = chem::molecule_counts(chem::parse_smiles(smiles[d]));
    const double size = (static_cast<double>(c.atoms) - 20.0) / 10.0;
    const double arom = static_cast<double>(c.aromatic_atoms) / static_cast<double>(std::max<std::size_t>(c.atoms, 1));
    drug_term.push_back(std::tanh(size) + 1.5 * (arom - 0.4));
  }

  std::vector<dataset::ProteinRecord> proteins;
  std::vector<double> protein_term;
  fs::create_directories(dir / "structures");
  for (std::size_t p = 0; p < num_proteins; ++p) {
    const std::size_t len = min_length + rng.below(max_length - min_length + 1);
    const auto seq = random_sequence(len, seed * 1000 + p);
    char acc[32];
    std::snprintf(acc, sizeof acc, "Q9S%03zu", p);
    proteins.push_back({"PROT" + std::to_string(p), acc, seq});
    write_file_atomic(dir / "structures" / dataset::structure_filename(acc, 4), helix_pdb(seq));
    double hydrophobic = 0.0, charged = 0.0;
    for (char c : seq) {
      hydrophobic += std::string_view("AILMFVW").find(c) != std::string_view::npos;
      charged += std::string_view("DEKR").find(c) != std::string_view::npos;
    }
    protein_term.push_back(4.0 * (hydrophobic / static_cast<double>(len) - 0.35) -
                           2.0 * (charged / static_cast<double>(len) - 0.2) + rng.uniform() * 2.0 - 1.0);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t d = 0; d < num_drugs; ++d)
    for (std::size_t p = 0; p < num_proteins; ++p) pairs.emplace_back(d, p);
  const auto perm = dataset::seeded_permutation(pairs.size(), seed + 1);
  num_examples = std::min(num_examples, pairs.size());
  std::vector<std::size_t> chosen(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(num_examples));
  std::sort(chosen.begin(), chosen.end());

  std::vector<double> raw;
  for (std::size_t k : chosen) {
    const auto [d, p] = pairs[k];
    const double a = drug_term[d], b = protein_term[p];
    raw.push_back(0.6 * a + 0.5 * b + 0.35 * a * b + 0.2 * std::sin(3.0 * a - 2.0 * b));
  }
  // rescale to the spread of filtered KIBA scores (mean 11.7, sd 0.8)
  double mean = 0.0, var = 0.0;
  for (double v : raw) mean += v;
  mean /= static_cast<double>(raw.size());
  for (double v : raw) var += (v - mean) * (v - mean);
  const double sd = raw.size() > 1 ? std::sqrt(var / static_cast<double>(raw.size())) : 0.0;
  std::vector<dataset::AffinityExample> examples;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const auto [d, p] = pairs[chosen[i]];
    const double z = sd > 0 ? (raw[i] - mean) / sd : 0.0;
    examples.push_back({drugs[d].drug_id, proteins[p].protein_id, 11.7 + 0.8 * z});
  }

  // keep only records that are referenced
  dataset::Dataset full(drugs, proteins, examples);
  std::vector<std::size_t> all(examples.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto ds = full.subset(all);
  dataset::write_dataset_dir(ds, dir);
  return {ds, dir, dir / "structures"};
}

}  // namespace dtagraph::test
