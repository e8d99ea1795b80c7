#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dtagraph/drug_features.hpp"
#include "dtagraph/error.hpp"
#include "support/fixtures.hpp"

using namespace dtagraph;
using namespace dtagraph::chem;

namespace {

std::size_t bits_set(const FeatureVector& v) {
  return static_cast<std::size_t>(std::count(v.values().begin(), v.values().end(), 1.0));
}

// Independent walker: every simple path of 1..max_bonds bonds, written as a
// string of element/aromatic and bond-order tokens, direction-normalized.
std::set<std::string> brute_force_path_classes(const Molecule& m, int max_bonds) {
  const auto& atoms = m.atoms();
  const auto& bonds = m.bonds();
  auto atom_str = [&](int a) { return atoms[a].symbol + (atoms[a].is_aromatic ? "~ar" : ""); };
  auto bond_between = [&](int a, int b) -> int {
    for (const auto& bd : bonds)
      if ((bd.begin == a && bd.end == b) || (bd.begin == b && bd.end == a)) return static_cast<int>(bd.order);
    return -1;
  };
  std::set<std::string> classes;
  std::vector<std::vector<int>> frontier;
  for (int a = 0; a < static_cast<int>(atoms.size()); ++a) frontier.push_back({a});
  for (int len = 1; len <= max_bonds; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& path : frontier) {
      for (int b = 0; b < static_cast<int>(atoms.size()); ++b) {
        if (bond_between(path.back(), b) < 0 || std::find(path.begin(), path.end(), b) != path.end()) continue;
        auto p = path;
        p.push_back(b);
        std::vector<std::string> fwd;
        for (std::size_t i = 0; i < p.size(); ++i) {
          fwd.push_back(atom_str(p[i]));
          if (i + 1 < p.size()) fwd.push_back("b" + std::to_string(bond_between(p[i], p[i + 1])));
        }
        std::vector<std::string> rev(fwd.rbegin(), fwd.rend());
        const auto& key = std::min(fwd, rev);
        std::string joined;
        for (const auto& t : key) joined += t + "|";
        classes.insert(joined);
        next.push_back(std::move(p));
      }
    }
    frontier = std::move(next);
  }
  return classes;
}

}  // namespace

TEST(DrugGraph, MethaneHydrogenOneHot) {
  const auto g = build_drug_graph(parse_smiles("C"));
  ASSERT_EQ(g.node_features.rows(), 1);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(g.node_features(0, atom_column::kHydrogens + 4), 1.0);
  EXPECT_EQ(g.node_features.row(0).segment(atom_column::kHydrogens, kCountBuckets).sum(), 1.0);
}

TEST(DrugGraph, Cyclopropane) {
  const auto g = build_drug_graph(parse_smiles("C1CC1"));
  EXPECT_EQ(g.node_features.rows(), 3);
  EXPECT_EQ(g.edges.size(), 3u);
}

TEST(DrugGraph, WidthAndSymbolSlots) {
  const auto g = build_drug_graph(parse_smiles("OC[Se]C[Ru]"));
  ASSERT_EQ(g.node_features.cols(), 78);
  EXPECT_EQ(g.node_features(0, 2), 1.0);   // O
  EXPECT_EQ(g.node_features(2, 26), 1.0);  // Se
  EXPECT_EQ(g.node_features(4, 43), 1.0);  // not in the list
}

TEST(DrugGraph, OneHotBlocksAndEdgesMirrorBonds) {
  for (const auto& entry : test::load_json("rdkit_oracle.json")) {
    const std::string smi = entry["smiles"];
    SCOPED_TRACE(smi);
    const auto m = parse_smiles(smi);
    const auto g = build_drug_graph(m);
    ASSERT_EQ(g.node_features.rows(), static_cast<Eigen::Index>(m.num_atoms()));
    ASSERT_EQ(g.edges.size(), m.num_bonds());
    std::vector<int> degree(m.num_atoms(), 0);
    for (auto [a, b] : g.edges) {
      EXPECT_LT(a, b);
      ++degree[a];
      ++degree[b];
    }
    for (Eigen::Index i = 0; i < g.node_features.rows(); ++i) {
      const auto row = g.node_features.row(i);
      EXPECT_EQ(row.segment(atom_column::kSymbol, 44).sum(), 1.0);
      EXPECT_EQ(row.segment(atom_column::kDegree, 11).sum(), 1.0);
      EXPECT_EQ(row.segment(atom_column::kHydrogens, 11).sum(), 1.0);
      EXPECT_EQ(row.segment(atom_column::kImplicitValence, 11).sum(), 1.0);
      EXPECT_EQ(row(atom_column::kDegree + degree[i]), 1.0);
      EXPECT_EQ(degree[i], m.atoms()[i].degree);
      EXPECT_EQ(row(atom_column::kAromatic), m.atoms()[i].is_aromatic ? 1.0 : 0.0);
    }
    EXPECT_EQ(g.clamped_counts, 0u);
  }
}

TEST(Morgan, MethaneSetsOneBit) { EXPECT_EQ(bits_set(morgan_fingerprint(parse_smiles("C"))), 1u); }

TEST(Morgan, EthaneSetsTwoBits) { EXPECT_EQ(bits_set(morgan_fingerprint(parse_smiles("CC"))), 2u); }

TEST(Morgan, Deterministic) {
  const auto m = parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
  EXPECT_EQ(morgan_fingerprint(m), morgan_fingerprint(m));
}

TEST(Morgan, BinaryOfWidth1024) {
  const auto fp = morgan_fingerprint(parse_smiles("c1ccc2ccccc2c1"));
  ASSERT_EQ(fp.size(), 1024u);
  for (double v : fp.values()) EXPECT_TRUE(v == 0.0 || v == 1.0);
}

// Unfolded environment identifiers agree with the reference toolkit.
TEST(Morgan, IdentifiersMatchReference) {
  for (const auto& entry : test::load_json("rdkit_oracle.json")) {
    const std::string smi = entry["smiles"];
    SCOPED_TRACE(smi);
    const auto m = parse_smiles(smi);
    EXPECT_EQ(morgan_identifiers(m, 0).size(), entry["morgan_r0_count"].get<std::size_t>());
    EXPECT_EQ(morgan_identifiers(m, 1).size(), entry["morgan_r1_count"].get<std::size_t>());
    EXPECT_EQ(morgan_identifiers(m, 2), entry["morgan_r2_ids"].get<std::vector<std::uint32_t>>());
  }
}

TEST(Daylight, SingleAtomIsEmpty) {
  EXPECT_EQ(bits_set(daylight_fingerprint(parse_smiles("C"))), 0u);
  EXPECT_EQ(bits_set(daylight_fingerprint(parse_smiles("[Na+]"))), 0u);
}

TEST(Daylight, EthaneHasOnePathClass) {
  const auto m = parse_smiles("CC");
  EXPECT_EQ(path_identifiers(m).size(), 1u);
  EXPECT_GE(bits_set(daylight_fingerprint(m)), 1u);
}

TEST(Daylight, PathClassesMatchBruteForceWalker) {
  for (const auto& smi : test::druglike_smiles()) {
    SCOPED_TRACE(smi);
    const auto m = parse_smiles(smi);
    for (int max_path : {1, 3, 7}) {
      EXPECT_EQ(path_identifiers(m, max_path).size(), brute_force_path_classes(m, max_path).size())
          << "max_path " << max_path;
    }
  }
}

TEST(Daylight, BitCountMonotoneUnderGrowth) {
  const std::vector<std::string> series = {"C",         "CC",          "CCO",           "CCOC",
                                           "CCOCC",     "CCOCCN",      "CCOCCNC=O",     "CCOCCNC(=O)C#N",
                                           "CCOCCNC(=O)C#N.Cl", "CCOCCNC(=O)c1ccccc1"};
  std::size_t previous = 0;
  std::set<std::size_t> previous_bits;
  for (const auto& smi : series) {
    SCOPED_TRACE(smi);
    const auto fp = daylight_fingerprint(parse_smiles(smi));
    std::set<std::size_t> bits;
    for (std::size_t i = 0; i < fp.size(); ++i)
      if (fp[i] == 1.0) bits.insert(i);
    EXPECT_GE(bits.size(), previous);
    previous = bits.size();
    previous_bits = bits;
  }
}

TEST(DrugFingerprint, ConcatenationAndSlices) {
  const auto m = parse_smiles("Cc1ccc(NC(=O)c2ccc(CN3CCN(C)CC3)cc2)cc1Nc1nccc(-c2cccnc2)n1");
  const auto fp = drug_fingerprint(m);
  ASSERT_EQ(fp.size(), 3072u);
  EXPECT_EQ(fp.slice(0, FeatureKind::MORGAN), morgan_fingerprint(m));
  EXPECT_EQ(fp.slice(1024, FeatureKind::DAYLIGHT), daylight_fingerprint(m));
}

TEST(DrugFingerprint, MethaneHasOneBitTotal) { EXPECT_EQ(bits_set(drug_fingerprint(parse_smiles("C"))), 1u); }

TEST(DrugFingerprint, InvariantToSmilesRewriting) {
  const auto lines = test::load_lines("equivalent_smiles.tsv");
  ASSERT_EQ(lines.size(), 20u);
  for (const auto& line : lines) {
    const auto tab = line.find('\t');
    const auto a = parse_smiles(line.substr(0, tab)), b = parse_smiles(line.substr(tab + 1));
    SCOPED_TRACE(line);
    EXPECT_EQ(morgan_identifiers(a), morgan_identifiers(b));
    EXPECT_EQ(drug_fingerprint(a), drug_fingerprint(b));
  }
}

TEST(MoleculeCounts, MatchReference) {
  for (const auto& entry : test::load_json("rdkit_oracle.json")) {
    const std::string smi = entry["smiles"];
    SCOPED_TRACE(smi);
    const auto c = molecule_counts(parse_smiles(smi));
    EXPECT_EQ(c.atoms, entry["heavy_atoms"].get<std::size_t>());
    EXPECT_EQ(c.aromatic_atoms, entry["aromatic_atoms"].get<std::size_t>());
    EXPECT_EQ(c.bonds, entry["num_bonds"].get<std::size_t>());
  }
}

TEST(Fingerprints, RejectNonDefaultWidths) {
  const auto m = parse_smiles("CC");
  EXPECT_THROW(morgan_fingerprint(m, 2, 2048), InvalidArgument);
  EXPECT_THROW(daylight_fingerprint(m, 7, 1024), InvalidArgument);
}
