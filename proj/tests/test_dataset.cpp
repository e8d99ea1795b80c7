#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "dtagraph/dataset.hpp"
#include "dtagraph/error.hpp"
#include "dtagraph/structure_fetch.hpp"
#include "support/fixtures.hpp"

using namespace dtagraph;
using namespace dtagraph::dataset;
namespace fs = std::filesystem;

namespace {

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct ToyFiles {
  test::TempDir dir;
  fs::path drugs = dir / "drugs.tsv", proteins = dir / "proteins.tsv", affinities = dir / "affinities.tsv";
  ToyFiles() {
    write(drugs, "drug_id\tsmiles\nCHEMBL1\tCCO\nCHEMBL2\tc1ccccc1\n");
    write(proteins, "protein_id\tuniprot\tsequence\nP1\tP00001\tMKTAYIAKQR\n");
    write(affinities, "drug_id\tprotein_id\tkiba_score\nCHEMBL1\tP1\t11.1\nCHEMBL2\tP1\t12.5\n");
  }
};

// Bipartite dataset with a chosen degree for each drug and protein pairing.
Dataset random_dataset(std::uint64_t seed, std::size_t nd, std::size_t np, double density) {
  SplitMix64 rng(seed);
  std::vector<DrugRecord> drugs;
  std::vector<ProteinRecord> proteins;
  std::vector<AffinityExample> examples;
  for (std::size_t i = 0; i < nd; ++i) drugs.push_back({"D" + std::to_string(i), "CC"});
  for (std::size_t j = 0; j < np; ++j) proteins.push_back({"P" + std::to_string(j), "A" + std::to_string(j), "MKV"});
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < np; ++j)
      if (rng.uniform() < density * (0.3 + 1.4 * rng.uniform()))
        examples.push_back({drugs[i].drug_id, proteins[j].protein_id, 10 + rng.uniform() * 4});
  return Dataset(drugs, proteins, examples);
}

std::pair<std::map<std::string, int>, std::map<std::string, int>> counts(const Dataset& ds) {
  std::map<std::string, int> d, p;
  for (const auto& e : ds.examples()) {
    ++d[e.drug_id];
    ++p[e.protein_id];
  }
  return {d, p};
}

Dataset numbered_dataset(std::size_t n) {
  std::vector<AffinityExample> ex;
  std::vector<DrugRecord> drugs;
  for (std::size_t i = 0; i < n; ++i) {
    drugs.push_back({"D" + std::to_string(i), "C"});
    ex.push_back({"D" + std::to_string(i), "P", static_cast<double>(i)});
  }
  return Dataset(drugs, {{"P", "Q1", "MK"}}, ex);
}

}  // namespace

TEST(LoadKiba, ToyFiles) {
  ToyFiles f;
  const auto ds = load_kiba(f.affinities, f.drugs, f.proteins);
  EXPECT_EQ(ds.drugs().size(), 2u);
  EXPECT_EQ(ds.proteins().size(), 1u);
  ASSERT_EQ(ds.examples().size(), 2u);
  EXPECT_EQ(ds.examples()[1].kiba_score, 12.5);
  EXPECT_EQ(ds.drug("CHEMBL2").smiles, "c1ccccc1");
  EXPECT_EQ(ds.protein("P1").uniprot_accession, "P00001");
}

TEST(LoadKiba, UnknownDrugIsIntegrityError) {
  ToyFiles f;
  write(f.affinities, "drug_id\tprotein_id\tkiba_score\nCHEMBL1\tP1\t11.1\nCHEMBL9\tP1\t12.5\n");
  EXPECT_THROW(load_kiba(f.affinities, f.drugs, f.proteins), IntegrityError);
}

TEST(LoadKiba, MalformedRowReportsLine) {
  ToyFiles f;
  write(f.affinities, "drug_id\tprotein_id\tkiba_score\nCHEMBL1\tP1\t11.1\nCHEMBL2\tP1\n");
  try {
    load_kiba(f.affinities, f.drugs, f.proteins);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write(f.affinities, "drug_id\tprotein_id\tkiba_score\nCHEMBL1\tP1\tnope\n");
  EXPECT_THROW(load_kiba(f.affinities, f.drugs, f.proteins), ParseError);
}

TEST(LoadKiba, WrongHeaderAndMissingFile) {
  ToyFiles f;
  write(f.drugs, "id\tsmiles\nCHEMBL1\tCCO\n");
  EXPECT_THROW(load_kiba(f.affinities, f.drugs, f.proteins), ParseError);
  ToyFiles g;
  EXPECT_THROW(load_kiba(g.dir / "absent.tsv", g.drugs, g.proteins), IoError);
}

TEST(DatasetInvariants, RejectsDuplicatesAndBadValues) {
  const std::vector<ProteinRecord> prot{{"P", "Q", "MKV"}};
  EXPECT_THROW(Dataset({{"D", "C"}, {"D", "CC"}}, prot, {}), IntegrityError);
  EXPECT_THROW(Dataset({{"D", "C"}}, prot, {{"D", "P", 1}, {"D", "P", 2}}), IntegrityError);
  EXPECT_THROW(Dataset({{"D", ""}}, prot, {}), IntegrityError);
  EXPECT_THROW(Dataset({{"D", "C"}}, {{"P", "Q", "MK1"}}, {}), IntegrityError);
  EXPECT_THROW(Dataset({{"D", "C"}}, prot, {{"D", "P", std::nan("")}}), IntegrityError);
  EXPECT_NO_THROW(Dataset({{"D", "C"}}, {{"P", "Q", "MKXV"}}, {{"D", "P", 0.0}}));
}

TEST(Filter, NineInteractionDrugRemoved) {
  std::vector<DrugRecord> drugs;
  std::vector<AffinityExample> ex;
  for (int i = 0; i < 10; ++i) {
    drugs.push_back({"D" + std::to_string(i), "C"});
    for (int j = 0; j < 10; ++j) ex.push_back({drugs.back().drug_id, "P" + std::to_string(j), 11.0});
  }
  drugs.push_back({"X", "CC"});
  for (int j = 0; j < 9; ++j) ex.push_back({"X", "P" + std::to_string(j), 11.0});
  std::vector<ProteinRecord> prot;
  for (int j = 0; j < 10; ++j) prot.push_back({"P" + std::to_string(j), "Q", "MK"});
  const auto out = filter_min_interactions(Dataset(drugs, prot, ex), 10);
  EXPECT_FALSE(out.has_drug("X"));
  EXPECT_EQ(out.drugs().size(), 10u);
  EXPECT_EQ(out.proteins().size(), 10u);
  EXPECT_EQ(out.examples().size(), 100u);
}

TEST(Filter, IdentityAtMinOne) {
  const auto ds = random_dataset(3, 30, 20, 0.3);
  std::vector<std::size_t> all(ds.examples().size());
  std::iota(all.begin(), all.end(), 0);
  const auto used = ds.subset(all);  // drops orphans
  EXPECT_EQ(filter_min_interactions(used, 1), used);
}

TEST(Filter, FixedPointIdempotentAndRecountHolds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto ds = random_dataset(seed, 60, 25, 0.25);
    for (int m : {2, 5, 8}) {
      Dataset once;
      try {
        once = filter_min_interactions(ds, m);
      } catch (const InvalidArgument&) {
        continue;
      }
      EXPECT_EQ(filter_min_interactions(once, m), once);
      const auto [d, p] = counts(once);
      for (const auto& [id, c] : d) EXPECT_GE(c, m);
      for (const auto& [id, c] : p) EXPECT_GE(c, m);
      EXPECT_EQ(d.size(), once.drugs().size());
      EXPECT_EQ(p.size(), once.proteins().size());
    }
  }
}

TEST(Filter, CascadeRequiresIteration) {
  // D0 has 2 examples, one to P1. P1 has 2 examples; removing D1 (1 example)
  // drops P1 below 2, which in turn drops D0 to 1.
  std::vector<DrugRecord> drugs{{"D0", "C"}, {"D1", "C"}, {"D2", "C"}, {"D3", "C"}};
  std::vector<ProteinRecord> prot{{"P0", "Q", "MK"}, {"P1", "Q", "MK"}, {"P2", "Q", "MK"}};
  std::vector<AffinityExample> ex{{"D0", "P0", 1}, {"D0", "P1", 1}, {"D1", "P1", 1},
                                  {"D2", "P0", 1}, {"D2", "P2", 1}, {"D3", "P2", 1}, {"D3", "P0", 1}};
  const auto out = filter_min_interactions(Dataset(drugs, prot, ex), 2);
  EXPECT_FALSE(out.has_protein("P1"));
  EXPECT_FALSE(out.has_drug("D0"));
  EXPECT_FALSE(out.has_drug("D1"));
  EXPECT_EQ(out.examples().size(), 4u);
}

TEST(Filter, EmptyResultAndBadThreshold) {
  const auto ds = random_dataset(1, 5, 5, 0.3);
  EXPECT_THROW(filter_min_interactions(ds, 1000), InvalidArgument);
  EXPECT_THROW(filter_min_interactions(ds, 0), InvalidArgument);
}

TEST(Split, HundredExamplesGiveSeventeenTest) {
  const auto ds = numbered_dataset(100);
  const auto s = split_dataset(ds, {42, 1.0 / 6.0});
  EXPECT_EQ(s.test.examples().size(), 17u);
  EXPECT_EQ(s.train.examples().size(), 83u);
}

TEST(Split, RoundHalfUp) {
  EXPECT_EQ(split_dataset(numbered_dataset(10), {1, 0.25}).test_indices.size(), 3u);  // 2.5 -> 3
  EXPECT_EQ(split_dataset(numbered_dataset(10), {1, 0.24}).test_indices.size(), 2u);
}

TEST(Split, DisjointExhaustiveDeterministic) {
  const auto ds = numbered_dataset(250);
  const auto a = split_dataset(ds, {9, 0.2}), b = split_dataset(ds, {9, 0.2});
  EXPECT_EQ(a.test_indices, b.test_indices);
  EXPECT_EQ(a.train, b.train);
  std::set<std::size_t> all(a.train_indices.begin(), a.train_indices.end());
  for (auto i : a.test_indices) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 250u);
  EXPECT_TRUE(std::is_sorted(a.test_indices.begin(), a.test_indices.end()));
  for (std::size_t k = 0; k < a.test_indices.size(); ++k)
    EXPECT_EQ(a.test.examples()[k], ds.examples()[a.test_indices[k]]);
}

TEST(Split, DifferentSeedsGiveDifferentMembership) {
  const auto ds = numbered_dataset(100);
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) seen.insert(split_dataset(ds, {seed, 1.0 / 6.0}).test_indices);
  EXPECT_EQ(seen.size(), 20u);
}

TEST(Split, Errors) {
  const auto ds = numbered_dataset(10);
  EXPECT_THROW(split_dataset(ds, {1, 0.0}), InvalidArgument);
  EXPECT_THROW(split_dataset(ds, {1, 1.0}), InvalidArgument);
  EXPECT_THROW(split_dataset(Dataset(), {1, 0.5}), InvalidArgument);
}

TEST(SeededPermutation, IsPermutationAndSeedDependent) {
  const auto a = seeded_permutation(1000, 5), b = seeded_permutation(1000, 5), c = seeded_permutation(1000, 6);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
}

TEST(SplitMix64, ReferenceSequence) {
  // Reference values for seed 1234567 from the published generator.
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ull);
  EXPECT_EQ(rng.next(), 3203168211198807973ull);
  EXPECT_EQ(rng.next(), 9817491932198370423ull);
}

TEST(DatasetDir, RoundTrip) {
  test::TempDir t;
  const auto fx = test::make_synthetic_kiba(t / "kiba", 4, 10, 30);
  const auto loaded = load_dataset_dir(fx.dir);
  EXPECT_EQ(loaded, fx.dataset);
  write_dataset_dir(loaded, t / "copy");
  EXPECT_EQ(load_dataset_dir(t / "copy"), loaded);
  for (const char* f : {kDrugsFile, kProteinsFile, kAffinitiesFile}) EXPECT_EQ(read(fx.dir / f), read(t / "copy" / f));
}

TEST(Subset, KeepsOnlyReferencedRecords) {
  const auto ds = random_dataset(4, 20, 10, 0.4);
  const auto sub = ds.subset({0, 1, 2});
  EXPECT_EQ(sub.examples().size(), 3u);
  for (const auto& d : sub.drugs())
    EXPECT_TRUE(std::any_of(sub.examples().begin(), sub.examples().end(),
                            [&](const auto& e) { return e.drug_id == d.drug_id; }));
  EXPECT_THROW(ds.subset({ds.examples().size()}), InvalidArgument);
}

TEST(Bundle, OneProteinListsFourFiles) {
  test::TempDir t;
  const auto fx = test::make_synthetic_kiba(t / "kiba", 1, 3, 3);
  const auto manifest = export_curated_bundle(fx.dataset, fx.structure_dir, t / "bundle");
  const auto entries = read_manifest(manifest);
  ASSERT_EQ(entries.size(), 4u);
  for (const auto& e : entries) {
    EXPECT_TRUE(fs::exists(t / "bundle" / e.filename)) << e.filename;
    EXPECT_EQ(e.size_bytes, fs::file_size(t / "bundle" / e.filename));
    EXPECT_EQ(e.sha256.size(), 64u);
  }
  EXPECT_TRUE(std::any_of(entries.begin(), entries.end(),
                          [](const auto& e) { return e.filename.find("model_v") != std::string::npos; }));
  EXPECT_EQ(load_dataset_dir(t / "bundle"), fx.dataset);
}

TEST(Bundle, KnownChecksum) {
  test::TempDir t;
  const auto fx = test::make_synthetic_kiba(t / "kiba", 1, 3, 3);
  write_dataset_dir(Dataset({{"D", "C"}}, {{"P9", fx.dataset.proteins()[0].uniprot_accession, "MK"}}, {{"D", "P9", 1}}),
                    t / "tiny");
  const auto entries = read_manifest(export_curated_bundle(load_dataset_dir(t / "tiny"), fx.structure_dir, t / "b"));
  const auto it = std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.filename == "drugs.tsv"; });
  ASSERT_NE(it, entries.end());
  // sha256 of "drug_id\tsmiles\nD\tC\n"
  EXPECT_EQ(it->sha256, "55a24fb89db0187da27a8569059a523abef8996cf341155a1eec3bd9d784d76d");
}

TEST(Bundle, MissingStructureNamesProtein) {
  test::TempDir t;
  const auto fx = test::make_synthetic_kiba(t / "kiba", 2, 4, 6);
  const auto victim = fx.dataset.proteins()[1];
  fs::remove(*cached_structure(victim.uniprot_accession, fx.structure_dir));
  try {
    export_curated_bundle(fx.dataset, fx.structure_dir, t / "bundle");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(victim.protein_id), std::string::npos);
  }
}

TEST(Bundle, ReexportIsIdentical) {
  test::TempDir t;
  const auto fx = test::make_synthetic_kiba(t / "kiba", 3, 6, 12);
  const auto a = read_manifest(export_curated_bundle(fx.dataset, fx.structure_dir, t / "a"));
  const auto b = read_manifest(export_curated_bundle(fx.dataset, fx.structure_dir, t / "b"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(read(t / "a" / kManifestFile), read(t / "b" / kManifestFile));
}
