#include "dtagraph/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dtagraph/error.hpp"
#include "dtagraph/hashing.hpp"
#include "dtagraph/protein_features.hpp"
#include "dtagraph/structure_fetch.hpp"

namespace dtagraph::dataset {

namespace fs = std::filesystem;

namespace {

std::string pair_key(const std::string& drug, const std::string& protein) { return drug + '\t' + protein; }

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Calls `row(fields, line_no)` for each data row after checking the header.
template <typename RowFn>
void read_tsv(const fs::path& path, std::string_view expected_header, RowFn row) {
  if (!fs::exists(path)) throw IoError("missing file '" + path.string() + "'");
  const std::string text = read_file(path);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  const std::size_t columns = split_tabs(expected_header).size();
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != expected_header) {
        throw ParseError(path.filename().string() + ": expected header '" + std::string(expected_header) + "'",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != columns) {
      throw ParseError(path.filename().string() + ": expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (auto f : fields) {
      if (f.empty()) throw ParseError(path.filename().string() + ": empty field", line_no);
    }
    row(fields, line_no);
  }
  if (!header_seen) throw ParseError(path.filename().string() + ": empty file", 1);
}

std::string format_score(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset::Dataset(std::vector<DrugRecord> drugs, std::vector<ProteinRecord> proteins,
                 std::vector<AffinityExample> examples)
    : drugs_(std::move(drugs)), proteins_(std::move(proteins)), examples_(std::move(examples)) {
  for (std::size_t i = 0; i < drugs_.size(); ++i) {
    const auto& d = drugs_[i];
    if (d.drug_id.empty()) throw IntegrityError("drug with empty id");
    if (d.smiles.empty()) throw IntegrityError("drug '" + d.drug_id + "' has empty SMILES");
    if (!drug_index_.emplace(d.drug_id, i).second) throw IntegrityError("duplicate drug_id '" + d.drug_id + "'");
  }
  for (std::size_t i = 0; i < proteins_.size(); ++i) {
    const auto& p = proteins_[i];
    if (p.protein_id.empty()) throw IntegrityError("protein with empty id");
    if (p.sequence.empty()) throw IntegrityError("protein '" + p.protein_id + "' has empty sequence");
    try {
      protein::sanitize_sequence(p.sequence);
    } catch (const InvalidArgument& e) {
      throw IntegrityError("protein '" + p.protein_id + "': " + e.what());
    }
    if (!protein_index_.emplace(p.protein_id, i).second) {
      throw IntegrityError("duplicate protein_id '" + p.protein_id + "'");
    }
  }
  std::set<std::string> pairs;
  for (const auto& e : examples_) {
    if (!drug_index_.contains(e.drug_id)) throw IntegrityError("example references unknown drug_id '" + e.drug_id + "'");
    if (!protein_index_.contains(e.protein_id)) {
      throw IntegrityError("example references unknown protein_id '" + e.protein_id + "'");
    }
    if (!std::isfinite(e.kiba_score)) throw IntegrityError("non-finite score for " + e.drug_id + "/" + e.protein_id);
    if (!pairs.insert(pair_key(e.drug_id, e.protein_id)).second) {
      throw IntegrityError("duplicate pair " + e.drug_id + "/" + e.protein_id);
    }
  }
}

const DrugRecord& Dataset::drug(const std::string& id) const {
  auto it = drug_index_.find(id);
  if (it == drug_index_.end()) throw IntegrityError("unknown drug_id '" + id + "'");
  return drugs_[it->second];
}

const ProteinRecord& Dataset::protein(const std::string& id) const {
  auto it = protein_index_.find(id);
  if (it == protein_index_.end()) throw IntegrityError("unknown protein_id '" + id + "'");
  return proteins_[it->second];
}

Dataset Dataset::subset(const std::vector<std::size_t>& example_indices) const {
  std::vector<AffinityExample> examples;
  std::set<std::string> drug_ids, protein_ids;
  for (auto i : example_indices) {
    if (i >= examples_.size()) throw InvalidArgument("example index out of range");
    examples.push_back(examples_[i]);
    drug_ids.insert(examples_[i].drug_id);
    protein_ids.insert(examples_[i].protein_id);
  }
  std::vector<DrugRecord> drugs;
  for (const auto& d : drugs_) {
    if (drug_ids.contains(d.drug_id)) drugs.push_back(d);
  }
  std::vector<ProteinRecord> proteins;
  for (const auto& p : proteins_) {
    if (protein_ids.contains(p.protein_id)) proteins.push_back(p);
  }
  return Dataset(std::move(drugs), std::move(proteins), std::move(examples));
}

std::vector<DrugRecord> load_drugs(const fs::path& drugs_path) {
  std::vector<DrugRecord> drugs;
  read_tsv(drugs_path, "drug_id\tsmiles", [&](const auto& f, std::size_t) {
    drugs.push_back({std::string(f[0]), std::string(f[1])});
  });
  return drugs;
}

std::vector<ProteinRecord> load_proteins(const fs::path& proteins_path) {
  std::vector<ProteinRecord> proteins;
  read_tsv(proteins_path, "protein_id\tuniprot\tsequence", [&](const auto& f, std::size_t) {
    proteins.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2])});
  });
  return proteins;
}

Dataset load_kiba(const fs::path& affinity_path, const fs::path& drugs_path, const fs::path& proteins_path) {
  auto drugs = load_drugs(drugs_path);
  auto proteins = load_proteins(proteins_path);
  std::vector<AffinityExample> examples;
  read_tsv(affinity_path, "drug_id\tprotein_id\tkiba_score", [&](const auto& f, std::size_t line) {
    double score = 0.0;
    const auto text = f[2];
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), score);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(score)) {
      throw ParseError(affinity_path.filename().string() + ": bad kiba_score '" + std::string(text) + "'", line);
    }
    examples.push_back({std::string(f[0]), std::string(f[1]), score});
  });
  return Dataset(std::move(drugs), std::move(proteins), std::move(examples));
}

Dataset load_dataset_dir(const fs::path& dir) {
  return load_kiba(dir / kAffinitiesFile, dir / kDrugsFile, dir / kProteinsFile);
}

void write_dataset_dir(const Dataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  std::string drugs = "drug_id\tsmiles\n";
  for (const auto& d : ds.drugs()) drugs += d.drug_id + '\t' + d.smiles + '\n';
  std::string proteins = "protein_id\tuniprot\tsequence\n";
  for (const auto& p : ds.proteins()) proteins += p.protein_id + '\t' + p.uniprot_accession + '\t' + p.sequence + '\n';
  std::string affinities = "drug_id\tprotein_id\tkiba_score\n";
  for (const auto& e : ds.examples()) {
    affinities += e.drug_id + '\t' + e.protein_id + '\t' + format_score(e.kiba_score) + '\n';
  }
  write_file_atomic(dir / kDrugsFile, drugs);
  write_file_atomic(dir / kProteinsFile, proteins);
  write_file_atomic(dir / kAffinitiesFile, affinities);
}

Dataset filter_min_interactions(const Dataset& ds, int min_count) {
  if (min_count < 1) throw InvalidArgument("min_count must be >= 1");
  std::vector<std::size_t> kept(ds.examples().size());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
  while (true) {
    std::unordered_map<std::string, int> drug_counts, protein_counts;
    for (auto i : kept) {
      ++drug_counts[ds.examples()[i].drug_id];
      ++protein_counts[ds.examples()[i].protein_id];
    }
    std::vector<std::size_t> next;
    for (auto i : kept) {
      const auto& e = ds.examples()[i];
      if (drug_counts[e.drug_id] >= min_count && protein_counts[e.protein_id] >= min_count) next.push_back(i);
    }
    if (next.size() == kept.size()) break;
    kept = std::move(next);
  }
  if (kept.empty()) {
    throw InvalidArgument("filter_min_interactions: no examples survive min_count=" + std::to_string(min_count));
  }
  return ds.subset(kept);
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

Split split_dataset(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw InvalidArgument("test_fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.examples().size();
  if (n == 0) throw InvalidArgument("cannot split an empty dataset");
  const auto test_size = static_cast<std::size_t>(std::floor(spec.test_fraction * static_cast<double>(n) + 0.5));
  auto perm = seeded_permutation(n, spec.seed);
  Split split;
  split.test_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(test_size));
  split.train_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(test_size), perm.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  std::sort(split.train_indices.begin(), split.train_indices.end());
  split.train = ds.subset(split.train_indices);
  split.test = ds.subset(split.test_indices);
  return split;
}

fs::path export_curated_bundle(const Dataset& ds, const fs::path& structure_dir, const fs::path& out_dir) {
  std::vector<std::pair<std::string, fs::path>> structures;
  for (const auto& p : ds.proteins()) {
    auto path = cached_structure(p.uniprot_accession, structure_dir);
    if (!path) {
      throw IoError("missing structure file for protein '" + p.protein_id + "' (accession " +
                    p.uniprot_accession + ")");
    }
    structures.emplace_back(p.protein_id, *path);
  }

  fs::create_directories(out_dir / "structures");
  write_dataset_dir(ds, out_dir);
  std::vector<std::string> files = {kDrugsFile, kProteinsFile, kAffinitiesFile};
  std::set<std::string> copied;
  for (const auto& [protein_id, src] : structures) {
    const std::string rel = "structures/" + src.filename().string();
    if (!copied.insert(rel).second) continue;
    write_file_atomic(out_dir / rel, read_file(src));
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());

  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& rel : files) {
    const fs::path full = out_dir / rel;
    manifest.push_back({{"filename", rel}, {"sha256", sha256_file(full)}, {"size_bytes", fs::file_size(full)}});
  }
  const fs::path manifest_path = out_dir / kManifestFile;
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

std::vector<ManifestEntry> read_manifest(const fs::path& manifest_path) {
  const auto j = nlohmann::json::parse(read_file(manifest_path));
  std::vector<ManifestEntry> out;
  for (const auto& e : j) {
    out.push_back({e.at("filename").get<std::string>(), e.at("sha256").get<std::string>(),
                   e.at("size_bytes").get<std::uintmax_t>()});
  }
  return out;
}

}  // namespace dtagraph::dataset
