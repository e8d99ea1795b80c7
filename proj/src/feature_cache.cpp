#include "dtagraph/feature_cache.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstring>
#include <exception>
#include <mutex>
#include <sstream>
#include <span>
#include <thread>

#include "dtagraph/error.hpp"
#include "dtagraph/hashing.hpp"
#include "dtagraph/molecule.hpp"
#include "dtagraph/protein_features.hpp"
#include "dtagraph/structure_fetch.hpp"

namespace dtagraph::features {

namespace {

constexpr std::string_view kMagic = "GPFC1";

std::string compute_version() {
  std::ostringstream s;
  s.precision(17);
  s << "features-v1;";
  s << "protein:" << feature_length(FeatureKind::AAC) << ',' << feature_length(FeatureKind::CTRIAD) << ','
    << feature_length(FeatureKind::QSORDER) << ";qso:" << protein::kDefaultQsoWeight << ';';
  for (const auto* table : {&protein::kSchneiderWredeDistance, &protein::kGranthamDistance})
    for (const auto& row : *table)
      for (double v : row) s << v << ',';
  s << "graph:" << structure::kResidueFeatureWidth << ',' << structure::kDefaultContactThreshold << ','
    << structure::kWeightMean << ',' << structure::kWeightStd << ',' << structure::kHydropathyMean << ','
    << structure::kHydropathyStd << ',' << structure::kPkaScale << ',' << structure::kCoordinateScale << ';';
  for (char aa : protein::kAminoAcids) {
    const auto& p = structure::residue_properties(aa);
    s << aa << p.molecular_weight << ',' << p.polar << ',' << p.hydropathy << ',' << p.pka_carboxyl << ','
      << p.pka_amino << ',' << p.pka_side_chain << ';';
  }
  s << "drug:" << chem::kAtomFeatureWidth << ';';
  for (auto sym : chem::kAtomSymbols) s << sym << ',';
  s << "morgan:2,1024,boost-combine;daylight:7,2048,fnv1a";
  return sha256_hex(s.str()).substr(0, 16);
}

std::string cache_key(const std::string& id) {
  const bool safe = !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }) && id != "." && id != "..";
  if (safe) return id;
  std::ostringstream s;
  s << "id-" << std::hex << fnv1a64(id);
  return s.str();
}

class Writer {
 public:
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }
  void str(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void matrix(const Eigen::MatrixXd& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
  }
  void edges(const std::vector<std::pair<int, int>>& e) {
    u64(e.size());
    for (auto [a, b] : e) {
      u64(static_cast<std::uint64_t>(a));
      u64(static_cast<std::uint64_t>(b));
    }
  }
  void vec(std::span<const double> v) {
    u64(v.size());
    for (double x : v) f64(x);
  }
  const std::string& data() const { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string data, std::filesystem::path file) : data_(std::move(data)), file_(std::move(file)) {}
  void bytes(void* p, std::size_t n) {
    if (pos_ + n > data_.size()) throw IoError("truncated feature cache file " + file_.string());
    std::memcpy(p, data_.data() + pos_, n);
    pos_ += n;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, sizeof v);
    return v;
  }
  std::string str() {
    const auto n = u64();
    if (n > data_.size()) throw IoError("corrupt feature cache file " + file_.string());
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  Eigen::MatrixXd matrix() {
    const auto r = u64(), c = u64();
    if (r * c * 8 > data_.size()) throw IoError("corrupt feature cache file " + file_.string());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = f64();
    return m;
  }
  std::vector<std::pair<int, int>> edges() {
    const auto n = u64();
    if (n * 16 > data_.size()) throw IoError("corrupt feature cache file " + file_.string());
    std::vector<std::pair<int, int>> e(n);
    for (auto& [a, b] : e) {
      a = static_cast<int>(u64());
      b = static_cast<int>(u64());
    }
    return e;
  }
  std::vector<double> vec() {
    const auto n = u64();
    if (n * 8 > data_.size()) throw IoError("corrupt feature cache file " + file_.string());
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string data_;
  std::filesystem::path file_;
  std::size_t pos_ = 0;
};

// Returns a reader positioned after the header, or nullopt on a stale entry.
std::optional<Reader> open_entry(const std::filesystem::path& file, char kind, const std::string& id) {
  if (!std::filesystem::exists(file)) return std::nullopt;
  Reader r(read_file(file), file);
  std::string magic(kMagic.size(), '\0');
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) throw IoError("not a feature cache file: " + file.string());
  char k;
  r.bytes(&k, 1);
  if (k != kind) throw IoError("feature cache entry of the wrong kind: " + file.string());
  if (r.str() != featurization_version()) return std::nullopt;
  if (r.str() != id) return std::nullopt;
  return r;
}

Writer begin_entry(char kind, const std::string& id) {
  Writer w;
  w.bytes(kMagic.data(), kMagic.size());
  w.bytes(&kind, 1);
  w.str(featurization_version());
  w.str(id);
  return w;
}

}  // namespace

const std::string& featurization_version() {
  static const std::string version = compute_version();
  return version;
}

ProteinFeatures featurize_protein(const dataset::ProteinRecord& record, std::string_view pdb_text) {
  ProteinFeatures f;
  f.graph = structure::build_protein_graph(structure::parse_structure(pdb_text));
  f.fingerprint = protein::protein_fingerprint(record.sequence);
  f.dropped_residues = protein::sanitize_sequence(record.sequence).dropped;
  return f;
}

DrugFeatures featurize_drug(const dataset::DrugRecord& record) {
  const auto mol = chem::parse_smiles(record.smiles);
  DrugFeatures f;
  f.graph = chem::build_drug_graph(mol);
  f.fingerprint = chem::drug_fingerprint(mol);
  f.counts = chem::molecule_counts(mol);
  return f;
}

std::filesystem::path protein_cache_path(const std::filesystem::path& dir, const std::string& protein_id) {
  return dir / "proteins" / (cache_key(protein_id) + ".bin");
}

std::filesystem::path drug_cache_path(const std::filesystem::path& dir, const std::string& drug_id) {
  return dir / "drugs" / (cache_key(drug_id) + ".bin");
}

void save_protein(const std::filesystem::path& file, const std::string& protein_id, const ProteinFeatures& f) {
  auto w = begin_entry('P', protein_id);
  w.matrix(f.graph.node_features);
  w.edges(f.graph.edges);
  w.u64(static_cast<std::uint64_t>(f.graph.num_residues));
  w.vec(f.fingerprint.values());
  w.u64(f.dropped_residues);
  std::filesystem::create_directories(file.parent_path());
  write_file_atomic(file, w.data());
}

void save_drug(const std::filesystem::path& file, const std::string& drug_id, const DrugFeatures& f) {
  auto w = begin_entry('D', drug_id);
  w.matrix(f.graph.node_features);
  w.edges(f.graph.edges);
  w.u64(f.graph.clamped_counts);
  w.vec(f.fingerprint.values());
  w.u64(f.counts.atoms);
  w.u64(f.counts.aromatic_atoms);
  w.u64(f.counts.bonds);
  std::filesystem::create_directories(file.parent_path());
  write_file_atomic(file, w.data());
}

std::optional<ProteinFeatures> load_protein(const std::filesystem::path& file, const std::string& protein_id) {
  auto r = open_entry(file, 'P', protein_id);
  if (!r) return std::nullopt;
  ProteinFeatures f;
  f.graph.node_features = r->matrix();
  f.graph.edges = r->edges();
  f.graph.num_residues = static_cast<int>(r->u64());
  f.fingerprint = FeatureVector(FeatureKind::PROTEIN_CONCAT, r->vec());
  f.dropped_residues = r->u64();
  if (!r->done() || f.graph.node_features.rows() != f.graph.num_residues)
    throw IoError("corrupt feature cache file " + file.string());
  return f;
}

std::optional<DrugFeatures> load_drug(const std::filesystem::path& file, const std::string& drug_id) {
  auto r = open_entry(file, 'D', drug_id);
  if (!r) return std::nullopt;
  DrugFeatures f;
  f.graph.node_features = r->matrix();
  f.graph.edges = r->edges();
  f.graph.clamped_counts = r->u64();
  f.fingerprint = FeatureVector(FeatureKind::DRUG_CONCAT, r->vec());
  f.counts.atoms = r->u64();
  f.counts.aromatic_atoms = r->u64();
  f.counts.bonds = r->u64();
  if (!r->done()) throw IoError("corrupt feature cache file " + file.string());
  return f;
}

namespace {

// Runs body(i) for i in [0, n) on up to `threads` workers; rethrows the first error.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

FeatureStore featurize_dataset(const dataset::Dataset& ds, const FeaturizeOptions& options, FeaturizeStats* stats) {
  const auto& proteins = ds.proteins();
  const auto& drugs = ds.drugs();
  std::vector<ProteinFeatures> pf(proteins.size());
  std::vector<DrugFeatures> df(drugs.size());
  std::vector<char> p_cached(proteins.size(), 0), d_cached(drugs.size(), 0);

  parallel_for(proteins.size(), options.threads, [&](std::size_t i) {
    const auto& rec = proteins[i];
    if (options.cache_dir) {
      const auto file = protein_cache_path(*options.cache_dir, rec.protein_id);
      if (auto hit = load_protein(file, rec.protein_id)) {
        pf[i] = std::move(*hit);
        p_cached[i] = 1;
        return;
      }
    }
    const auto path = dataset::cached_structure(rec.uniprot_accession, options.structure_dir);
    if (!path)
      throw NotFoundError("no structure file for protein " + rec.protein_id + " (accession " +
                          rec.uniprot_accession + ") in " + options.structure_dir.string());
    try {
      pf[i] = featurize_protein(rec, read_file(*path));
    } catch (const ParseError& e) {
      throw ParseError("protein " + rec.protein_id + ": " + e.what());
    }
    if (options.cache_dir) save_protein(protein_cache_path(*options.cache_dir, rec.protein_id), rec.protein_id, pf[i]);
  });

  parallel_for(drugs.size(), options.threads, [&](std::size_t i) {
    const auto& rec = drugs[i];
    if (options.cache_dir) {
      if (auto hit = load_drug(drug_cache_path(*options.cache_dir, rec.drug_id), rec.drug_id)) {
        df[i] = std::move(*hit);
        d_cached[i] = 1;
        return;
      }
    }
    try {
      df[i] = featurize_drug(rec);
    } catch (const Error& e) {
      throw InvalidArgument("drug " + rec.drug_id + ": " + e.what());
    }
    if (options.cache_dir) save_drug(drug_cache_path(*options.cache_dir, rec.drug_id), rec.drug_id, df[i]);
  });

  FeatureStore store;
  FeaturizeStats s;
  for (std::size_t i = 0; i < proteins.size(); ++i) {
    (p_cached[i] ? s.proteins_cached : s.proteins_computed)++;
    s.dropped_residues += pf[i].dropped_residues;
    store.proteins.emplace(proteins[i].protein_id, std::move(pf[i]));
  }
  for (std::size_t i = 0; i < drugs.size(); ++i) {
    (d_cached[i] ? s.drugs_cached : s.drugs_computed)++;
    s.clamped_counts += df[i].graph.clamped_counts;
    store.drugs.emplace(drugs[i].drug_id, std::move(df[i]));
  }
  if (stats) *stats = s;
  return store;
}

}  // namespace dtagraph::features
