#include "dtagraph/drug_features.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "dtagraph/error.hpp"
#include "dtagraph/protein_graph.hpp"

namespace dtagraph::chem {

namespace {

inline void hash_combine(std::uint32_t& seed, std::uint32_t value) {
  seed ^= value + 0x9e3779b9u + (seed << 6) + (seed >> 2);
}

// Isotope label minus the standard atomic weight, truncated; 0 when unlabeled.
int mass_shift(const MolAtom& a) {
  if (a.isotope == 0) return 0;
  const double weight = structure::element_mass(a.symbol);
  return weight > 0.0 ? static_cast<int>(a.isotope - weight) : 0;
}

std::size_t symbol_slot(std::string_view symbol) {
  for (std::size_t i = 0; i + 1 < kAtomSymbols.size(); ++i) {
    if (kAtomSymbols[i] == symbol) return i;
  }
  return kAtomSymbols.size() - 1;
}

std::size_t bucket(int count, std::size_t& clamped) {
  if (count < 0) throw InvalidArgument("negative atom count feature");
  if (count >= static_cast<int>(kCountBuckets)) {
    ++clamped;
    return kCountBuckets - 1;
  }
  return static_cast<std::size_t>(count);
}

std::vector<double> fold(const std::vector<std::uint32_t>& ids, std::size_t nbits) {
  if (nbits == 0) throw InvalidArgument("fingerprint width must be positive");
  std::vector<double> bits(nbits, 0.0);
  for (auto id : ids) bits[id % nbits] = 1.0;
  return bits;
}

}  // namespace

MoleculeGraph build_drug_graph(const Molecule& m) {
  MoleculeGraph g;
  const auto& atoms = m.atoms();
  g.node_features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(atoms.size()), kAtomFeatureWidth);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    auto row = g.node_features.row(static_cast<Eigen::Index>(i));
    row(atom_column::kSymbol + symbol_slot(a.symbol)) = 1.0;
    row(atom_column::kDegree + bucket(a.degree, g.clamped_counts)) = 1.0;
    row(atom_column::kHydrogens + bucket(a.total_hydrogens(), g.clamped_counts)) = 1.0;
    row(atom_column::kImplicitValence + bucket(a.implicit_valence(), g.clamped_counts)) = 1.0;
    row(atom_column::kAromatic) = a.is_aromatic ? 1.0 : 0.0;
  }
  for (const auto& b : m.bonds()) g.edges.emplace_back(std::min(b.begin, b.end), std::max(b.begin, b.end));
  return g;
}

std::vector<std::uint32_t> morgan_identifiers(const Molecule& m, int radius) {
  if (radius < 0) throw InvalidArgument("Morgan radius must be non-negative");
  const auto& atoms = m.atoms();
  const auto& bonds = m.bonds();
  const std::size_t n = atoms.size();
  std::vector<std::uint32_t> features;

  // Connectivity invariants: element, total degree (heavy + H), hydrogens,
  // charge, mass shift, and a trailing 1 for ring atoms.
  std::vector<std::uint32_t> current(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = atoms[i];
    std::uint32_t h = 0;
    hash_combine(h, static_cast<std::uint32_t>(a.atomic_number));
    hash_combine(h, static_cast<std::uint32_t>(a.degree + a.total_hydrogens()));
    hash_combine(h, static_cast<std::uint32_t>(a.total_hydrogens()));
    hash_combine(h, static_cast<std::uint32_t>(a.formal_charge));
    hash_combine(h, static_cast<std::uint32_t>(mass_shift(a)));
    if (a.in_ring) hash_combine(h, 1u);
    current[i] = h;
    features.push_back(h);
  }

  using BondMask = std::vector<bool>;
  std::vector<BondMask> neighborhood(n, BondMask(bonds.size(), false));
  std::set<BondMask> seen;
  std::vector<bool> dead(n, false);
  for (int layer = 1; layer <= radius; ++layer) {
    std::vector<std::uint32_t> next = current;
    std::vector<BondMask> next_neighborhood = neighborhood;
    std::vector<std::tuple<BondMask, std::uint32_t, std::size_t>> round;
    for (std::size_t i = 0; i < n; ++i) {
      if (dead[i]) continue;
      const auto& incident = m.atom_bonds(static_cast<int>(i));
      if (incident.empty()) {
        dead[i] = true;
        continue;
      }
      std::vector<std::pair<std::uint32_t, std::uint32_t>> nbrs;
      for (int b : incident) {
        const int o = bonds[b].other(static_cast<int>(i));
        nbrs.emplace_back(static_cast<std::uint32_t>(bonds[b].order), current[o]);
        next_neighborhood[i][b] = true;
        for (std::size_t k = 0; k < bonds.size(); ++k) {
          if (neighborhood[o][k]) next_neighborhood[i][k] = true;
        }
      }
      std::sort(nbrs.begin(), nbrs.end());
      std::uint32_t h = static_cast<std::uint32_t>(layer - 1);
      hash_combine(h, current[i]);
      for (const auto& [order, id] : nbrs) {
        std::uint32_t pair = 0;
        hash_combine(pair, order);
        hash_combine(pair, id);
        hash_combine(h, pair);
      }
      next[i] = h;
      round.emplace_back(next_neighborhood[i], h, i);
    }
    std::sort(round.begin(), round.end());
    for (const auto& [mask, id, atom] : round) {
      if (seen.insert(mask).second) {
        features.push_back(id);
      } else {
        dead[atom] = true;
      }
    }
    current = std::move(next);
    neighborhood = std::move(next_neighborhood);
  }
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());
  return features;
}

FeatureVector morgan_fingerprint(const Molecule& m, int radius, std::size_t nbits) {
  auto bits = fold(morgan_identifiers(m, radius), nbits);
  if (nbits != feature_length(FeatureKind::MORGAN)) {
    throw InvalidArgument("Morgan fingerprint width must be 1024");
  }
  return FeatureVector(FeatureKind::MORGAN, std::move(bits));
}

std::vector<std::uint32_t> path_identifiers(const Molecule& m, int max_path) {
  if (max_path < 1) throw InvalidArgument("max_path must be >= 1");
  const auto& atoms = m.atoms();
  const auto& bonds = m.bonds();
  auto atom_token = [&](int a) {
    return static_cast<std::uint32_t>(atoms[a].atomic_number * 2 + (atoms[a].is_aromatic ? 1 : 0));
  };

  std::set<std::vector<std::uint32_t>> classes;
  std::vector<int> path_atoms;
  std::vector<int> path_bonds;
  std::vector<bool> on_path(atoms.size(), false);

  auto record = [&]() {
    std::vector<std::uint32_t> forward, backward;
    const std::size_t k = path_bonds.size();
    for (std::size_t i = 0; i < k; ++i) {
      forward.push_back(atom_token(path_atoms[i]));
      forward.push_back(static_cast<std::uint32_t>(bonds[path_bonds[i]].order));
    }
    forward.push_back(atom_token(path_atoms[k]));
    backward.assign(forward.rbegin(), forward.rend());
    classes.insert(std::min(forward, backward));
  };

  auto extend = [&](auto&& self, int atom) -> void {
    if (!path_bonds.empty()) record();
    if (static_cast<int>(path_bonds.size()) == max_path) return;
    for (int b : m.atom_bonds(atom)) {
      const int o = bonds[b].other(atom);
      if (on_path[o]) continue;
      on_path[o] = true;
      path_atoms.push_back(o);
      path_bonds.push_back(b);
      self(self, o);
      path_bonds.pop_back();
      path_atoms.pop_back();
      on_path[o] = false;
    }
  };
  for (int a = 0; a < static_cast<int>(atoms.size()); ++a) {
    on_path[a] = true;
    path_atoms.assign(1, a);
    extend(extend, a);
    on_path[a] = false;
  }

  std::vector<std::uint32_t> ids;
  ids.reserve(classes.size());
  for (const auto& tokens : classes) {
    std::uint32_t h = 2166136261u;  // FNV-1a over the token words
    for (auto t : tokens) {
      for (int byte = 0; byte < 4; ++byte) {
        h ^= (t >> (8 * byte)) & 0xffu;
        h *= 16777619u;
      }
    }
    ids.push_back(h);
  }
  return ids;
}

FeatureVector daylight_fingerprint(const Molecule& m, int max_path, std::size_t nbits) {
  if (nbits != feature_length(FeatureKind::DAYLIGHT)) {
    throw InvalidArgument("path fingerprint width must be 2048");
  }
  return FeatureVector(FeatureKind::DAYLIGHT, fold(path_identifiers(m, max_path), nbits));
}

FeatureVector drug_fingerprint(const Molecule& m) {
  const auto morgan = morgan_fingerprint(m);
  const auto paths = daylight_fingerprint(m);
  std::vector<double> values(morgan.values().begin(), morgan.values().end());
  values.insert(values.end(), paths.values().begin(), paths.values().end());
  return FeatureVector(FeatureKind::DRUG_CONCAT, std::move(values));
}

MoleculeCounts molecule_counts(const Molecule& m) {
  MoleculeCounts c;
  for (const auto& a : m.atoms()) {
    if (a.atomic_number != 1) ++c.atoms;
  }
  c.aromatic_atoms = m.aromatic_atom_count();
  c.bonds = m.num_bonds();
  return c;
}

}  // namespace dtagraph::chem
