#include <algorithm>
#include <bit>
#include <iterator>
#include <deque>
#include <numeric>
#include <vector>

#include "dtagraph/molecule.hpp"

namespace dtagraph::chem {

namespace {

struct Adjacent {
  int atom;
  int bond;
};

// Bond-incidence vector over GF(2), packed into 64-bit words.
using BondSet = std::vector<std::uint64_t>;

bool xor_reduce(std::vector<BondSet>& basis, std::vector<int>& pivots, BondSet v) {
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const int p = pivots[k];
    if ((v[static_cast<std::size_t>(p) / 64] >> (p % 64)) & 1u) {
      for (std::size_t w = 0; w < v.size(); ++w) v[w] ^= basis[k][w];
    }
  }
  for (std::size_t w = 0; w < v.size(); ++w) {
    if (v[w] != 0) {
      const int p = static_cast<int>(w * 64) + std::countr_zero(v[w]);
      basis.push_back(std::move(v));
      pivots.push_back(p);
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Ring> find_sssr(std::size_t num_atoms, const std::vector<MolBond>& bonds) {
  const int n = static_cast<int>(num_atoms);
  std::vector<std::vector<Adjacent>> adj(num_atoms);
  for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
    adj[bonds[b].begin].push_back({bonds[b].end, b});
    adj[bonds[b].end].push_back({bonds[b].begin, b});
  }

  // Cyclomatic number = E - V + components.
  std::vector<int> component(num_atoms, -1);
  int components = 0;
  for (int s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    std::deque<int> queue{s};
    component[s] = components;
    while (!queue.empty()) {
      const int a = queue.front();
      queue.pop_front();
      for (const auto& e : adj[a]) {
        if (component[e.atom] < 0) {
          component[e.atom] = components;
          queue.push_back(e.atom);
        }
      }
    }
    ++components;
  }
  const int ring_count = static_cast<int>(bonds.size()) - n + components;
  if (ring_count <= 0) return {};

  // Horton candidates: shortest path tree from every root closed by one edge.
  struct Candidate {
    std::vector<int> atoms;
    std::vector<int> bonds;
  };
  std::vector<Candidate> candidates;
  for (int root = 0; root < n; ++root) {
    std::vector<int> dist(num_atoms, -1), parent(num_atoms, -1), parent_bond(num_atoms, -1);
    std::deque<int> queue{root};
    dist[root] = 0;
    while (!queue.empty()) {
      const int a = queue.front();
      queue.pop_front();
      for (const auto& e : adj[a]) {
        if (dist[e.atom] < 0) {
          dist[e.atom] = dist[a] + 1;
          parent[e.atom] = a;
          parent_bond[e.atom] = e.bond;
          queue.push_back(e.atom);
        }
      }
    }
    auto path_to_root = [&](int a) {
      std::vector<int> path;
      while (a != -1) {
        path.push_back(a);
        a = parent[a];
      }
      return path;
    };
    for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
      const int x = bonds[b].begin;
      const int y = bonds[b].end;
      if (dist[x] < 0 || dist[y] < 0) continue;
      if (parent_bond[x] == b || parent_bond[y] == b) continue;
      auto px = path_to_root(x);
      auto py = path_to_root(y);
      // The two paths may only share the root.
      std::vector<int> sx(px.begin(), px.end() - 1), sy(py.begin(), py.end() - 1);
      std::sort(sx.begin(), sx.end());
      std::sort(sy.begin(), sy.end());
      std::vector<int> common;
      std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(), std::back_inserter(common));
      if (!common.empty()) continue;

      Candidate c;
      c.atoms = px;  // x ... root
      std::reverse(c.atoms.begin(), c.atoms.end());  // root ... x
      for (int a : py) {
        if (a != root) c.atoms.push_back(a);
      }
      // c.atoms is root ... x, y ... (toward root); closing bond from last back to root.
      for (std::size_t i = 0; i + 1 < c.atoms.size(); ++i) {
        const int a = c.atoms[i];
        const int next = c.atoms[i + 1];
        for (const auto& e : adj[a]) {
          if (e.atom == next) {
            c.bonds.push_back(e.bond);
            break;
          }
        }
      }
      for (const auto& e : adj[c.atoms.back()]) {
        if (e.atom == root) {
          c.bonds.push_back(e.bond);
          break;
        }
      }
      if (c.bonds.size() != c.atoms.size() || c.atoms.size() < 3) continue;
      candidates.push_back(std::move(c));
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.atoms.size() < b.atoms.size(); });

  const std::size_t words = (bonds.size() + 63) / 64;
  std::vector<BondSet> basis;
  std::vector<int> pivots;
  std::vector<BondSet> accepted_sets;
  std::vector<Ring> rings;
  for (auto& c : candidates) {
    BondSet v(words, 0);
    for (int b : c.bonds) v[static_cast<std::size_t>(b) / 64] |= std::uint64_t{1} << (b % 64);
    if (std::find(accepted_sets.begin(), accepted_sets.end(), v) != accepted_sets.end()) continue;
    if (xor_reduce(basis, pivots, v)) {
      accepted_sets.push_back(v);
      rings.push_back({std::move(c.atoms), std::move(c.bonds)});
      if (static_cast<int>(rings.size()) == ring_count) break;
    }
  }
  return rings;
}

}  // namespace dtagraph::chem
