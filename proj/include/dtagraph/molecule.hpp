#pragma once

// Molecular graph with chemical perception (implicit hydrogens, rings,
// aromaticity) built from SMILES.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dtagraph::chem {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 12 };

struct MolAtom {
  std::string symbol;  // element symbol, capitalized ("C", "Cl", ...)
  int atomic_number = 0;
  int formal_charge = 0;
  int isotope = 0;
  int explicit_hydrogens = 0;  // from brackets or removed [H] atoms
  int implicit_hydrogens = 0;  // added by valence completion
  bool bracket = false;
  bool is_aromatic = false;
  bool in_ring = false;

  // Derived after perception.
  int degree = 0;  // heavy-atom neighbors
  int total_hydrogens() const noexcept { return explicit_hydrogens + implicit_hydrogens; }
  int implicit_valence() const noexcept { return implicit_hydrogens; }
};

struct MolBond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::Single;
  bool in_ring = false;

  int other(int atom) const noexcept { return atom == begin ? end : begin; }
};

/// A ring as an ordered cycle of atom indices with the bonds that close it.
struct Ring {
  std::vector<int> atoms;
  std::vector<int> bonds;
};

class Molecule {
 public:
  Molecule() = default;
  Molecule(std::vector<MolAtom> atoms, std::vector<MolBond> bonds);

  const std::vector<MolAtom>& atoms() const noexcept { return atoms_; }
  const std::vector<MolBond>& bonds() const noexcept { return bonds_; }
  const std::vector<Ring>& rings() const noexcept { return rings_; }
  std::size_t num_atoms() const noexcept { return atoms_.size(); }
  std::size_t num_bonds() const noexcept { return bonds_.size(); }

  /// Bond indices incident to `atom`.
  const std::vector<int>& atom_bonds(int atom) const { return adjacency_[static_cast<std::size_t>(atom)]; }

  std::size_t aromatic_atom_count() const noexcept;

 private:
  void index();

  std::vector<MolAtom> atoms_;
  std::vector<MolBond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<Ring> rings_;
};

/// Parses SMILES with full perception: ring closures, hydrogen completion,
/// kekulization of aromatic input and ring-based aromaticity perception.
/// Explicit hydrogen atoms are folded into their heavy neighbor. Atom order
/// follows the token order of the string. Throws ParseError on syntax or
/// valence problems with the character offset in the message.
Molecule parse_smiles(std::string_view smiles);

/// Smallest set of smallest rings of an arbitrary molecular graph.
std::vector<Ring> find_sssr(std::size_t num_atoms, const std::vector<MolBond>& bonds);

}  // namespace dtagraph::chem
