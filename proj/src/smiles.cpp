#include <algorithm>
#include <bit>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <string>

#include "dtagraph/error.hpp"
#include "dtagraph/molecule.hpp"

namespace dtagraph::chem {

namespace {

constexpr std::array<std::string_view, 87> kElements = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn"};

int atomic_number_of(std::string_view symbol) {
  for (std::size_t z = 0; z < kElements.size(); ++z) {
    if (kElements[z] == symbol) return static_cast<int>(z);
  }
  return -1;
}

// Allowed valences for main-group elements; empty means "not checked".
std::vector<int> allowed_valences(int z) {
  switch (z) {
    case 1: return {1};
    case 3: case 11: case 19: return {1};
    case 5: return {3};
    case 6: return {4};
    case 7: return {3, 5};
    case 8: return {2};
    case 9: return {1};
    case 12: case 20: return {2};
    case 13: return {3};
    case 14: return {4};
    case 15: return {3, 5, 7};
    case 16: return {2, 4, 6};
    case 17: return {1};
    case 32: return {4};
    case 33: return {3, 5, 7};
    case 34: return {2, 4, 6};
    case 35: return {1};
    case 52: return {2, 4, 6};
    case 53: return {1, 3, 5};
    default: return {};
  }
}

// Valences of a charged atom follow its isoelectronic neutral element.
std::vector<int> charged_valences(int z, int charge) {
  if (charge == 0) return allowed_valences(z);
  const bool main_group = (z >= 5 && z <= 9) || (z >= 14 && z <= 17) || (z >= 33 && z <= 35) ||
                          (z >= 51 && z <= 53);
  if (!main_group) return {};
  return allowed_valences(z - charge);
}

int bond_valence(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 1;
  }
  return 1;
}

struct ParsedAtom {
  MolAtom atom;
  std::size_t position = 0;
};

struct RingOpen {
  int atom;
  std::optional<BondOrder> order;
};

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view s) : s_(s) {}

  void run() {
    if (s_.empty()) throw ParseError("empty SMILES");
    std::vector<int> branch_stack;
    int prev = -1;
    std::optional<BondOrder> pending;
    bool pending_set = false;
    bool expect_atom = true;  // start of string, after '(' or '.'

    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') {
        if (prev < 0 || pending_set) fail("branch without preceding atom");
        branch_stack.push_back(prev);
        ++pos_;
        expect_atom = true;
        continue;
      }
      if (c == ')') {
        if (branch_stack.empty()) fail("unbalanced ')'");
        if (pending_set || expect_atom) fail("empty branch or dangling bond");
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++pos_;
        continue;
      }
      if (c == '.') {
        if (pending_set || prev < 0) fail("misplaced '.'");
        prev = -1;
        ++pos_;
        expect_atom = true;
        continue;
      }
      if (auto order = bond_symbol(c)) {
        if (pending_set || prev < 0) fail("misplaced bond symbol");
        pending = *order;
        pending_set = true;
        ++pos_;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0 || expect_atom) fail("ring closure without preceding atom");
        const int number = ring_number();
        close_or_open_ring(number, prev, pending_set ? pending : std::nullopt);
        pending.reset();
        pending_set = false;
        continue;
      }
      const int atom = parse_atom();
      if (prev >= 0) add_bond(prev, atom, pending_set ? pending : std::nullopt);
      pending.reset();
      pending_set = false;
      prev = atom;
      expect_atom = false;
    }
    if (pending_set) fail("dangling bond at end of SMILES");
    if (!branch_stack.empty()) fail("unbalanced '('");
    if (!open_rings_.empty()) {
      pos_ = s_.size();
      fail("unclosed ring " + std::to_string(open_rings_.begin()->first));
    }
    if (expect_atom) fail("SMILES ends without an atom");
  }

  std::vector<ParsedAtom> atoms;
  std::vector<MolBond> bonds;
  std::vector<bool> explicit_bond_order;  // bond order was written (not defaulted)

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("invalid SMILES '" + std::string(s_) + "' at position " + std::to_string(pos_) + ": " + msg);
  }

  static std::optional<BondOrder> bond_symbol(char c) {
    switch (c) {
      case '-': case '/': case '\\': return BondOrder::Single;
      case '=': return BondOrder::Double;
      case '#': return BondOrder::Triple;
      case ':': return BondOrder::Aromatic;
      default: return std::nullopt;
    }
  }

  int ring_number() {
    if (s_[pos_] == '%') {
      if (pos_ + 2 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(s_[pos_ + 2]))) {
        fail("malformed %nn ring closure");
      }
      const int n = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
      pos_ += 3;
      return n;
    }
    return s_[pos_++] - '0';
  }

  void close_or_open_ring(int number, int atom, std::optional<BondOrder> order) {
    auto it = open_rings_.find(number);
    if (it == open_rings_.end()) {
      open_rings_.emplace(number, RingOpen{atom, order});
      return;
    }
    const RingOpen open = it->second;
    open_rings_.erase(it);
    if (open.atom == atom) fail("ring closure to itself");
    if (order && open.order && *order != *open.order) fail("conflicting ring-closure bond orders");
    add_bond(open.atom, atom, order ? order : open.order);
  }

  void add_bond(int a, int b, std::optional<BondOrder> order) {
    for (const auto& existing : bonds) {
      if ((existing.begin == a && existing.end == b) || (existing.begin == b && existing.end == a)) {
        fail("duplicate bond");
      }
    }
    MolBond bond;
    bond.begin = a;
    bond.end = b;
    if (order) {
      bond.order = *order;
    } else {
      bond.order = (atoms[a].atom.is_aromatic && atoms[b].atom.is_aromatic) ? BondOrder::Aromatic
                                                                            : BondOrder::Single;
    }
    bonds.push_back(bond);
    explicit_bond_order.push_back(order.has_value());
  }

  int parse_atom() {
    ParsedAtom pa;
    pa.position = pos_;
    MolAtom& atom = pa.atom;
    if (s_[pos_] == '[') {
      parse_bracket(atom);
    } else {
      parse_organic(atom);
    }
    atoms.push_back(std::move(pa));
    return static_cast<int>(atoms.size()) - 1;
  }

  void parse_organic(MolAtom& atom) {
    const std::string_view rest = s_.substr(pos_);
    static constexpr std::string_view two[] = {"Cl", "Br"};
    for (auto sym : two) {
      if (rest.starts_with(sym)) {
        atom.symbol = std::string(sym);
        pos_ += 2;
        atom.atomic_number = atomic_number_of(atom.symbol);
        return;
      }
    }
    const char c = s_[pos_];
    switch (c) {
      case 'B': case 'C': case 'N': case 'O': case 'P': case 'S': case 'F': case 'I':
        atom.symbol = std::string(1, c);
        break;
      case 'b': case 'c': case 'n': case 'o': case 'p': case 's':
        atom.symbol = std::string(1, static_cast<char>(std::toupper(c)));
        atom.is_aromatic = true;
        break;
      case '*':
        atom.symbol = "*";
        break;
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
    ++pos_;
    atom.atomic_number = atomic_number_of(atom.symbol);
  }

  void parse_bracket(MolAtom& atom) {
    atom.bracket = true;
    ++pos_;  // '['
    auto at_end = [&] { return pos_ >= s_.size(); };
    auto digits = [&]() {
      int v = 0;
      bool any = false;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + (s_[pos_++] - '0');
        any = true;
      }
      return any ? v : -1;
    };
    if (const int iso = digits(); iso >= 0) atom.isotope = iso;
    if (at_end()) fail("unterminated bracket atom");

    // element symbol, possibly aromatic lowercase
    const char c = s_[pos_];
    if (c == '*') {
      atom.symbol = "*";
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      static constexpr std::string_view aromatic2[] = {"se", "as", "te"};
      bool matched = false;
      for (auto sym : aromatic2) {
        if (s_.substr(pos_).starts_with(sym)) {
          atom.symbol = std::string(1, static_cast<char>(std::toupper(sym[0]))) + sym[1];
          pos_ += 2;
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("bcnops").find(c) == std::string_view::npos) fail("invalid aromatic symbol");
        atom.symbol = std::string(1, static_cast<char>(std::toupper(c)));
        ++pos_;
      }
      atom.is_aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      if (pos_ + 1 < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_ + 1]))) {
        std::string two = sym + s_[pos_ + 1];
        if (atomic_number_of(two) >= 0) sym = two;
      }
      atom.symbol = sym;
      pos_ += sym.size();
    } else {
      fail("missing element symbol in bracket atom");
    }
    atom.atomic_number = atomic_number_of(atom.symbol);
    if (atom.atomic_number < 0) fail("unknown element '" + atom.symbol + "'");

    // chirality (ignored)
    while (!at_end() && s_[pos_] == '@') ++pos_;
    if (!at_end() && (s_.substr(pos_).starts_with("TH") || s_.substr(pos_).starts_with("AL") ||
                      s_.substr(pos_).starts_with("SP") || s_.substr(pos_).starts_with("TB") ||
                      s_.substr(pos_).starts_with("OH"))) {
      pos_ += 2;
      digits();
    }
    if (!at_end() && s_[pos_] == 'H') {
      ++pos_;
      const int h = digits();
      atom.explicit_hydrogens = h < 0 ? 1 : h;
    }
    if (!at_end() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      const char sign = s_[pos_++];
      int magnitude = 1;
      if (const int d = digits(); d >= 0) {
        magnitude = d;
      } else {
        while (!at_end() && s_[pos_] == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }
    if (!at_end() && s_[pos_] == ':') {
      ++pos_;
      if (digits() < 0) fail("malformed atom class");
    }
    if (at_end() || s_[pos_] != ']') fail("unterminated bracket atom");
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::map<int, RingOpen> open_rings_;
};

class Perception {
 public:
  Perception(std::string_view smiles, std::vector<ParsedAtom> parsed, std::vector<MolBond> bonds)
      : smiles_(smiles), bonds_(std::move(bonds)) {
    for (auto& p : parsed) {
      atoms_.push_back(std::move(p.atom));
      positions_.push_back(p.position);
    }
  }

  Molecule run() {
    fold_hydrogens();
    rebuild_adjacency();
    rings_ = find_sssr(atoms_.size(), bonds_);
    mark_ring_bonds();
    kekulize();
    complete_hydrogens();
    perceive_aromaticity();
    pin_aromatic_heteroatom_hydrogens();
    return Molecule(std::move(atoms_), std::move(bonds_));
  }

 private:
  [[noreturn]] void fail(int atom, const std::string& msg) const {
    throw ParseError("SMILES '" + std::string(smiles_) + "': " + msg + " at atom " + std::to_string(atom) +
                     " (position " + std::to_string(positions_[static_cast<std::size_t>(atom)]) + ")");
  }

  void rebuild_adjacency() {
    adjacency_.assign(atoms_.size(), {});
    for (int b = 0; b < static_cast<int>(bonds_.size()); ++b) {
      adjacency_[bonds_[b].begin].push_back(b);
      adjacency_[bonds_[b].end].push_back(b);
    }
  }

  // [H] atoms bonded to a single heavy atom become explicit H counts.
  void fold_hydrogens() {
    rebuild_adjacency();
    std::vector<bool> remove(atoms_.size(), false);
    for (int a = 0; a < static_cast<int>(atoms_.size()); ++a) {
      const auto& atom = atoms_[a];
      if (atom.atomic_number != 1 || atom.isotope != 0 || atom.formal_charge != 0 ||
          atom.explicit_hydrogens != 0 || adjacency_[a].size() != 1) {
        continue;
      }
      const auto& bond = bonds_[adjacency_[a][0]];
      const int heavy = bond.other(a);
      if (atoms_[heavy].atomic_number == 1 || bond.order != BondOrder::Single) continue;
      remove[a] = true;
      atoms_[heavy].explicit_hydrogens += 1;
    }
    if (std::none_of(remove.begin(), remove.end(), [](bool r) { return r; })) return;
    std::vector<int> remap(atoms_.size(), -1);
    std::vector<MolAtom> kept_atoms;
    std::vector<std::size_t> kept_pos;
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      if (remove[a]) continue;
      remap[a] = static_cast<int>(kept_atoms.size());
      kept_atoms.push_back(std::move(atoms_[a]));
      kept_pos.push_back(positions_[a]);
    }
    std::vector<MolBond> kept_bonds;
    for (const auto& b : bonds_) {
      if (remap[b.begin] < 0 || remap[b.end] < 0) continue;
      kept_bonds.push_back({remap[b.begin], remap[b.end], b.order, false});
    }
    atoms_ = std::move(kept_atoms);
    positions_ = std::move(kept_pos);
    bonds_ = std::move(kept_bonds);
  }

  void mark_ring_bonds() {
    for (auto& b : bonds_) b.in_ring = false;
    for (auto& a : atoms_) a.in_ring = false;
    for (const auto& ring : rings_) {
      for (int b : ring.bonds) bonds_[b].in_ring = true;
      for (int a : ring.atoms) atoms_[a].in_ring = true;
    }
  }

  int bond_sum(int a) const {
    int sum = 0;
    for (int b : adjacency_[a]) sum += bond_valence(bonds_[b].order);
    return sum;
  }

  // Aromatic input is turned into alternating single/double bonds.
  void kekulize() {
    for (auto& b : bonds_) {
      if (b.order == BondOrder::Aromatic && !b.in_ring) b.order = BondOrder::Single;
    }
    const int n = static_cast<int>(atoms_.size());
    std::vector<bool> needs_double(atoms_.size(), false);
    bool any_aromatic = false;
    for (int a = 0; a < n; ++a) {
      auto& atom = atoms_[a];
      bool has_aromatic_bond = false;
      for (int b : adjacency_[a]) has_aromatic_bond |= bonds_[b].order == BondOrder::Aromatic;
      if (atom.is_aromatic && !atom.in_ring) fail(a, "aromatic atom outside a ring");
      if (!has_aromatic_bond) continue;
      any_aromatic = true;
      const int base = bond_sum(a) + atom.explicit_hydrogens;
      bool has_double = false;
      for (int b : adjacency_[a]) has_double |= bonds_[b].order == BondOrder::Double || bonds_[b].order == BondOrder::Triple;
      if (has_double) continue;
      const auto valences = charged_valences(atom.atomic_number, atom.formal_charge);
      if (valences.empty()) continue;
      if (atom.bracket) {
        for (int v : valences) {
          if (v == base + 1) needs_double[a] = true;
          if (v >= base) break;
        }
      } else {
        const auto it = std::find_if(valences.begin(), valences.end(), [&](int v) { return v >= base; });
        if (it != valences.end() && *it - base >= 1) needs_double[a] = true;
      }
    }
    if (!any_aromatic) return;

    std::vector<int> partner(atoms_.size(), -1);
    std::vector<int> partner_bond(atoms_.size(), -1);
    std::vector<int> open;
    for (int a = 0; a < n; ++a) {
      if (needs_double[a]) open.push_back(a);
    }
    if (!match(open, needs_double, partner, partner_bond)) {
      fail(open.empty() ? 0 : open.front(), "cannot kekulize aromatic system");
    }
    for (auto& b : bonds_) {
      if (b.order == BondOrder::Aromatic) b.order = BondOrder::Single;
    }
    for (int a = 0; a < n; ++a) {
      if (partner_bond[a] >= 0) bonds_[partner_bond[a]].order = BondOrder::Double;
    }
  }

  // Perfect matching of atoms needing a double bond over aromatic bonds,
  // by backtracking on the most constrained atom first.
  bool match(const std::vector<int>& candidates, const std::vector<bool>& needs_double,
             std::vector<int>& partner, std::vector<int>& partner_bond) const {
    int best = -1;
    std::vector<std::pair<int, int>> best_options;
    for (int a : candidates) {
      if (partner[a] >= 0) continue;
      std::vector<std::pair<int, int>> options;
      for (int b : adjacency_[a]) {
        if (bonds_[b].order != BondOrder::Aromatic) continue;
        const int o = bonds_[b].other(a);
        if (needs_double[o] && partner[o] < 0) options.emplace_back(o, b);
      }
      if (options.empty()) return false;
      if (best < 0 || options.size() < best_options.size()) {
        best = a;
        best_options = std::move(options);
      }
    }
    if (best < 0) return true;
    for (auto [o, b] : best_options) {
      partner[best] = o;
      partner[o] = best;
      partner_bond[best] = b;
      partner_bond[o] = b;
      if (match(candidates, needs_double, partner, partner_bond)) return true;
      partner[best] = partner[o] = -1;
      partner_bond[best] = partner_bond[o] = -1;
    }
    return false;
  }

  void complete_hydrogens() {
    for (int a = 0; a < static_cast<int>(atoms_.size()); ++a) {
      auto& atom = atoms_[a];
      const int base = bond_sum(a) + atom.explicit_hydrogens;
      const auto valences = charged_valences(atom.atomic_number, atom.formal_charge);
      if (valences.empty()) continue;
      if (atom.bracket) {
        if (base > valences.back()) fail(a, "valence violation");
        continue;
      }
      const auto it = std::find_if(valences.begin(), valences.end(), [&](int v) { return v >= base; });
      if (it == valences.end()) fail(a, "valence violation");
      atom.implicit_hydrogens = *it - base;
    }
  }

  static bool electronegative(int z) { return z == 7 || z == 8 || z == 16; }

  // Pi electrons an atom donates to a ring, or -1 when it cannot be aromatic.
  int pi_electrons(int a) const {
    const auto& atom = atoms_[a];
    if (!atom.in_ring) return -1;
    switch (atom.atomic_number) {
      case 5: case 6: case 7: case 8: case 15: case 16: case 33: case 34: case 52: break;
      default: return -1;
    }
    int heavy = 0;
    bool ring_double = false, exo_double_en = false, exo_double_other = false;
    for (int b : adjacency_[a]) {
      const auto& bond = bonds_[b];
      ++heavy;
      if (bond.order == BondOrder::Triple) return -1;
      if (bond.order == BondOrder::Double) {
        if (bond.in_ring) {
          ring_double = true;
        } else if (electronegative(atoms_[bond.other(a)].atomic_number)) {
          exo_double_en = true;
        } else {
          exo_double_other = true;
        }
      }
    }
    if (ring_double) return 1;
    if (exo_double_en) return 0;
    if (exo_double_other) return -1;
    const int connections = heavy + atom.total_hydrogens();
    const int q = atom.formal_charge;
    switch (atom.atomic_number) {
      case 6:
        if (q == 1) return 0;
        if (q == -1) return 2;
        return -1;
      case 5:
        return (q == 0 && connections <= 3) ? 0 : -1;
      case 7: case 15: case 33:
        if (q == 0 && connections == 3) return 2;
        if (q == -1 && connections == 2) return 2;
        return -1;
      default:  // O, S, Se, Te
        if (q == 0 && connections == 2) return 2;
        return -1;
    }
  }

  // Hydrogens on aromatic heteroatoms become explicit so the H placement
  // survives re-kekulization (matches the common toolkit convention).
  void pin_aromatic_heteroatom_hydrogens() {
    for (auto& atom : atoms_) {
      if (atom.is_aromatic && atom.atomic_number != 6 && atom.implicit_hydrogens > 0) {
        atom.explicit_hydrogens += atom.implicit_hydrogens;
        atom.implicit_hydrogens = 0;
      }
    }
  }

  void perceive_aromaticity() {
    for (auto& atom : atoms_) atom.is_aromatic = false;
    if (rings_.empty()) return;
    std::vector<int> electrons(atoms_.size());
    for (int a = 0; a < static_cast<int>(atoms_.size()); ++a) electrons[a] = pi_electrons(a);

    const std::size_t nr = rings_.size();
    std::vector<bool> aromatic_bond(bonds_.size(), false);
    auto try_union = [&](const std::vector<std::size_t>& members) {
      std::vector<int> union_atoms;
      for (auto r : members) union_atoms.insert(union_atoms.end(), rings_[r].atoms.begin(), rings_[r].atoms.end());
      std::sort(union_atoms.begin(), union_atoms.end());
      union_atoms.erase(std::unique(union_atoms.begin(), union_atoms.end()), union_atoms.end());
      int total = 0;
      for (int a : union_atoms) {
        if (electrons[a] < 0) return;
        total += electrons[a];
      }
      if (total % 4 != 2) return;
      for (auto r : members) {
        for (int a : rings_[r].atoms) atoms_[a].is_aromatic = true;
        for (int b : rings_[r].bonds) aromatic_bond[b] = true;
      }
    };

    // Fused systems: rings sharing at least one bond.
    std::vector<std::vector<std::size_t>> neighbors(nr);
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = i + 1; j < nr; ++j) {
        const auto& bi = rings_[i].bonds;
        const bool shared = std::any_of(bi.begin(), bi.end(), [&](int b) {
          return std::find(rings_[j].bonds.begin(), rings_[j].bonds.end(), b) != rings_[j].bonds.end();
        });
        if (shared) {
          neighbors[i].push_back(j);
          neighbors[j].push_back(i);
        }
      }
    }
    std::vector<int> system(nr, -1);
    std::vector<std::vector<std::size_t>> systems;
    for (std::size_t i = 0; i < nr; ++i) {
      if (system[i] >= 0) continue;
      systems.emplace_back();
      std::vector<std::size_t> stack{i};
      system[i] = static_cast<int>(systems.size()) - 1;
      while (!stack.empty()) {
        const auto r = stack.back();
        stack.pop_back();
        systems.back().push_back(r);
        for (auto o : neighbors[r]) {
          if (system[o] < 0) {
            system[o] = system[i];
            stack.push_back(o);
          }
        }
      }
    }
    constexpr std::size_t kMaxEnumeratedSystem = 10;
    for (const auto& sys : systems) {
      for (auto r : sys) try_union({r});
      if (sys.size() < 2) continue;
      if (sys.size() > kMaxEnumeratedSystem) {
        for (auto r : sys) {
          for (auto o : neighbors[r]) {
            if (o > r) try_union({r, o});
          }
        }
        continue;
      }
      // every connected subset of two or more rings
      const std::uint32_t full = (1u << sys.size()) - 1;
      for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < sys.size(); ++k) {
          if (mask & (1u << k)) members.push_back(sys[k]);
        }
        std::vector<bool> seen(members.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
          const auto m = stack.back();
          stack.pop_back();
          for (std::size_t k = 0; k < members.size(); ++k) {
            if (seen[k]) continue;
            const auto& nb = neighbors[members[m]];
            if (std::find(nb.begin(), nb.end(), members[k]) != nb.end()) {
              seen[k] = true;
              ++reached;
              stack.push_back(k);
            }
          }
        }
        if (reached == members.size()) try_union(members);
      }
    }
    for (std::size_t b = 0; b < bonds_.size(); ++b) {
      if (aromatic_bond[b]) bonds_[b].order = BondOrder::Aromatic;
    }
  }

  std::string_view smiles_;
  std::vector<MolAtom> atoms_;
  std::vector<std::size_t> positions_;
  std::vector<MolBond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<Ring> rings_;
};

}  // namespace

Molecule::Molecule(std::vector<MolAtom> atoms, std::vector<MolBond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  index();
}

void Molecule::index() {
  const int n = static_cast<int>(atoms_.size());
  adjacency_.assign(atoms_.size(), {});
  for (int b = 0; b < static_cast<int>(bonds_.size()); ++b) {
    const auto& bond = bonds_[b];
    if (bond.begin < 0 || bond.end < 0 || bond.begin >= n || bond.end >= n) {
      throw InvalidArgument("bond index out of range");
    }
    if (bond.begin == bond.end) throw InvalidArgument("self-bond");
    adjacency_[bond.begin].push_back(b);
    adjacency_[bond.end].push_back(b);
  }
  rings_ = find_sssr(atoms_.size(), bonds_);
  for (auto& a : atoms_) a.in_ring = false;
  for (auto& b : bonds_) b.in_ring = false;
  for (const auto& ring : rings_) {
    for (int a : ring.atoms) atoms_[a].in_ring = true;
    for (int b : ring.bonds) bonds_[b].in_ring = true;
  }
  for (int a = 0; a < n; ++a) atoms_[a].degree = static_cast<int>(adjacency_[a].size());
}

std::size_t Molecule::aromatic_atom_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(atoms_.begin(), atoms_.end(), [](const MolAtom& a) { return a.is_aromatic; }));
}

Molecule parse_smiles(std::string_view smiles) {
  SmilesParser parser(smiles);
  parser.run();
  Perception perception(smiles, std::move(parser.atoms), std::move(parser.bonds));
  return perception.run();
}

}  // namespace dtagraph::chem
