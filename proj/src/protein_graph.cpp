#include "dtagraph/protein_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <unordered_map>

#include "dtagraph/error.hpp"
#include "dtagraph/protein_features.hpp"

namespace dtagraph::structure {

namespace {

std::string_view field(std::string_view line, std::size_t begin, std::size_t end) {
  if (begin >= line.size()) return {};
  return line.substr(begin, std::min(end, line.size()) - begin);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_coordinate(std::string_view text, std::size_t line_no) {
  text = trim(text);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("unparseable coordinate '" + std::string(text) + "'", line_no);
  }
  return value;
}

std::string element_from_atom_name(std::string_view name) {
  name = trim(name);
  while (!name.empty() && std::isdigit(static_cast<unsigned char>(name.front()))) name.remove_prefix(1);
  if (name.empty()) return {};
  return std::string(1, name.front());
}

bool is_hydrogen(std::string_view element) {
  return element == "H" || element == "D" || element == "h" || element == "d";
}

}  // namespace

std::vector<Residue> parse_structure(std::string_view pdb_text) {
  std::vector<Residue> residues;
  bool saw_atom = false;
  std::string current_key;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= pdb_text.size()) {
    std::size_t eol = pdb_text.find('\n', pos);
    if (eol == std::string_view::npos) eol = pdb_text.size();
    const std::string_view line = pdb_text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (line.starts_with("ENDMDL")) {
      if (saw_atom) break;
      continue;
    }
    if (!line.starts_with("ATOM  ")) continue;
    saw_atom = true;
    if (line.size() < 54) throw ParseError("truncated ATOM record", line_no);

    const char alt_loc = line[16];
    if (alt_loc != ' ' && alt_loc != 'A') continue;
    const char aa = residue_one_letter(trim(field(line, 17, 20)));
    if (aa == '\0') continue;

    std::string element(trim(field(line, 76, 78)));
    if (element.empty()) element = element_from_atom_name(field(line, 12, 16));
    if (is_hydrogen(element)) continue;
    for (char& c : element) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const double mass = element_mass(element);
    if (mass <= 0.0) throw ParseError("unknown element '" + element + "'", line_no);

    Atom atom{element, parse_coordinate(field(line, 30, 38), line_no),
              parse_coordinate(field(line, 38, 46), line_no),
              parse_coordinate(field(line, 46, 54), line_no), mass};

    const char chain = line[21];
    std::string key(field(line, 21, 27));
    if (residues.empty() || key != current_key) {
      Residue r;
      r.index = static_cast<int>(residues.size());
      r.aa_code = aa;
      r.chain_id = chain;
      residues.push_back(std::move(r));
      current_key = std::move(key);
    }
    residues.back().atoms.push_back(std::move(atom));
  }
  if (!saw_atom) throw ParseError("no ATOM records in structure");
  if (residues.empty()) throw ParseError("no standard residues in structure");
  return residues;
}

Vec3 residue_center_of_mass(const Residue& residue) {
  double total = 0.0;
  Vec3 c;
  for (const auto& a : residue.atoms) {
    total += a.mass;
    c.x += a.mass * a.x;
    c.y += a.mass * a.y;
    c.z += a.mass * a.z;
  }
  if (!(total > 0.0)) {
    throw InvalidArgument("residue " + std::to_string(residue.index) + " has zero total mass");
  }
  return {c.x / total, c.y / total, c.z / total};
}

std::string residue_sequence(const std::vector<Residue>& residues) {
  std::string seq;
  seq.reserve(residues.size());
  for (const auto& r : residues) seq.push_back(r.aa_code);
  return seq;
}

ResidueGraph build_protein_graph(const std::vector<Residue>& residues, double contact_threshold) {
  if (residues.empty()) throw InvalidArgument("build_protein_graph: empty residue list");
  if (!(contact_threshold > 0.0)) throw InvalidArgument("contact threshold must be positive");

  const int n = static_cast<int>(residues.size());
  std::vector<Vec3> com(residues.size());
  Vec3 center;
  double total_mass = 0.0;
  for (int i = 0; i < n; ++i) {
    com[i] = residue_center_of_mass(residues[i]);
    double m = 0.0;
    for (const auto& a : residues[i].atoms) m += a.mass;
    center.x += m * com[i].x;
    center.y += m * com[i].y;
    center.z += m * com[i].z;
    total_mass += m;
  }
  center = {center.x / total_mass, center.y / total_mass, center.z / total_mass};

  ResidueGraph g;
  g.num_residues = n;
  g.node_features = Eigen::MatrixXd::Zero(n, kResidueFeatureWidth);
  for (int i = 0; i < n; ++i) {
    const int aa = protein::residue_index(residues[i].aa_code);
    if (aa < 0) throw InvalidArgument(std::string("nonstandard residue '") + residues[i].aa_code + "'");
    const auto& p = residue_properties(residues[i].aa_code);
    auto row = g.node_features.row(i);
    row(column::kOneHot + aa) = 1.0;
    row(column::kWeight) = (p.molecular_weight - kWeightMean) / kWeightStd;
    row(column::kPolar) = p.polar ? 1.0 : 0.0;
    row(column::kHydropathy) = (p.hydropathy - kHydropathyMean) / kHydropathyStd;
    row(column::kPkaCarboxyl) = p.pka_carboxyl / kPkaScale;
    row(column::kPkaAmino) = p.pka_amino / kPkaScale;
    row(column::kPkaSideChain) = p.pka_side_chain / kPkaScale;
    row(column::kX) = (com[i].x - center.x) * kCoordinateScale;
    row(column::kY) = (com[i].y - center.y) * kCoordinateScale;
    row(column::kZ) = (com[i].z - center.z) * kCoordinateScale;
  }

  // Uniform grid with cell edge = threshold; only neighboring cells can hold contacts.
  struct CellKey {
    long x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept {
      return static_cast<std::size_t>(k.x * 73856093L ^ k.y * 19349663L ^ k.z * 83492791L);
    }
  };
  auto cell_of = [&](const Vec3& p) {
    return CellKey{static_cast<long>(std::floor(p.x / contact_threshold)),
                   static_cast<long>(std::floor(p.y / contact_threshold)),
                   static_cast<long>(std::floor(p.z / contact_threshold))};
  };
  std::unordered_map<CellKey, std::vector<int>, CellHash> grid;
  for (int i = 0; i < n; ++i) grid[cell_of(com[i])].push_back(i);

  const double cutoff2 = contact_threshold * contact_threshold;
  for (int i = 0; i < n; ++i) {
    const CellKey c = cell_of(com[i]);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            const double ddx = com[i].x - com[j].x;
            const double ddy = com[i].y - com[j].y;
            const double ddz = com[i].z - com[j].z;
            if (ddx * ddx + ddy * ddy + ddz * ddz <= cutoff2) g.edges.emplace_back(i, j);
          }
        }
      }
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (residues[i].chain_id == residues[i + 1].chain_id) g.edges.emplace_back(i, i + 1);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

}  // namespace dtagraph::structure
