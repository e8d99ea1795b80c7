#include <algorithm>
#include <cctype>
#include <string>

#include "dtagraph/error.hpp"
#include "dtagraph/protein_graph.hpp"

namespace dtagraph::structure {

namespace {

struct ElementMass {
  std::string_view symbol;
  double mass;
};

constexpr ElementMass kElementMasses[] = {
    {"H", 1.008},   {"D", 2.014},    {"C", 12.011},  {"N", 14.007},  {"O", 15.999},
    {"F", 18.998},  {"NA", 22.990},  {"MG", 24.305}, {"P", 30.974},  {"S", 32.06},
    {"CL", 35.45},  {"K", 39.098},   {"CA", 40.078}, {"MN", 54.938}, {"FE", 55.845},
    {"CO", 58.933}, {"NI", 58.693},  {"CU", 63.546}, {"ZN", 65.38},  {"SE", 78.971},
    {"BR", 79.904}, {"I", 126.904},
};

struct ResidueName {
  std::string_view three;
  char one;
};

constexpr ResidueName kResidueNames[] = {
    {"ALA", 'A'}, {"ARG", 'R'}, {"ASN", 'N'}, {"ASP", 'D'}, {"CYS", 'C'}, {"GLN", 'Q'},
    {"GLU", 'E'}, {"GLY", 'G'}, {"HIS", 'H'}, {"ILE", 'I'}, {"LEU", 'L'}, {"LYS", 'K'},
    {"MET", 'M'}, {"PHE", 'F'}, {"PRO", 'P'}, {"SER", 'S'}, {"THR", 'T'}, {"TRP", 'W'},
    {"TYR", 'Y'}, {"VAL", 'V'},
    // modified residues mapped to their parent
    {"MSE", 'M'}, {"SEC", 'C'}, {"PYL", 'K'}, {"HID", 'H'}, {"HIE", 'H'}, {"HIP", 'H'},
    {"CYX", 'C'},
};

// Free amino acid weights, Kyte-Doolittle hydropathy, and pKa values
// (carboxyl, amino, side chain) from standard biochemistry tables.
struct PropertyRow {
  char aa;
  ResidueProperties props;
};

constexpr PropertyRow kProperties[] = {
    {'A', {89.09, false, 1.8, 2.34, 9.69, 0.0}},
    {'C', {121.16, true, 2.5, 1.96, 10.28, 8.18}},
    {'D', {133.10, true, -3.5, 1.88, 9.60, 3.65}},
    {'E', {147.13, true, -3.5, 2.19, 9.67, 4.25}},
    {'F', {165.19, false, 2.8, 1.83, 9.13, 0.0}},
    {'G', {75.07, false, -0.4, 2.34, 9.60, 0.0}},
    {'H', {155.16, true, -3.2, 1.82, 9.17, 6.00}},
    {'I', {131.17, false, 4.5, 2.36, 9.60, 0.0}},
    {'K', {146.19, true, -3.9, 2.18, 8.95, 10.53}},
    {'L', {131.17, false, 3.8, 2.36, 9.60, 0.0}},
    {'M', {149.21, false, 1.9, 2.28, 9.21, 0.0}},
    {'N', {132.12, true, -3.5, 2.02, 8.80, 0.0}},
    {'P', {115.13, false, -1.6, 1.99, 10.96, 0.0}},
    {'Q', {146.15, true, -3.5, 2.17, 9.13, 0.0}},
    {'R', {174.20, true, -4.5, 2.17, 9.04, 12.48}},
    {'S', {105.09, true, -0.8, 2.21, 9.15, 0.0}},
    {'T', {119.12, true, -0.7, 2.11, 9.62, 0.0}},
    {'V', {117.15, false, 4.2, 2.32, 9.62, 0.0}},
    {'W', {204.23, false, -0.9, 2.38, 9.39, 0.0}},
    {'Y', {181.19, true, -1.3, 2.20, 9.11, 10.07}},
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

double element_mass(std::string_view element) noexcept {
  const std::string key = upper(element);
  for (const auto& e : kElementMasses) {
    if (e.symbol == key) return e.mass;
  }
  return 0.0;
}

char residue_one_letter(std::string_view resname) noexcept {
  const std::string key = upper(resname);
  for (const auto& r : kResidueNames) {
    if (r.three == key) return r.one;
  }
  return '\0';
}

const ResidueProperties& residue_properties(char aa) {
  for (const auto& row : kProperties) {
    if (row.aa == aa) return row.props;
  }
  throw InvalidArgument(std::string("no residue properties for '") + aa + "'");
}

}  // namespace dtagraph::structure
