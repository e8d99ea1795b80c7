#include "dtagraph/feature_vector.hpp"

#include <cmath>
#include <string>

#include "dtagraph/error.hpp"

namespace dtagraph {

std::string_view feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::AAC: return "AAC";
    case FeatureKind::CTRIAD: return "CTRIAD";
    case FeatureKind::QSORDER: return "QSORDER";
    case FeatureKind::PROTEIN_CONCAT: return "PROTEIN_CONCAT";
    case FeatureKind::MORGAN: return "MORGAN";
    case FeatureKind::DAYLIGHT: return "DAYLIGHT";
    case FeatureKind::DRUG_CONCAT: return "DRUG_CONCAT";
  }
  return "?";
}

namespace {
bool is_composition(FeatureKind kind) {
  return kind == FeatureKind::AAC || kind == FeatureKind::CTRIAD || kind == FeatureKind::QSORDER;
}
}  // namespace

FeatureVector::FeatureVector(FeatureKind kind, std::vector<double> values)
    : kind_(kind), values_(std::move(values)) {
  if (values_.size() != feature_length(kind_)) {
    throw InvalidArgument(std::string(feature_kind_name(kind_)) + " vector must have " +
                          std::to_string(feature_length(kind_)) + " entries, got " +
                          std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || (is_composition(kind_) && v < 0.0)) {
      throw InvalidArgument(std::string(feature_kind_name(kind_)) + " vector has an invalid entry");
    }
  }
}

FeatureVector FeatureVector::slice(std::size_t offset, FeatureKind kind) const {
  const std::size_t n = feature_length(kind);
  if (offset + n > values_.size()) throw InvalidArgument("slice out of range");
  return FeatureVector(kind, std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(offset),
                                                 values_.begin() + static_cast<std::ptrdiff_t>(offset + n)));
}

}  // namespace dtagraph
