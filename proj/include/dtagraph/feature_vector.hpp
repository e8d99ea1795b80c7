#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dtagraph {

enum class FeatureKind { AAC, CTRIAD, QSORDER, PROTEIN_CONCAT, MORGAN, DAYLIGHT, DRUG_CONCAT };

/// Fixed output width of each descriptor kind.
constexpr std::size_t feature_length(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::AAC: return 8420;
    case FeatureKind::CTRIAD: return 343;
    case FeatureKind::QSORDER: return 100;
    case FeatureKind::PROTEIN_CONCAT: return 8863;
    case FeatureKind::MORGAN: return 1024;
    case FeatureKind::DAYLIGHT: return 2048;
    case FeatureKind::DRUG_CONCAT: return 3072;
  }
  return 0;
}

std::string_view feature_kind_name(FeatureKind kind);

/// A descriptor whose length is tied to its kind. Entries are finite; the
/// composition kinds (AAC, CTRIAD, QSORDER) are also non-negative.
class FeatureVector {
 public:
  FeatureVector(FeatureKind kind, std::vector<double> values);

  FeatureKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Copy of entries [offset, offset + length) re-tagged as `kind`.
  FeatureVector slice(std::size_t offset, FeatureKind kind) const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  FeatureKind kind_;
  std::vector<double> values_;
};

}  // namespace dtagraph
