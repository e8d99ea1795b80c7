#include <gtest/gtest.h>

#include <cmath>

#include "dtagraph/error.hpp"
#include "dtagraph/feature_vector.hpp"

using namespace dtagraph;

TEST(FeatureVector, LengthsPerKind) {
  EXPECT_EQ(feature_length(FeatureKind::AAC), 8420u);
  EXPECT_EQ(feature_length(FeatureKind::CTRIAD), 343u);
  EXPECT_EQ(feature_length(FeatureKind::QSORDER), 100u);
  EXPECT_EQ(feature_length(FeatureKind::PROTEIN_CONCAT), 8863u);
  EXPECT_EQ(feature_length(FeatureKind::MORGAN), 1024u);
  EXPECT_EQ(feature_length(FeatureKind::DAYLIGHT), 2048u);
  EXPECT_EQ(feature_length(FeatureKind::DRUG_CONCAT), 3072u);
}

TEST(FeatureVector, RejectsWrongLength) {
  EXPECT_THROW(FeatureVector(FeatureKind::MORGAN, std::vector<double>(1023)), InvalidArgument);
}

TEST(FeatureVector, RejectsNonFinite) {
  std::vector<double> v(1024, 0.0);
  v[3] = std::nan("");
  EXPECT_THROW(FeatureVector(FeatureKind::MORGAN, v), InvalidArgument);
}

TEST(FeatureVector, CompositionKindsAreNonNegative) {
  std::vector<double> v(343, 0.0);
  v[0] = -0.1;
  EXPECT_THROW(FeatureVector(FeatureKind::CTRIAD, v), InvalidArgument);
}

TEST(FeatureVector, SliceChecksBounds) {
  FeatureVector v(FeatureKind::DRUG_CONCAT, std::vector<double>(3072, 1.0));
  EXPECT_EQ(v.slice(1024, FeatureKind::DAYLIGHT).size(), 2048u);
  EXPECT_THROW(v.slice(1025, FeatureKind::DAYLIGHT), InvalidArgument);
}
