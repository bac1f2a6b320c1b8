#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "levelblend/metrics.hpp"
#include "oracles.hpp"

namespace levelblend {
namespace {

class MetricFixtures : public ::testing::TestWithParam<int> {};

TEST_P(MetricFixtures, HandCountedValues) {
  const auto f = fixture::metric_fixtures()[static_cast<std::size_t>(GetParam())];
  const double cells = kSegmentCells;
  SCOPED_TRACE(f.name);
  EXPECT_EQ(density(f.segment), 100.0 * f.occupied / cells);
  EXPECT_EQ(leniency(f.segment), 100.0 * (kSegmentCells - f.hazards) / cells);
  EXPECT_EQ(interestingness(f.segment), 100.0 * f.interesting / cells);
  EXPECT_EQ(path_proportion(f.segment), 100.0 * f.path_cells / cells);
  EXPECT_NEAR(nonlinearity(f.segment), oracle::nonlinearity_closed_form(f.heights), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(All, MetricFixtures, ::testing::Range(0, 10));

TEST(Metrics, FixtureSetHasTenEntries) { EXPECT_EQ(fixture::metric_fixtures().size(), 10u); }

TEST(Metrics, StraightLinesHaveZeroNonlinearity) {
  const auto fixtures = fixture::metric_fixtures();
  for (const auto& f : fixtures) {
    if (f.name == "flat ground" || f.name == "empty") {
      EXPECT_EQ(nonlinearity(f.segment), 0.0) << f.name;
    }
  }
}

TEST(Metrics, RootMeanSquareIsAtLeastMeanAbsolute) {
  for (const auto& f : fixture::metric_fixtures()) {
    EXPECT_GE(nonlinearity(f.segment, NonlinearityStat::kRootMeanSquare) + 1e-12, nonlinearity(f.segment)) << f.name;
  }
}

TEST(Metrics, PathProportionNeedsAnnotation) {
  Segment s;
  s.annotated = false;
  EXPECT_THROW(path_proportion(s), Error);
}

TEST(Metrics, FeatureVectorBundlesTheFive) {
  const auto f = fixture::metric_fixtures()[5];
  const FeatureVector v = feature_vector(f.segment);
  EXPECT_EQ(v.density, density(f.segment));
  EXPECT_EQ(v.nonlinearity, nonlinearity(f.segment));
  EXPECT_EQ(v.leniency, leniency(f.segment));
  EXPECT_EQ(v.interestingness, interestingness(f.segment));
  EXPECT_EQ(v.path_proportion, path_proportion(f.segment));
}

TEST(EDistance, MatchesBruteForceOracle) {
  Rng rng = make_rng(21, "e-distance");
  for (int t = 0; t < 30; ++t) {
    std::vector<FeatureVector> a(1 + uniform_index(rng, 30)), b(1 + uniform_index(rng, 30));
    for (auto& x : a) x = fixture::gaussian_features(rng);
    for (auto& x : b) x = fixture::gaussian_features(rng, 1.5);
    EXPECT_NEAR(e_distance(a, b), oracle::e_distance_brute(a, b), 1e-9);
  }
}

TEST(EDistance, ZeroForIdenticalSamplesSymmetricAndNonNegative) {
  Rng rng = make_rng(22, "e-distance-props");
  std::vector<FeatureVector> a(20), b(25);
  for (auto& x : a) x = fixture::gaussian_features(rng);
  for (auto& x : b) x = fixture::gaussian_features(rng);
  EXPECT_NEAR(e_distance(a, a), 0.0, 1e-12);
  EXPECT_NEAR(e_distance(a, b), e_distance(b, a), 1e-12);
  EXPECT_GE(e_distance(a, b), 0.0);
}

TEST(EDistance, SinglePointsGiveTwiceTheirDistance) {
  FeatureVector x, y;
  y.density = 3;
  y.leniency = 4;
  const std::vector<FeatureVector> a = {x}, b = {y};
  EXPECT_DOUBLE_EQ(e_distance(a, b), 10.0);
}

TEST(EDistance, EmptySampleThrows) {
  const std::vector<FeatureVector> a = {FeatureVector{}}, none;
  EXPECT_THROW(e_distance(a, none), Error);
}

TEST(Permutation, PValueBoundsAndDeterminism) {
  Rng rng = make_rng(23, "perm");
  std::vector<FeatureVector> a(30), b(30);
  for (auto& x : a) x = fixture::gaussian_features(rng);
  for (auto& x : b) x = fixture::gaussian_features(rng);
  const auto r = permutation_test(a, b, 99, 4);
  EXPECT_EQ(r.resamples, 99);
  EXPECT_DOUBLE_EQ(r.p_value, (r.exceed_count + 1.0) / 100.0);
  EXPECT_GE(r.p_value, 1.0 / 100.0);
  EXPECT_LE(r.p_value, 1.0);
  EXPECT_NEAR(r.observed, e_distance(a, b), 1e-12);
  EXPECT_EQ(permutation_test(a, b, 99, 4).p_value, r.p_value);
}

TEST(Permutation, SeparatedSamplesReachTheFloor) {
  Rng rng = make_rng(24, "perm-far");
  std::vector<FeatureVector> a(20), b(20);
  for (auto& x : a) x = fixture::gaussian_features(rng);
  for (auto& x : b) x = fixture::gaussian_features(rng, 10.0);
  EXPECT_DOUBLE_EQ(permutation_pvalue(a, b, 100, 1), 1.0 / 101.0);
}

TEST(Metrics, FeatureCsvShape) {
  EXPECT_EQ(feature_csv_header(), "segment_id,game,density,nonlinearity,leniency,interestingness,path_proportion\n");
  FeatureVector f;
  f.density = 12.5;
  const std::string row = feature_csv_row("00001", "SMB", f);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 6);
  EXPECT_EQ(row.rfind("00001,SMB,12.5", 0), 0u);
}

}  // namespace
}  // namespace levelblend
