#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "levelblend/grid.hpp"

namespace levelblend {

/// The five per-segment tile metrics. Percentages are in [0, 100]; nonlinearity
/// is in tile units.
struct FeatureVector {
  double density = 0.0;
  double nonlinearity = 0.0;
  double leniency = 0.0;
  double interestingness = 0.0;
  double path_proportion = 0.0;

  std::array<double, 5> values() const { return {density, nonlinearity, leniency, interestingness, path_proportion}; }
  bool operator==(const FeatureVector&) const = default;
};

enum class NonlinearityStat { kMeanAbsoluteResidual, kRootMeanSquare };

/// Share of cells that are neither background nor path.
double density(const Segment& segment);

/// Fits a least-squares line through the topmost occupied row of each column and
/// returns the residual spread. Columns with nothing but background, path or null
/// tiles are skipped; fewer than two usable columns gives 0.
double nonlinearity(const Segment& segment, NonlinearityStat stat = NonlinearityStat::kMeanAbsoluteResidual);

/// Share of cells without the hazard affordance.
double leniency(const Segment& segment);

/// Share of powerup, portal and collectable cells.
double interestingness(const Segment& segment);

/// Share of cells on the path: `P` cells plus the recorded agent path.
/// Throws for segments that were never annotated.
double path_proportion(const Segment& segment);

FeatureVector feature_vector(const Segment& segment);
std::vector<FeatureVector> feature_vectors(std::span<const Segment> segments);

/// Energy distance between two samples (V-statistic form, Euclidean norm).
double e_distance(std::span<const FeatureVector> a, std::span<const FeatureVector> b);

struct PermutationResult {
  double observed = 0.0;
  double p_value = 1.0;
  int exceed_count = 0;
  int resamples = 0;
};

/// Label-shuffling test on the pooled sample; p = (#{resampled >= observed} + 1) / (resamples + 1).
PermutationResult permutation_test(std::span<const FeatureVector> a, std::span<const FeatureVector> b,
                                   int resamples, std::uint64_t seed);

double permutation_pvalue(std::span<const FeatureVector> a, std::span<const FeatureVector> b, int resamples = 100,
                          std::uint64_t seed = 0);

/// Feature dump CSV: segment_id,game,density,nonlinearity,leniency,interestingness,path_proportion
std::string feature_csv_header();
std::string feature_csv_row(const std::string& segment_id, const std::string& game, const FeatureVector& f);

}  // namespace levelblend
