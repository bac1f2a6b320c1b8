#include <cmath>
#include <numeric>

#include "levelblend/metrics.hpp"
#include "levelblend/random.hpp"

namespace levelblend {
namespace {

double norm_between(const FeatureVector& a, const FeatureVector& b) {
  const auto x = a.values();
  const auto y = b.values();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(s);
}

double mean_pair_distance(std::span<const FeatureVector> a, std::span<const FeatureVector> b) {
  double s = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) s += norm_between(x, y);
  }
  return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

// Energy distance of a labelled split of a pooled sample, from its distance matrix.
double labelled_energy(const std::vector<double>& dist, std::size_t total, const std::vector<char>& in_a,
                       std::size_t n, std::size_t m) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double* row = dist.data() + i * total;
    for (std::size_t j = i + 1; j < total; ++j) {
      if (in_a[i] && in_a[j]) {
        aa += row[j];
      } else if (!in_a[i] && !in_a[j]) {
        bb += row[j];
      } else {
        ab += row[j];
      }
    }
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  // Off-diagonal pairs counted once above; the V-statistic sums both orders.
  return 2.0 * ab / (dn * dm) - 2.0 * aa / (dn * dn) - 2.0 * bb / (dm * dm);
}

}  // namespace

double e_distance(std::span<const FeatureVector> a, std::span<const FeatureVector> b) {
  if (a.empty() || b.empty()) throw Error("e_distance needs two non-empty samples");
  return 2.0 * mean_pair_distance(a, b) - mean_pair_distance(a, a) - mean_pair_distance(b, b);
}

PermutationResult permutation_test(std::span<const FeatureVector> a, std::span<const FeatureVector> b,
                                   int resamples, std::uint64_t seed) {
  if (a.empty() || b.empty()) throw Error("permutation test needs two non-empty samples");
  if (resamples < 1) throw Error("permutation test needs at least one resample");

  std::vector<FeatureVector> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t total = pooled.size();
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      dist[i * total + j] = dist[j * total + i] = norm_between(pooled[i], pooled[j]);
    }
  }

  std::vector<char> in_a(total, 0);
  std::fill(in_a.begin(), in_a.begin() + static_cast<std::ptrdiff_t>(a.size()), 1);
  PermutationResult result;
  result.resamples = resamples;
  result.observed = labelled_energy(dist, total, in_a, a.size(), b.size());

  Rng rng = make_rng(seed, "permutation");
  std::vector<std::size_t> order(total);
  for (int k = 0; k < resamples; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = total - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);
    std::fill(in_a.begin(), in_a.end(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) in_a[order[i]] = 1;
    if (labelled_energy(dist, total, in_a, a.size(), b.size()) >= result.observed) ++result.exceed_count;
  }
  result.p_value = static_cast<double>(result.exceed_count + 1) / static_cast<double>(resamples + 1);
  return result;
}

double permutation_pvalue(std::span<const FeatureVector> a, std::span<const FeatureVector> b, int resamples,
                          std::uint64_t seed) {
  return permutation_test(a, b, resamples, seed).p_value;
}

}  // namespace levelblend
