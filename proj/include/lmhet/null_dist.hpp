#pragma once

#include <cstdint>
#include <vector>

#include "lmhet/types.hpp"

namespace lmhet {

struct NullSimulationConfig {
  std::vector<double> shares;       // group shares, each > 0, summing to 1
  int d = 1;                        // score dimension per group, r(r+1)/2
  std::int64_t n_draws = 500000;
  std::uint64_t seed = 0;
};

// Draw-by-draw extrema of the limiting pair statistics.
struct NullSample {
  Vector max_draws;
  Vector min_draws;
};

// Simulate the joint limiting law of the pair statistics under homogeneity:
// per draw, independent d-dimensional standard normal blocks Z_1..Z_S (one
// per group, shared across every pair involving that group, filled group by
// group) give, for each pair j < k,
//   Q(j,k) = || Z_j / sqrt(s_j) - Z_k / sqrt(s_k) ||^2 / (1/s_j + 1/s_k)
// with s_j the group shares; the max and min over pairs are recorded.  Draws
// are partitioned into fixed 8192-draw chunks, each on its own substream of
// seed, so results are identical for any thread count.
NullSample simulate_null(const NullSimulationConfig& config, int n_threads = 0);

// Empirical (1 - alpha) quantile without interpolation: the k-th smallest
// draw with k = ceil((1 - alpha) * n).
double critical_value(const Vector& draws, double alpha);

// Fraction of draws at or above the observed statistic.
double asymptotic_pvalue(const Vector& draws, double observed);

}  // namespace lmhet
