#pragma once

#include <cstdint>
#include <vector>

#include "lmhet/lm_stat.hpp"
#include "lmhet/types.hpp"

namespace lmhet {

struct PermutationResult {
  int B = 0;
  double observed_lm1 = 0.0;
  double observed_lm2 = 0.0;
  Vector permuted_lm1;  // length B
  Vector permuted_lm2;
  double p1 = 1.0;  // (1 + #{b : permuted >= observed}) / (B + 1)
  double p2 = 1.0;
};

// Rows reordered so that out.row(i) = in.row(perm[i]); perm must be a
// bijection on 0..N-1 (InputError otherwise).
LoadingMatrix permute_loadings(const LoadingMatrix& loadings, const std::vector<int>& perm);

// Randomization test of group homogeneity: under the null the group labels
// are exchangeable across series, so the statistics are recomputed under B
// uniform random reassignments (permutation b drawn from substream b of
// seed, hence reproducible for any thread count) and compared with the
// observed values.  p-values live on the grid {1/(B+1), .., 1}.
PermutationResult permutation_test(const LmEngine& engine, int B, std::uint64_t seed,
                                   int n_threads = 0);

PermutationResult permutation_test(const LoadingMatrix& loadings,
                                   const GroupStructure& groups, int B,
                                   std::uint64_t seed, int n_threads = 0);

}  // namespace lmhet
