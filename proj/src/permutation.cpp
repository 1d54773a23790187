#include "lmhet/permutation.hpp"

#include "lmhet/parallel.hpp"
#include "lmhet/rng.hpp"

namespace lmhet {

LoadingMatrix permute_loadings(const LoadingMatrix& loadings, const std::vector<int>& perm) {
  const Index n = loadings.values.rows();
  if (static_cast<Index>(perm.size()) != n)
    throw InputError("permutation length " + std::to_string(perm.size()) +
                     " does not match row count " + std::to_string(n));
  std::vector<char> seen(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw InputError("permutation is not a bijection on 0.." + std::to_string(n - 1));
    seen[p] = 1;
  }
  LoadingMatrix out;
  out.values.resize(n, loadings.values.cols());
  for (Index i = 0; i < n; ++i) out.values.row(i) = loadings.values.row(perm[i]);
  return out;
}

PermutationResult permutation_test(const LmEngine& engine, int B, std::uint64_t seed,
                                   int n_threads) {
  if (B < 1) throw InputError("need at least 1 permutation, got " + std::to_string(B));
  const int n = static_cast<int>(engine.groups().num_vars());

  PermutationResult out;
  out.B = B;
  const LmEngine::Values observed = engine.compute();
  out.observed_lm1 = observed.lm1;
  out.observed_lm2 = observed.lm2;
  out.permuted_lm1.resize(B);
  out.permuted_lm2.resize(B);

  const RngStream root(seed);
  detail::parallel_for(B, n_threads, [&](std::int64_t b) {
    RngStream rng = root.substream(static_cast<std::uint64_t>(b));
    const std::vector<int> perm = random_permutation(rng, n);
    const LmEngine::Values vals = engine.compute(perm);
    out.permuted_lm1[b] = vals.lm1;
    out.permuted_lm2[b] = vals.lm2;
  });

  int c1 = 0, c2 = 0;
  for (int b = 0; b < B; ++b) {
    if (out.permuted_lm1[b] >= out.observed_lm1) ++c1;
    if (out.permuted_lm2[b] >= out.observed_lm2) ++c2;
  }
  out.p1 = static_cast<double>(1 + c1) / static_cast<double>(B + 1);
  out.p2 = static_cast<double>(1 + c2) / static_cast<double>(B + 1);
  return out;
}

PermutationResult permutation_test(const LoadingMatrix& loadings,
                                   const GroupStructure& groups, int B,
                                   std::uint64_t seed, int n_threads) {
  const LmEngine engine(loadings, groups);
  return permutation_test(engine, B, seed, n_threads);
}

}  // namespace lmhet
