#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "lmhet/rng.hpp"

using namespace lmhet;

// Golden values cross-checked against a separate implementation of the same
// generator stack; they freeze the exact output sequence.
TEST_CASE("mix64 golden values") {
  CHECK(mix64(0) == UINT64_C(0xe220a8397b1dcdaf));
  CHECK(mix64(42) == UINT64_C(0xbdd732262feb6e95));
}

TEST_CASE("raw stream golden values for seed 42") {
  RngStream rng(42);
  CHECK(rng.next_u64() == UINT64_C(0xc757960b442b0ac3));
  CHECK(rng.next_u64() == UINT64_C(0x4bb22a7f77ff8c6c));
  CHECK(rng.next_u64() == UINT64_C(0x04950439d3c5eafe));
  CHECK(rng.next_u64() == UINT64_C(0xb769fb44902f2dc2));
}

TEST_CASE("uniform golden values for seed 42") {
  RngStream rng(42);
  CHECK(rng.uniform01() == 0x1.8eaf2c1688561p-1);
  CHECK(rng.uniform01() == 0x1.2ec8a9fddffe2p-2);
  CHECK(rng.uniform01() == 0x1.25410e74f17a0p-6);
  CHECK(rng.uniform01() == 0x1.6ed3f689205e5p-1);
}

TEST_CASE("normal golden values for seed 42") {
  RngStream rng(42);
  CHECK(rng.std_normal() == 0x1.f5f89b113f19bp-1);
  CHECK(rng.std_normal() == -0x1.700459325826dp-1);
  CHECK(rng.std_normal() == -0x1.fb2f5b0c7d75dp-4);
  CHECK(rng.std_normal() == -0x1.37297f4ec2c68p-2);
}

TEST_CASE("substreams are pinned by origin and index") {
  const RngStream base(42);
  RngStream sub = base.substream(7);
  CHECK(sub.origin() == UINT64_C(0xfe2f108189f83df6));
  CHECK(sub.next_u64() == UINT64_C(0xc08a49deef6cc8c4));
  CHECK(sub.next_u64() == UINT64_C(0x27ea220bd9905481));

  // deriving the same substream twice gives the same sequence even after
  // the first copy has consumed draws
  RngStream again = base.substream(7);
  RngStream more = base.substream(7);
  (void)more.next_u64();
  CHECK(again.next_u64() == UINT64_C(0xc08a49deef6cc8c4));
}

TEST_CASE("random permutations golden values") {
  RngStream rng(42);
  CHECK(random_permutation(rng, 10) == std::vector<int>{8, 3, 4, 6, 9, 1, 5, 0, 2, 7});
  RngStream rng7(7);
  CHECK(random_permutation(rng7, 5) == std::vector<int>{0, 4, 2, 3, 1});
  RngStream rng1(1);
  CHECK(random_permutation(rng1, 1) == std::vector<int>{0});
  CHECK_THROWS_AS(random_permutation(rng1, 0), InputError);
}

TEST_CASE("uniform bounds and argument checking") {
  RngStream rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform(0.5, 1.5);
    CHECK(u >= 0.5);
    CHECK(u < 1.5);
  }
  CHECK_THROWS_AS(rng.uniform(1.0, 1.0), InputError);
  CHECK_THROWS_AS(rng.uniform(2.0, 1.0), InputError);
}

TEST_CASE("normal draws have the right moments") {
  RngStream rng(12345);
  const int n = 1000000;
  double sum = 0, sum2 = 0, sum3 = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.std_normal();
    sum += x;
    sum2 += x * x;
    sum3 += x * x * x;
    sum4 += x * x * x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.004);          // ~4 sigma band
  CHECK(std::abs(var - 1.0) < 0.006);
  CHECK(std::abs(sum3 / n) < 0.01);
  CHECK(std::abs(sum4 / n - 3.0) < 0.03);
}

TEST_CASE("distinct substreams are uncorrelated") {
  const RngStream base(99);
  RngStream a = base.substream(1);
  RngStream b = base.substream(2);
  const int n = 1000000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.std_normal();
    const double y = b.std_normal();
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double corr = cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) *
                                      (syy / n - (sy / n) * (sy / n)));
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("permutations are close to uniform over all orderings") {
  RngStream rng(2024);
  const int n = 4;
  const int trials = 24000;
  std::vector<int> counts(24, 0);
  for (int t = 0; t < trials; ++t) {
    const std::vector<int> p = random_permutation(rng, n);
    // Lehmer code as an index into the 24 orderings
    int code = 0;
    for (int i = 0; i < n; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < n; ++j)
        if (p[j] < p[i]) ++smaller;
      code = code * (n - i) + smaller;
    }
    ++counts[code];
  }
  const double expected = trials / 24.0;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 0.999 quantile of chi-square with 23 degrees of freedom is about 49.7
  CHECK(chi2 < 55.0);
}
