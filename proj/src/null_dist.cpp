#include "lmhet/null_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lmhet/errors.hpp"
#include "lmhet/parallel.hpp"
#include "lmhet/rng.hpp"

namespace lmhet {

namespace {

constexpr std::int64_t kChunk = 8192;

void validate(const NullSimulationConfig& c) {
  const int s = static_cast<int>(c.shares.size());
  if (s < 2) throw InputError("need at least 2 group shares");
  double sum = 0.0;
  for (double sh : c.shares) {
    if (!(sh > 0.0)) throw InputError("group shares must be positive");
    sum += sh;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InputError("group shares must sum to 1, got " + std::to_string(sum));
  if (c.d < 1) throw InputError("score dimension must be at least 1");
  if (c.n_draws < 1000) throw InputError("need at least 1000 draws");
}

}  // namespace

NullSample simulate_null(const NullSimulationConfig& config, int n_threads) {
  validate(config);
  const int s = static_cast<int>(config.shares.size());
  const int d = config.d;

  std::vector<double> inv_sqrt(s), inv(s);
  for (int j = 0; j < s; ++j) {
    inv_sqrt[j] = 1.0 / std::sqrt(config.shares[j]);
    inv[j] = 1.0 / config.shares[j];
  }
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> denom;
  for (int j = 0; j < s; ++j)
    for (int k = j + 1; k < s; ++k) {
      pairs.emplace_back(j, k);
      denom.push_back(inv[j] + inv[k]);
    }

  NullSample out;
  out.max_draws.resize(config.n_draws);
  out.min_draws.resize(config.n_draws);

  const RngStream root(config.seed);
  const std::int64_t n_chunks = (config.n_draws + kChunk - 1) / kChunk;
  detail::parallel_for(n_chunks, n_threads, [&](std::int64_t chunk) {
    RngStream rng = root.substream(static_cast<std::uint64_t>(chunk));
    const std::int64_t lo = chunk * kChunk;
    const std::int64_t hi = std::min(lo + kChunk, config.n_draws);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> z(s, d);
    for (std::int64_t t = lo; t < hi; ++t) {
      for (int j = 0; j < s; ++j) {
        const double a = inv_sqrt[j];
        for (int c = 0; c < d; ++c) z(j, c) = a * rng.std_normal();
      }
      double best_max = 0.0, best_min = 0.0;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [j, k] = pairs[p];
        const double q = (z.row(j) - z.row(k)).squaredNorm() / denom[p];
        if (p == 0) {
          best_max = best_min = q;
        } else {
          if (q > best_max) best_max = q;
          if (q < best_min) best_min = q;
        }
      }
      out.max_draws[t] = best_max;
      out.min_draws[t] = best_min;
    }
  });
  return out;
}

double critical_value(const Vector& draws, double alpha) {
  const std::int64_t n = draws.size();
  if (n < 1) throw InputError("empty draw sample");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  const double x = (1.0 - alpha) * static_cast<double>(n);
  const double snapped = std::nearbyint(x);
  // ceil in exact arithmetic: tiny float error around integer targets must
  // not shift the order statistic by one
  std::int64_t k = (std::abs(x - snapped) < 4096 * std::numeric_limits<double>::epsilon() *
                                                std::max(1.0, x))
                       ? static_cast<std::int64_t>(snapped)
                       : static_cast<std::int64_t>(std::ceil(x));
  k = std::clamp<std::int64_t>(k, 1, n);
  std::vector<double> work(draws.data(), draws.data() + n);
  std::nth_element(work.begin(), work.begin() + (k - 1), work.end());
  return work[k - 1];
}

double asymptotic_pvalue(const Vector& draws, double observed) {
  const std::int64_t n = draws.size();
  if (n < 1) throw InputError("empty draw sample");
  if (!std::isfinite(observed)) throw InputError("observed statistic is not finite");
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < n; ++i)
    if (draws[i] >= observed) ++count;
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace lmhet
