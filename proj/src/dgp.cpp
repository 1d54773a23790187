#include "lmhet/dgp.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "lmhet/types.hpp"

namespace lmhet {

namespace {

constexpr int kNumGroups = 4;

bool family_two(DgpKind kind) {
  return kind == DgpKind::TwoA || kind == DgpKind::TwoB || kind == DgpKind::TwoC;
}

bool layout_c(DgpKind kind) { return kind == DgpKind::OneC || kind == DgpKind::TwoC; }

std::vector<std::string> series_ids(int n) {
  int width = 1;
  for (int v = n; v >= 10; v /= 10) ++width;
  std::vector<std::string> ids;
  ids.reserve(n);
  for (int i = 1; i <= n; ++i) {
    std::string num = std::to_string(i);
    ids.push_back("s" + std::string(width - num.size(), '0') + num);
  }
  return ids;
}

}  // namespace

std::vector<int> dgp_group_sizes(int n) {
  std::vector<int> sizes(kNumGroups, n / kNumGroups);
  for (int j = 0; j < n % kNumGroups; ++j) ++sizes[j];
  return sizes;
}

DgpKind parse_dgp_kind(const std::string& name) {
  if (name == "1-a") return DgpKind::OneA;
  if (name == "2-a") return DgpKind::TwoA;
  if (name == "1-b") return DgpKind::OneB;
  if (name == "2-b") return DgpKind::TwoB;
  if (name == "1-c") return DgpKind::OneC;
  if (name == "2-c") return DgpKind::TwoC;
  throw InputError("unknown design '" + name + "' (expected 1-a, 1-b, 1-c, 2-a, 2-b or 2-c)");
}

std::string dgp_kind_name(DgpKind kind) {
  switch (kind) {
    case DgpKind::OneA: return "1-a";
    case DgpKind::TwoA: return "2-a";
    case DgpKind::OneB: return "1-b";
    case DgpKind::TwoB: return "2-b";
    case DgpKind::OneC: return "1-c";
    case DgpKind::TwoC: return "2-c";
  }
  throw InputError("invalid design kind");
}

bool dgp_has_group_factors(DgpKind kind) {
  return kind != DgpKind::OneA && kind != DgpKind::TwoA;
}

void validate_dgp(const DgpConfig& c) {
  if (c.N < 2 * kNumGroups)
    throw InputError("need at least " + std::to_string(2 * kNumGroups) + " series, got " +
                     std::to_string(c.N));
  if (c.T < 2) throw InputError("need at least 2 periods");
  if (family_two(c.kind)) {
    if (c.P < 0) throw InputError("moving-average bandwidth must be non-negative");
    if (2 * c.P >= c.N)
      throw InputError("moving-average bandwidth too large for " + std::to_string(c.N) +
                       " series");
  }
  if (dgp_has_group_factors(c.kind)) {
    // equicorrelation matrix of 4 factors is positive definite iff
    // -1/3 < rho < 1
    if (!(c.rho > -1.0 / 3.0 && c.rho < 1.0))
      throw InputError("factor correlation must lie in (-1/3, 1), got " +
                       std::to_string(c.rho));
  }
}

double dgp_kappa(const DgpConfig& c) {
  const double signal = 1.0 + c.b * c.b;
  if (!family_two(c.kind)) return std::sqrt(signal);
  const double ma_var = 1.0 + 2.0 * c.P * c.theta * c.theta;
  return std::sqrt(12.0 * signal / (13.0 * ma_var));
}

GeneratedPanel generate_dgp(const DgpConfig& config, RngStream& rng) {
  validate_dgp(config);
  const int n = config.N;
  const int t = config.T;
  const bool grouped = dgp_has_group_factors(config.kind);
  const double kappa = dgp_kappa(config);

  Vector common_load(n);
  for (int i = 0; i < n; ++i) common_load[i] = config.b + rng.std_normal();

  Vector group_load;
  if (grouped) {
    group_load.resize(n);
    for (int i = 0; i < n; ++i) group_load[i] = config.b + rng.std_normal();
  }

  Vector common_factor(t);
  for (int s = 0; s < t; ++s) common_factor[s] = rng.std_normal();

  Matrix group_factors;  // T x 4
  if (grouped) {
    Matrix corr = Matrix::Constant(kNumGroups, kNumGroups, config.rho);
    corr.diagonal().setOnes();
    const Matrix chol = Eigen::LLT<Matrix>(corr).matrixL();
    group_factors.resize(t, kNumGroups);
    Vector z(kNumGroups);
    for (int s = 0; s < t; ++s) {
      for (int g = 0; g < kNumGroups; ++g) z[g] = rng.std_normal();
      group_factors.row(s) = (chol * z).transpose();
    }
    if (layout_c(config.kind)) {
      group_factors.col(1) = group_factors.col(0);
      group_factors.col(2) = group_factors.col(0);
    }
  }

  Matrix err(n, t);
  if (!family_two(config.kind)) {
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < t; ++s) err(i, s) = rng.std_normal();
  } else {
    Vector sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = rng.uniform(0.5, 1.5);
    Matrix u(n, t);
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < t; ++s) u(i, s) = rng.std_normal();
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < t; ++s) {
        double acc = u(i, s);
        for (int l = 1; l <= config.P; ++l) {
          acc += config.theta * u((i + l) % n, s);
          acc += config.theta * u((i + n - l) % n, s);
        }
        err(i, s) = sigma[i] * acc;
      }
  }

  GeneratedPanel out;
  out.groups = make_contiguous_groups(dgp_group_sizes(n));
  out.panel.values.resize(n, t);
  for (int j = 0, i = 0; j < kNumGroups; ++j) {
    for (int g = 0; g < out.groups.sizes[j]; ++g, ++i) {
      for (int s = 0; s < t; ++s) {
        double x = common_load[i] * common_factor[s] + kappa * err(i, s);
        if (grouped) x += group_load[i] * group_factors(s, j);
        out.panel.values(i, s) = x;
      }
    }
  }
  out.panel.series_ids = series_ids(n);
  return out;
}

GeneratedPanel generate_dgp(const DgpConfig& config) {
  RngStream rng(config.seed);
  return generate_dgp(config, rng);
}

}  // namespace lmhet
