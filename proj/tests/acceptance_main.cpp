// End-to-end acceptance gate: eight numbered checks covering Monte Carlo
// size and power on the simulated designs, agreement between the inference
// modes, the distributional reduction of the simulated null with two
// groups, a large-panel critical value table, and the library's core
// invariants.  Every tolerance is pinned here in code.  Each check prints
// one PASS or FAIL line; run with an argument 1..8 for a single check, no
// argument for all.  The exit status is the number of failures.
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "lmhet/dgp.hpp"
#include "lmhet/experiment.hpp"
#include "lmhet/lm_stat.hpp"
#include "lmhet/null_dist.hpp"
#include "lmhet/pca.hpp"
#include "lmhet/permutation.hpp"
#include "lmhet/rng.hpp"
#include "lmhet/vech.hpp"
#include "oracles.hpp"

namespace {

using namespace lmhet;

constexpr std::uint64_t kSeedSize1 = 1101;
constexpr std::uint64_t kSeedSize2 = 1102;
constexpr std::uint64_t kSeedPower = 1103;
constexpr std::uint64_t kSeedDivergent = 1104;
constexpr std::uint64_t kSeedNullLaw = 1106;
constexpr std::uint64_t kSeedCritTable = 1107;
constexpr std::uint64_t kSeedProperties = 1108;

bool report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

ExperimentConfig base_config(DgpKind kind, int n, int t, int m, InferenceMode mode,
                             std::uint64_t seed) {
  ExperimentConfig c;
  c.kind = kind;
  c.grid = {{n, t}};
  c.replications = m;
  c.alpha = 0.05;
  c.inference = mode;
  c.rmax = 10;
  c.num_permutations = 199;  // (B + 1) * alpha = 10, so p <= alpha is exact
  c.null_draws = 500000;
  c.seed = seed;
  c.n_threads = 0;
  return c;
}

// check 1: size on design 1-a, N=80, T=50, M=2000, alpha 0.05,
// asymptotic critical values; LM1 in [2.9, 5.8] and LM2 in [3.4, 6.4]
// (reference rates 4.35 and 4.87 plus/minus three Monte Carlo standard
// errors at M=2000)
bool check_size_1a() {
  const auto res =
      run_experiment(base_config(DgpKind::OneA, 80, 50, 2000, InferenceMode::Asymptotic,
                                 kSeedSize1));
  const CellResult& cell = res.cells[0];
  const bool ok1 = cell.reject_asym_lm1 >= 2.9 && cell.reject_asym_lm1 <= 5.8;
  const bool ok2 = cell.reject_asym_lm2 >= 3.4 && cell.reject_asym_lm2 <= 6.4;
  return report(1, ok1 && ok2,
                fmt("size 1-a 80x50 M=2000: LM1 %.2f%% in [2.90, 5.80] %s, "
                    "LM2 %.2f%% in [3.40, 6.40] %s",
                    cell.reject_asym_lm1, ok1 ? "yes" : "NO", cell.reject_asym_lm2,
                    ok2 ? "yes" : "NO"));
}

// check 2: size on design 2-a, N=120, T=100, M=1000; both statistics
// within 2 percentage points of the reference rates 5.16 and 5.33
bool check_size_2a() {
  const auto res =
      run_experiment(base_config(DgpKind::TwoA, 120, 100, 1000, InferenceMode::Asymptotic,
                                 kSeedSize2));
  const CellResult& cell = res.cells[0];
  const double gap1 = std::abs(cell.reject_asym_lm1 - 5.16);
  const double gap2 = std::abs(cell.reject_asym_lm2 - 5.33);
  const bool ok = gap1 <= 2.0 && gap2 <= 2.0;
  return report(2, ok,
                fmt("size 2-a 120x100 M=1000: LM1 %.2f%% (ref 5.16, gap %.2f <= 2.00), "
                    "LM2 %.2f%% (ref 5.33, gap %.2f <= 2.00)",
                    cell.reject_asym_lm1, gap1, cell.reject_asym_lm2, gap2));
}

// check 3: power on design 1-b, N=200, T=100, M=500; LM1 at least 99%,
// LM2 at least 98%
bool check_power_1b() {
  const auto res =
      run_experiment(base_config(DgpKind::OneB, 200, 100, 500, InferenceMode::Asymptotic,
                                 kSeedPower));
  const CellResult& cell = res.cells[0];
  const bool ok = cell.reject_asym_lm1 >= 99.0 && cell.reject_asym_lm2 >= 98.0;
  return report(3, ok,
                fmt("power 1-b 200x100 M=500: LM1 %.2f%% >= 99.00, LM2 %.2f%% >= 98.00",
                    cell.reject_asym_lm1, cell.reject_asym_lm2));
}

// check 4: design 1-c, N=160, T=100, M=500, where only some pairs differ:
// the max statistic must fire (>= 95%) while the min must not (<= 15%)
bool check_divergent_1c() {
  const auto res =
      run_experiment(base_config(DgpKind::OneC, 160, 100, 500, InferenceMode::Asymptotic,
                                 kSeedDivergent));
  const CellResult& cell = res.cells[0];
  const bool ok = cell.reject_asym_lm1 >= 95.0 && cell.reject_asym_lm2 <= 15.0;
  return report(4, ok,
                fmt("partial heterogeneity 1-c 160x100 M=500: LM1 %.2f%% >= 95.00, "
                    "LM2 %.2f%% <= 15.00",
                    cell.reject_asym_lm1, cell.reject_asym_lm2));
}

// check 5: asymptotic and permutation decisions agree to within 2
// percentage points on the 1-a and 1-b cells, with both modes computed
// from the same replication streams
bool check_mode_agreement() {
  const auto null_res =
      run_experiment(base_config(DgpKind::OneA, 80, 50, 2000, InferenceMode::Both,
                                 kSeedSize1));
  const auto power_res =
      run_experiment(base_config(DgpKind::OneB, 200, 100, 500, InferenceMode::Both,
                                 kSeedPower));
  const CellResult& a = null_res.cells[0];
  const CellResult& b = power_res.cells[0];
  const double gaps[4] = {std::abs(a.reject_asym_lm1 - a.reject_perm_lm1),
                          std::abs(a.reject_asym_lm2 - a.reject_perm_lm2),
                          std::abs(b.reject_asym_lm1 - b.reject_perm_lm1),
                          std::abs(b.reject_asym_lm2 - b.reject_perm_lm2)};
  const double worst = *std::max_element(gaps, gaps + 4);
  return report(5, worst <= 2.0,
                fmt("inference mode agreement, B=199: gaps 1-a (%.2f, %.2f) and "
                    "1-b (%.2f, %.2f) percentage points, worst %.2f <= 2.00",
                    gaps[0], gaps[1], gaps[2], gaps[3], worst));
}

// check 6: with two groups every pair statistic is the same and its null
// law collapses to chi-square(d); at 500k draws the simulated max/min must
// sit within Kolmogorov-Smirnov distance 0.005 of chi-square(d) for
// d in {1, 3, 6} and put the 95% quantile within 2% of the analytic value
bool check_null_law() {
  const int dims[3] = {1, 3, 6};
  const double quantiles[3] = {3.8415, 7.8147, 12.5916};
  double worst_ks = 0.0, worst_q = 0.0;
  bool identical = true;
  for (int c = 0; c < 3; ++c) {
    NullSimulationConfig config;
    config.shares = {0.35, 0.65};
    config.d = dims[c];
    config.n_draws = 500000;
    config.seed = RngStream(kSeedNullLaw).substream(c).origin();
    const NullSample sample = simulate_null(config);
    identical = identical && sample.max_draws == sample.min_draws;

    std::vector<double> sorted(sample.max_draws.data(),
                               sample.max_draws.data() + sample.max_draws.size());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double f = oracle::chi2_cdf(dims[c], sorted[i]);
      ks = std::max(ks, std::max(f - i / n, (i + 1) / n - f));
    }
    worst_ks = std::max(worst_ks, ks);

    // the pinned analytic quantiles agree with the CDF oracle
    if (std::abs(oracle::chi2_quantile(dims[c], 0.95) - quantiles[c]) > 5e-4)
      return report(6, false, fmt("quantile oracle disagrees with pinned value at d=%d",
                                  dims[c]));
    const double q = critical_value(sample.max_draws, 0.05);
    worst_q = std::max(worst_q, std::abs(q / quantiles[c] - 1.0));
  }
  const bool ok = identical && worst_ks <= 0.005 && worst_q <= 0.02;
  return report(6, ok,
                fmt("two-group null law, 500k draws, d in {1,3,6}: max==min %s, "
                    "worst KS distance %.4f <= 0.005, worst 95%% quantile error "
                    "%.3f%% <= 2%%",
                    identical ? "yes" : "NO", worst_ks, 100.0 * worst_q));
}

// check 7: critical values for a six-group panel shaped like the published
// application (group sizes 307, 36, 101, 94, 45, 2331; r=10 so d=55;
// 500k draws, alpha 0.05): LM1 within 3% of 87.76 and LM2 within 3% of
// 47.41.  A second published table (nine groups sized 237, 67, 30, 51, 39,
// 36, 2045, 48, 201 with r=12) is reported for reference only.
bool check_critical_value_table() {
  auto shares_of = [](const std::vector<int>& sizes) {
    double total = 0;
    for (int s : sizes) total += s;
    std::vector<double> shares;
    for (int s : sizes) shares.push_back(s / total);
    return shares;
  };

  NullSimulationConfig config;
  config.shares = shares_of({307, 36, 101, 94, 45, 2331});
  config.d = vech_length(10);
  config.n_draws = 500000;
  config.seed = RngStream(kSeedCritTable).substream(0).origin();
  const NullSample sample = simulate_null(config);
  const double cv1 = critical_value(sample.max_draws, 0.05);
  const double cv2 = critical_value(sample.min_draws, 0.05);
  const double err1 = std::abs(cv1 / 87.76 - 1.0);
  const double err2 = std::abs(cv2 / 47.41 - 1.0);

  NullSimulationConfig cross;
  cross.shares = shares_of({237, 67, 30, 51, 39, 36, 2045, 48, 201});
  cross.d = vech_length(12);
  cross.n_draws = 200000;
  cross.seed = RngStream(kSeedCritTable).substream(1).origin();
  const NullSample cross_sample = simulate_null(cross);
  std::printf("criterion 7 info  nine-group reference table (r=12, 200k draws): "
              "cv(LM1) %.2f vs 119.11 published, cv(LM2) %.2f vs 65.44 published\n",
              critical_value(cross_sample.max_draws, 0.05),
              critical_value(cross_sample.min_draws, 0.05));

  const bool ok = err1 <= 0.03 && err2 <= 0.03;
  return report(7, ok,
                fmt("six-group critical values (r=10, 500k draws): cv(LM1) %.2f vs "
                    "87.76 (error %.2f%% <= 3%%) %s, cv(LM2) %.2f vs 47.41 (error "
                    "%.2f%% <= 3%%) %s",
                    cv1, 100.0 * err1, err1 <= 0.03 ? "yes" : "NO", cv2, 100.0 * err2,
                    err2 <= 0.03 ? "yes" : "NO"));
}

double rotation_drift() {
  RngStream rng(RngStream(kSeedProperties).substream(0).origin());
  LoadingMatrix loadings;
  loadings.values.resize(60, 3);
  for (Index i = 0; i < 60; ++i)
    for (Index c = 0; c < 3; ++c) loadings.values(i, c) = 1.0 + rng.std_normal();
  const GroupStructure groups = make_contiguous_groups({25, 20, 15});
  const LmEngine::Values base = LmEngine(loadings, groups).compute();

  double drift = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix raw(3, 3);
    for (Index i = 0; i < 3; ++i)
      for (Index c = 0; c < 3; ++c) raw(i, c) = rng.std_normal();
    const Matrix q = Eigen::HouseholderQR<Matrix>(raw).householderQ();
    LoadingMatrix rotated;
    rotated.values = loadings.values * q;
    const LmEngine::Values vals = LmEngine(rotated, groups).compute();
    drift = std::max(drift, std::abs(vals.lm1 - base.lm1));
    drift = std::max(drift, std::abs(vals.lm2 - base.lm2));
    for (Index p = 0; p < base.pair_lm.size(); ++p)
      drift = std::max(drift, std::abs(vals.pair_lm[p] - base.pair_lm[p]));
  }
  return drift;
}

bool vech_roundtrips(RngStream& rng) {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(8));
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.std_normal();
    const Matrix back = unvech(vech(m));
    if (back != m) return false;
  }
  return true;
}

double eig_reconstruction_error(RngStream& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    Matrix m(200, 200);
    for (Index i = 0; i < 200; ++i)
      for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.std_normal();
    const EigenDecomposition eig = sym_eig(m);
    const Matrix recon = eig.eigenvectors * eig.eigenvalues.asDiagonal() *
                         eig.eigenvectors.transpose();
    worst = std::max(worst, (recon - m).cwiseAbs().maxCoeff());
  }
  return worst;
}

double pca_normalization_error() {
  DgpConfig dgp;
  dgp.kind = DgpKind::OneB;
  dgp.N = 100;
  dgp.T = 120;
  dgp.seed = RngStream(kSeedProperties).substream(1).origin();
  const GeneratedPanel gen = generate_dgp(dgp);
  const LoadingMatrix loadings = estimate_pca(gen.panel, 6).loadings;
  const Matrix gram = loadings.values.transpose() * loadings.values / 100.0;
  return (gram - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff();
}

double oracle_gap(RngStream& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 1 + static_cast<int>(rng.uniform_int(2));
    const std::vector<int> sizes = {4, 4, 4};
    LoadingMatrix loadings;
    loadings.values.resize(12, r);
    for (Index i = 0; i < 12; ++i)
      for (Index c = 0; c < r; ++c) loadings.values(i, c) = 1.0 + 0.5 * rng.std_normal();
    const GroupStructure groups = make_contiguous_groups(sizes);
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k) {
        const double lib = lm_pair(loadings, groups, j, k).lm;
        const double ref = oracle::naive_lm_pair(loadings.values, sizes, j, k);
        worst = std::max(worst, std::abs(lib - ref));
      }
  }
  return worst;
}

bool perm_p_on_grid(RngStream& rng) {
  LoadingMatrix loadings;
  loadings.values.resize(12, 2);
  for (Index i = 0; i < 12; ++i)
    for (Index c = 0; c < 2; ++c) loadings.values(i, c) = 1.0 + 0.5 * rng.std_normal();
  const GroupStructure groups = make_contiguous_groups({4, 4, 4});
  const int b = 19;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PermutationResult res = permutation_test(loadings, groups, b, seed);
    for (double p : {res.p1, res.p2}) {
      const double scaled = p * (b + 1);
      if (std::abs(scaled - std::round(scaled)) > 1e-9) return false;
      if (p < 1.0 / (b + 1) || p > 1.0) return false;
    }
  }
  return true;
}

bool thread_counts_identical() {
  NullSimulationConfig config;
  config.shares = {0.25, 0.30, 0.45};
  config.d = 3;
  config.n_draws = 30000;
  config.seed = RngStream(kSeedProperties).substream(2).origin();
  const NullSample one = simulate_null(config, 1);
  const NullSample three = simulate_null(config, 3);
  const NullSample seven = simulate_null(config, 7);
  if (one.max_draws != three.max_draws || one.max_draws != seven.max_draws) return false;
  if (one.min_draws != three.min_draws || one.min_draws != seven.min_draws) return false;

  DgpConfig dgp;
  dgp.kind = DgpKind::OneB;
  dgp.N = 60;
  dgp.T = 50;
  dgp.seed = RngStream(kSeedProperties).substream(3).origin();
  const GeneratedPanel gen = generate_dgp(dgp);
  const LoadingMatrix loadings = estimate_pca(gen.panel, 5).loadings;
  const LmEngine engine(loadings, gen.groups);
  const PermutationResult serial = permutation_test(engine, 99, 17, 1);
  const PermutationResult parallel = permutation_test(engine, 99, 17, 4);
  if (serial.p1 != parallel.p1 || serial.p2 != parallel.p2) return false;
  if (serial.permuted_lm1 != parallel.permuted_lm1) return false;
  if (serial.permuted_lm2 != parallel.permuted_lm2) return false;

  auto cfg = base_config(DgpKind::OneA, 48, 40, 50, InferenceMode::Asymptotic, 77);
  cfg.rmax = 4;
  cfg.null_draws = 5000;
  cfg.n_threads = 1;
  const auto a = run_experiment(cfg);
  cfg.n_threads = 3;
  const auto b = run_experiment(cfg);
  return a.cells[0].reject_asym_lm1 == b.cells[0].reject_asym_lm1 &&
         a.cells[0].reject_asym_lm2 == b.cells[0].reject_asym_lm2 &&
         a.cells[0].mean_r == b.cells[0].mean_r;
}

// check 8: library invariants with pinned tolerances: orthogonal-rotation
// invariance of every pair statistic over 100 random rotations (drift
// <= 1e-8), exact vech/unvech roundtrips, eigendecomposition
// reconstruction <= 1e-8 on random 200x200 symmetric matrices, loading
// normalization <= 1e-8, agreement <= 1e-9 with a from-definition pair
// statistic on 12-series instances, permutation p-values exactly on the
// grid {m/(B+1)}, and bit-identical output for thread counts 1/3/7
bool check_properties() {
  RngStream rng(RngStream(kSeedProperties).substream(4).origin());
  const double drift = rotation_drift();
  const bool vech_ok = vech_roundtrips(rng);
  const double eig_err = eig_reconstruction_error(rng);
  const double pca_err = pca_normalization_error();
  const double gap = oracle_gap(rng);
  const bool grid_ok = perm_p_on_grid(rng);
  const bool threads_ok = thread_counts_identical();
  const bool ok = drift <= 1e-8 && vech_ok && eig_err <= 1e-8 && pca_err <= 1e-8 &&
                  gap <= 1e-9 && grid_ok && threads_ok;
  return report(8, ok,
                fmt("invariants: rotation drift %.1e <= 1e-8, vech roundtrip %s, "
                    "eig reconstruction %.1e <= 1e-8, loading normalization %.1e "
                    "<= 1e-8, reference statistic gap %.1e <= 1e-9, p-value grid %s, "
                    "thread-count reruns %s",
                    drift, vech_ok ? "exact" : "NO", eig_err, pca_err, gap,
                    grid_ok ? "yes" : "NO", threads_ok ? "identical" : "NO"));
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (argc > 2 || (argc == 2 && (only < 1 || only > 8))) {
    std::fprintf(stderr, "usage: %s [1..8]\n", argv[0]);
    return 100;
  }

  int failures = 0;
  auto run = [&](int id, bool (*check)()) {
    if (only == 0 || only == id) {
      if (!check()) ++failures;
    }
  };
  run(1, check_size_1a);
  run(2, check_size_2a);
  run(3, check_power_1b);
  run(4, check_divergent_1c);
  run(5, check_mode_agreement);
  run(6, check_null_law);
  run(7, check_critical_value_table);
  run(8, check_properties);
  return failures;
}