#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lmhet/experiment.hpp"
#include "lmhet/panel.hpp"

namespace lmhet {

struct TestOptions {
  int r = 0;  // fixed factor count; 0 selects by information criterion
  int rmax = 10;
  std::vector<double> alphas = {0.01, 0.05, 0.10};
  std::int64_t null_draws = 500000;
  int num_permutations = 999;
  InferenceMode inference = InferenceMode::Both;
  std::uint64_t seed = 0;
  int n_threads = 0;
  bool demean = true;
  bool deterministic = false;  // omit the wall-clock timestamp
};

struct PairReport {
  int j = 0, k = 0;
  std::string group_j, group_k;
  double lm = 0.0;
};

struct AlphaDecision {
  double alpha = 0.0;
  double cv_lm1 = 0.0, cv_lm2 = 0.0;
  bool reject_lm1 = false, reject_lm2 = false;
};

struct TestReport {
  // input summary
  std::int64_t num_series = 0, num_periods = 0;
  std::vector<std::string> group_names;
  std::vector<int> group_sizes;
  bool demeaned = true;
  // factor count
  int r_used = 0;
  bool r_selected = false;  // true when chosen by the criterion
  int rmax = 0;
  std::vector<double> criterion_values;
  // statistics
  std::vector<PairReport> pairs;
  double lm1 = 0.0, lm2 = 0.0;
  std::pair<int, int> argmax_pair{0, 1}, argmin_pair{0, 1};
  // asymptotic inference
  bool has_asymptotic = false;
  std::int64_t null_draws = 0;
  std::uint64_t null_seed = 0;
  std::vector<AlphaDecision> decisions;
  double asym_p_lm1 = 1.0, asym_p_lm2 = 1.0;
  // permutation inference
  bool has_permutation = false;
  int num_permutations = 0;
  std::uint64_t perm_seed = 0;
  double perm_p_lm1 = 1.0, perm_p_lm2 = 1.0;
  // provenance
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;  // empty in deterministic mode
};

// Full test pipeline on an ingested panel: factor estimation, pair
// statistics, and the requested inference.  The null simulation seeds from
// substream path seed/1/d and the permutation test from seed/0, mirroring
// the experiment driver.
TestReport run_heterogeneity_test(const DataPanel& panel, const GroupStructure& groups,
                                  const TestOptions& options = {});

nlohmann::ordered_json report_to_json(const TestReport& report);
TestReport report_from_json(const nlohmann::ordered_json& j);
std::string format_report_text(const TestReport& report);
void write_report_json(const std::string& path, const TestReport& report);

}  // namespace lmhet
