#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmhet/csv.hpp"
#include "lmhet/dgp.hpp"
#include "lmhet/errors.hpp"
#include "lmhet/null_dist.hpp"
#include "lmhet/pca.hpp"
#include "lmhet/report.hpp"
#include "lmhet/vech.hpp"
#include "lmhet/version.hpp"

namespace {

lmhet::InferenceMode parse_inference(const std::string& name) {
  if (name == "asymptotic" || name == "asym") return lmhet::InferenceMode::Asymptotic;
  if (name == "permutation" || name == "perm") return lmhet::InferenceMode::Permutation;
  if (name == "both") return lmhet::InferenceMode::Both;
  throw lmhet::InputError("unknown inference mode '" + name +
                          "' (expected asymptotic, permutation or both)");
}

std::pair<int, int> parse_cell(const std::string& spec) {
  const auto pos = spec.find('x');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= spec.size())
    throw lmhet::InputError("cell '" + spec + "' is not of the form NxT");
  try {
    return {std::stoi(spec.substr(0, pos)), std::stoi(spec.substr(pos + 1))};
  } catch (const std::exception&) {
    throw lmhet::InputError("cell '" + spec + "' is not of the form NxT");
  }
}

struct TestArgs {
  std::string data_path, groups_path, json_path;
  std::string inference = "both";
  lmhet::TestOptions options;
  bool log_returns = false;
};

int cmd_test(const TestArgs& args) {
  lmhet::IngestOptions ingest;
  ingest.log_returns = args.log_returns;
  const lmhet::IngestedPanel data =
      lmhet::ingest_panel(args.data_path, args.groups_path, ingest);
  lmhet::TestOptions options = args.options;
  options.inference = parse_inference(args.inference);
  const lmhet::TestReport report =
      lmhet::run_heterogeneity_test(data.panel, data.groups, options);
  std::cout << lmhet::format_report_text(report);
  if (!args.json_path.empty()) {
    lmhet::write_report_json(args.json_path, report);
    std::cout << "report written to " << args.json_path << "\n";
  }
  return 0;
}

struct McArgs {
  std::string dgp = "1-a";
  std::vector<std::string> cells;
  std::string inference = "asymptotic";
  std::string csv_path;
  lmhet::ExperimentConfig config;
};

int cmd_mc(const McArgs& args) {
  lmhet::ExperimentConfig config = args.config;
  config.kind = lmhet::parse_dgp_kind(args.dgp);
  config.inference = parse_inference(args.inference);
  config.grid.clear();
  for (const auto& cell : args.cells) config.grid.push_back(parse_cell(cell));
  const lmhet::ExperimentResult result = lmhet::run_experiment(config);
  std::cout << lmhet::format_experiment_table(result);
  if (!args.csv_path.empty()) {
    lmhet::write_experiment_csv(args.csv_path, result);
    std::cout << "table written to " << args.csv_path << "\n";
  }
  return 0;
}

struct CritArgs {
  std::vector<double> shares;
  std::vector<int> sizes;
  int r = 1;
  std::vector<double> alphas = {0.01, 0.05, 0.10};
  std::int64_t draws = 500000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string csv_path;
};

int cmd_critvals(const CritArgs& args) {
  std::vector<double> shares = args.shares;
  if (!args.sizes.empty()) {
    if (!shares.empty())
      throw lmhet::InputError("give either --shares or --sizes, not both");
    double total = 0;
    for (int s : args.sizes) {
      if (s < 1) throw lmhet::InputError("group sizes must be positive");
      total += s;
    }
    for (int s : args.sizes) shares.push_back(s / total);
  }
  if (shares.empty()) throw lmhet::InputError("one of --shares or --sizes is required");
  if (args.r < 1) throw lmhet::InputError("factor count must be at least 1");

  lmhet::NullSimulationConfig config;
  config.shares = shares;
  config.d = lmhet::vech_length(args.r);
  config.n_draws = args.draws;
  config.seed = args.seed;
  const lmhet::NullSample sample = lmhet::simulate_null(config, args.threads);

  std::printf("%zu groups, r = %d (score dimension %d), %lld draws, seed %llu\n",
              shares.size(), args.r, config.d, static_cast<long long>(args.draws),
              static_cast<unsigned long long>(args.seed));
  std::vector<lmhet::CriticalValueRow> rows;
  std::printf("%8s %12s %12s\n", "alpha", "cv(LM1)", "cv(LM2)");
  for (double alpha : args.alphas) {
    const double cv1 = lmhet::critical_value(sample.max_draws, alpha);
    const double cv2 = lmhet::critical_value(sample.min_draws, alpha);
    std::printf("%8.3f %12.4f %12.4f\n", alpha, cv1, cv2);
    rows.push_back({"lm1", alpha, cv1, args.draws, args.seed});
    rows.push_back({"lm2", alpha, cv2, args.draws, args.seed});
  }
  if (!args.csv_path.empty()) {
    lmhet::write_critical_values_csv(args.csv_path, rows);
    std::printf("critical values written to %s\n", args.csv_path.c_str());
  }
  return 0;
}

struct SelectArgs {
  std::string data_path;
  int rmax = 10;
  bool no_demean = false;
  bool log_returns = false;
};

int cmd_select(const SelectArgs& args) {
  lmhet::DataPanel panel = lmhet::read_panel_csv(args.data_path);
  if (args.log_returns) panel = lmhet::to_log_returns(panel);
  lmhet::PcaOptions options;
  options.demean = !args.no_demean;
  const lmhet::FactorCountSelection sel =
      lmhet::select_num_factors(panel, args.rmax, options);
  std::printf("%6s %14s\n", "k", "criterion");
  for (int k = 1; k <= sel.rmax; ++k)
    std::printf("%6d %14.6f%s\n", k, sel.criterion_values[k - 1],
                k == sel.r_selected ? "  <- selected" : "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrange multiplier tests for group heterogeneity in factor loadings"};
  app.set_version_flag("--version", lmhet::kVersion);
  app.set_config("--config", "", "read options from an INI-style key=value file");
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "run the tests on a panel CSV");
  test->add_option("--data", test_args.data_path, "panel CSV (periods in rows)")
      ->required();
  test->add_option("--groups", test_args.groups_path, "series-to-group map CSV")
      ->required();
  test->add_option("--r", test_args.options.r,
                   "fixed factor count (0 = select by information criterion)");
  test->add_option("--rmax", test_args.options.rmax, "factor count search cap");
  test->add_option("--alpha", test_args.options.alphas, "test levels")
      ->expected(-1);
  test->add_option("--draws", test_args.options.null_draws, "simulated null draws");
  test->add_option("--permutations,-B", test_args.options.num_permutations,
                   "permutation count");
  test->add_option("--inference", test_args.inference, "asymptotic, permutation or both");
  test->add_option("--seed", test_args.options.seed, "random seed")
      ->envname("LMHET_SEED");
  test->add_option("--threads", test_args.options.n_threads, "worker threads (0 = auto)");
  test->add_flag("--no-demean", [&](std::int64_t) { test_args.options.demean = false; },
                 "skip removing each series' time mean");
  test->add_flag("--log-returns", test_args.log_returns,
                 "transform levels to 100 * log differences");
  test->add_option("--json", test_args.json_path, "also write the report as JSON");
  test->add_flag("--deterministic", test_args.options.deterministic,
                 "omit the timestamp from the report");

  McArgs mc_args;
  auto* mc = app.add_subcommand("mc", "size/power study on simulated panels");
  mc->add_option("--dgp", mc_args.dgp, "design: 1-a, 1-b, 1-c, 2-a, 2-b or 2-c")
      ->required();
  mc->add_option("--cell", mc_args.cells, "panel dimensions NxT (repeatable)")
      ->required()
      ->expected(-1);
  mc->add_option("--replications,-M", mc_args.config.replications, "replications per cell");
  mc->add_option("--alpha", mc_args.config.alpha, "test level");
  mc->add_option("--inference", mc_args.inference, "asymptotic, permutation or both");
  mc->add_option("--rmax", mc_args.config.rmax, "factor count search cap");
  mc->add_option("--permutations,-B", mc_args.config.num_permutations, "permutation count");
  mc->add_option("--draws", mc_args.config.null_draws, "simulated null draws");
  mc->add_option("--seed", mc_args.config.seed, "random seed")->envname("LMHET_SEED");
  mc->add_option("--threads", mc_args.config.n_threads, "worker threads (0 = auto)");
  mc->add_option("--b", mc_args.config.b, "loading mean");
  mc->add_option("--theta", mc_args.config.theta, "spatial moving-average coefficient");
  mc->add_option("--bandwidth,-P", mc_args.config.P, "spatial moving-average bandwidth");
  mc->add_option("--rho", mc_args.config.rho, "group factor correlation");
  mc->add_option("--csv", mc_args.csv_path, "also write the table as CSV");

  CritArgs crit_args;
  auto* crit = app.add_subcommand("critvals", "simulate null critical values");
  crit->add_option("--shares", crit_args.shares, "group shares summing to 1")
      ->expected(-1);
  crit->add_option("--sizes", crit_args.sizes, "group sizes (converted to shares)")
      ->expected(-1);
  crit->add_option("--r", crit_args.r, "factor count")->required();
  crit->add_option("--alpha", crit_args.alphas, "levels")->expected(-1);
  crit->add_option("--draws", crit_args.draws, "simulated draws");
  crit->add_option("--seed", crit_args.seed, "random seed")->envname("LMHET_SEED");
  crit->add_option("--threads", crit_args.threads, "worker threads (0 = auto)");
  crit->add_option("--csv", crit_args.csv_path, "write the values as CSV");

  SelectArgs select_args;
  auto* sel = app.add_subcommand("select-factors", "factor count by information criterion");
  sel->add_option("--data", select_args.data_path, "panel CSV (periods in rows)")
      ->required();
  sel->add_option("--rmax", select_args.rmax, "search cap");
  sel->add_flag("--no-demean", select_args.no_demean, "skip removing series means");
  sel->add_flag("--log-returns", select_args.log_returns,
                "transform levels to 100 * log differences");

  CLI11_PARSE(app, argc, argv);

  try {
    if (test->parsed()) return cmd_test(test_args);
    if (mc->parsed()) return cmd_mc(mc_args);
    if (crit->parsed()) return cmd_critvals(crit_args);
    if (sel->parsed()) return cmd_select(select_args);
  } catch (const lmhet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
