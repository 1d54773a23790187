#include "lmhet/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "lmhet/csv.hpp"
#include "lmhet/lm_stat.hpp"
#include "lmhet/null_dist.hpp"
#include "lmhet/pca.hpp"
#include "lmhet/permutation.hpp"
#include "lmhet/rng.hpp"
#include "lmhet/version.hpp"

namespace lmhet {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void validate(const TestOptions& o) {
  if (o.r < 0) throw InputError("factor count cannot be negative");
  if (o.r == 0 && o.rmax < 1) throw InputError("rmax must be at least 1");
  if (o.alphas.empty()) throw InputError("need at least one test level");
  for (double a : o.alphas)
    if (!(a > 0.0 && a < 1.0)) throw InputError("test levels must lie in (0, 1)");
  if (o.inference != InferenceMode::Permutation && o.null_draws < 1000)
    throw InputError("need at least 1000 null draws");
  if (o.inference != InferenceMode::Asymptotic && o.num_permutations < 1)
    throw InputError("need at least 1 permutation");
}

}  // namespace

TestReport run_heterogeneity_test(const DataPanel& panel, const GroupStructure& groups,
                                  const TestOptions& options) {
  validate(options);
  validate_panel(panel);
  if (groups.num_vars() != panel.values.rows())
    throw ShapeError("group structure covers " + std::to_string(groups.num_vars()) +
                     " variables but the panel has " +
                     std::to_string(panel.values.rows()) + " series");

  TestReport rep;
  rep.num_series = panel.values.rows();
  rep.num_periods = panel.values.cols();
  rep.group_names = groups.names;
  rep.group_sizes = groups.sizes;
  rep.demeaned = options.demean;
  rep.seed = options.seed;
  rep.version = kVersion;
  if (!options.deterministic) rep.timestamp = utc_timestamp();

  PcaOptions pca_opts;
  pca_opts.demean = options.demean;
  LoadingMatrix loadings;
  if (options.r > 0) {
    loadings = estimate_pca(panel, options.r, pca_opts).loadings;
    rep.r_used = options.r;
    rep.r_selected = false;
    rep.rmax = 0;
  } else {
    const AutoPcaResult fit = estimate_pca_auto(panel, options.rmax, pca_opts);
    loadings = fit.pca.loadings;
    rep.r_used = fit.selection.r_selected;
    rep.r_selected = true;
    rep.rmax = options.rmax;
    rep.criterion_values.assign(fit.selection.criterion_values.data(),
                                fit.selection.criterion_values.data() +
                                    fit.selection.criterion_values.size());
  }

  const HeterogeneityStatistics stats = lm_aggregate(loadings, groups);
  for (const PairStatistic& p : stats.pairs)
    rep.pairs.push_back({p.j, p.k, groups.names[p.j], groups.names[p.k], p.lm});
  rep.lm1 = stats.lm1;
  rep.lm2 = stats.lm2;
  rep.argmax_pair = stats.argmax_pair;
  rep.argmin_pair = stats.argmin_pair;

  const RngStream root(options.seed);
  if (options.inference != InferenceMode::Permutation) {
    const int d = vech_length(rep.r_used);
    NullSimulationConfig nc;
    nc.shares = groups.shares;
    nc.d = d;
    nc.n_draws = options.null_draws;
    nc.seed = root.substream(1).substream(static_cast<std::uint64_t>(d)).origin();
    const NullSample sample = simulate_null(nc, options.n_threads);
    rep.has_asymptotic = true;
    rep.null_draws = options.null_draws;
    rep.null_seed = nc.seed;
    for (double alpha : options.alphas) {
      AlphaDecision dec;
      dec.alpha = alpha;
      dec.cv_lm1 = critical_value(sample.max_draws, alpha);
      dec.cv_lm2 = critical_value(sample.min_draws, alpha);
      dec.reject_lm1 = rep.lm1 > dec.cv_lm1;
      dec.reject_lm2 = rep.lm2 > dec.cv_lm2;
      rep.decisions.push_back(dec);
    }
    rep.asym_p_lm1 = asymptotic_pvalue(sample.max_draws, rep.lm1);
    rep.asym_p_lm2 = asymptotic_pvalue(sample.min_draws, rep.lm2);
  }
  if (options.inference != InferenceMode::Asymptotic) {
    const PermutationResult pr =
        permutation_test(loadings, groups, options.num_permutations,
                         root.substream(0).origin(), options.n_threads);
    rep.has_permutation = true;
    rep.num_permutations = options.num_permutations;
    rep.perm_seed = root.substream(0).origin();
    rep.perm_p_lm1 = pr.p1;
    rep.perm_p_lm2 = pr.p2;
  }
  return rep;
}

nlohmann::ordered_json report_to_json(const TestReport& r) {
  nlohmann::ordered_json j;
  j["input"] = {{"num_series", r.num_series},
                {"num_periods", r.num_periods},
                {"group_names", r.group_names},
                {"group_sizes", r.group_sizes},
                {"demeaned", r.demeaned}};
  j["factors"] = {{"r_used", r.r_used},
                  {"selected_by_criterion", r.r_selected},
                  {"rmax", r.rmax},
                  {"criterion_values", r.criterion_values}};
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : r.pairs)
    pairs.push_back({{"j", p.j},
                     {"k", p.k},
                     {"group_j", p.group_j},
                     {"group_k", p.group_k},
                     {"lm", p.lm}});
  j["statistics"] = {{"pairs", pairs},
                     {"lm1", r.lm1},
                     {"lm2", r.lm2},
                     {"argmax_pair", {r.argmax_pair.first, r.argmax_pair.second}},
                     {"argmin_pair", {r.argmin_pair.first, r.argmin_pair.second}}};
  if (r.has_asymptotic) {
    nlohmann::ordered_json decisions = nlohmann::ordered_json::array();
    for (const auto& d : r.decisions)
      decisions.push_back({{"alpha", d.alpha},
                           {"cv_lm1", d.cv_lm1},
                           {"cv_lm2", d.cv_lm2},
                           {"reject_lm1", d.reject_lm1},
                           {"reject_lm2", d.reject_lm2}});
    j["asymptotic"] = {{"null_draws", r.null_draws},
                       {"null_seed", r.null_seed},
                       {"decisions", decisions},
                       {"p_lm1", r.asym_p_lm1},
                       {"p_lm2", r.asym_p_lm2}};
  }
  if (r.has_permutation) {
    j["permutation"] = {{"num_permutations", r.num_permutations},
                        {"perm_seed", r.perm_seed},
                        {"p_lm1", r.perm_p_lm1},
                        {"p_lm2", r.perm_p_lm2}};
  }
  j["provenance"] = {{"seed", r.seed}, {"version", r.version}};
  if (!r.timestamp.empty()) j["provenance"]["timestamp"] = r.timestamp;
  return j;
}

TestReport report_from_json(const nlohmann::ordered_json& j) {
  TestReport r;
  const auto& input = j.at("input");
  r.num_series = input.at("num_series").get<std::int64_t>();
  r.num_periods = input.at("num_periods").get<std::int64_t>();
  r.group_names = input.at("group_names").get<std::vector<std::string>>();
  r.group_sizes = input.at("group_sizes").get<std::vector<int>>();
  r.demeaned = input.at("demeaned").get<bool>();
  const auto& factors = j.at("factors");
  r.r_used = factors.at("r_used").get<int>();
  r.r_selected = factors.at("selected_by_criterion").get<bool>();
  r.rmax = factors.at("rmax").get<int>();
  r.criterion_values = factors.at("criterion_values").get<std::vector<double>>();
  const auto& stats = j.at("statistics");
  for (const auto& p : stats.at("pairs"))
    r.pairs.push_back({p.at("j").get<int>(), p.at("k").get<int>(),
                       p.at("group_j").get<std::string>(),
                       p.at("group_k").get<std::string>(), p.at("lm").get<double>()});
  r.lm1 = stats.at("lm1").get<double>();
  r.lm2 = stats.at("lm2").get<double>();
  r.argmax_pair = {stats.at("argmax_pair")[0].get<int>(), stats.at("argmax_pair")[1].get<int>()};
  r.argmin_pair = {stats.at("argmin_pair")[0].get<int>(), stats.at("argmin_pair")[1].get<int>()};
  if (j.contains("asymptotic")) {
    const auto& a = j.at("asymptotic");
    r.has_asymptotic = true;
    r.null_draws = a.at("null_draws").get<std::int64_t>();
    r.null_seed = a.at("null_seed").get<std::uint64_t>();
    for (const auto& d : a.at("decisions")) {
      AlphaDecision dec;
      dec.alpha = d.at("alpha").get<double>();
      dec.cv_lm1 = d.at("cv_lm1").get<double>();
      dec.cv_lm2 = d.at("cv_lm2").get<double>();
      dec.reject_lm1 = d.at("reject_lm1").get<bool>();
      dec.reject_lm2 = d.at("reject_lm2").get<bool>();
      r.decisions.push_back(dec);
    }
    r.asym_p_lm1 = a.at("p_lm1").get<double>();
    r.asym_p_lm2 = a.at("p_lm2").get<double>();
  }
  if (j.contains("permutation")) {
    const auto& p = j.at("permutation");
    r.has_permutation = true;
    r.num_permutations = p.at("num_permutations").get<int>();
    r.perm_seed = p.at("perm_seed").get<std::uint64_t>();
    r.perm_p_lm1 = p.at("p_lm1").get<double>();
    r.perm_p_lm2 = p.at("p_lm2").get<double>();
  }
  const auto& prov = j.at("provenance");
  r.seed = prov.at("seed").get<std::uint64_t>();
  r.version = prov.at("version").get<std::string>();
  if (prov.contains("timestamp")) r.timestamp = prov.at("timestamp").get<std::string>();
  return r;
}

std::string format_report_text(const TestReport& r) {
  std::ostringstream out;
  char buf[160];
  out << "group heterogeneity test\n";
  std::snprintf(buf, sizeof(buf), "  panel: %lld series x %lld periods, %zu groups (",
                static_cast<long long>(r.num_series), static_cast<long long>(r.num_periods),
                r.group_names.size());
  out << buf;
  for (std::size_t g = 0; g < r.group_names.size(); ++g) {
    if (g) out << ", ";
    out << r.group_names[g] << ":" << r.group_sizes[g];
  }
  out << ")\n";
  std::snprintf(buf, sizeof(buf), "  factors: r = %d (%s)\n", r.r_used,
                r.r_selected ? "selected by information criterion" : "fixed by user");
  out << buf;
  out << "  pair statistics:\n";
  for (const auto& p : r.pairs) {
    std::snprintf(buf, sizeof(buf), "    %s vs %s: %.4f\n", p.group_j.c_str(),
                  p.group_k.c_str(), p.lm);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "  LM1 (max) = %.4f, LM2 (min) = %.4f\n", r.lm1, r.lm2);
  out << buf;
  if (r.has_asymptotic) {
    std::snprintf(buf, sizeof(buf), "  asymptotic (%lld simulated draws): p(LM1) = %.4f, p(LM2) = %.4f\n",
                  static_cast<long long>(r.null_draws), r.asym_p_lm1, r.asym_p_lm2);
    out << buf;
    for (const auto& d : r.decisions) {
      std::snprintf(buf, sizeof(buf),
                    "    alpha %.3f: cv(LM1) = %.4f [%s], cv(LM2) = %.4f [%s]\n", d.alpha,
                    d.cv_lm1, d.reject_lm1 ? "reject" : "keep", d.cv_lm2,
                    d.reject_lm2 ? "reject" : "keep");
      out << buf;
    }
  }
  if (r.has_permutation) {
    std::snprintf(buf, sizeof(buf), "  permutation (B = %d): p(LM1) = %.4f, p(LM2) = %.4f\n",
                  r.num_permutations, r.perm_p_lm1, r.perm_p_lm2);
    out << buf;
  }
  return out.str();
}

void write_report_json(const std::string& path, const TestReport& report) {
  write_text_file_atomic(path, report_to_json(report).dump(2) + "\n");
}

}  // namespace lmhet
