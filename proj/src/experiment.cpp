#include "lmhet/experiment.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "lmhet/lm_stat.hpp"
#include "lmhet/null_dist.hpp"
#include "lmhet/parallel.hpp"
#include "lmhet/pca.hpp"
#include "lmhet/permutation.hpp"

namespace lmhet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const ExperimentConfig& c) {
  if (c.grid.empty()) throw InputError("experiment grid is empty");
  if (c.replications < 50)
    throw InputError("need at least 50 replications, got " +
                     std::to_string(c.replications));
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (c.rmax < 1) throw InputError("rmax must be at least 1");
  if (c.inference != InferenceMode::Asymptotic && c.num_permutations < 1)
    throw InputError("need at least 1 permutation");
  if (c.inference != InferenceMode::Permutation && c.null_draws < 1000)
    throw InputError("need at least 1000 null draws");
}

struct RepOutcome {
  bool ok = false;
  int r = 0;
  double lm1 = 0.0, lm2 = 0.0;
  double perm_p1 = 1.0, perm_p2 = 1.0;
};

struct Rate {
  double pct = kNaN, se = kNaN;
};

Rate rate_from(int hits, int used) {
  Rate r;
  if (used > 0) {
    const double p = static_cast<double>(hits) / used;
    r.pct = 100.0 * p;
    r.se = 100.0 * std::sqrt(p * (1.0 - p) / used);
  }
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const bool asym = config.inference != InferenceMode::Permutation;
  const bool perm = config.inference != InferenceMode::Asymptotic;

  const RngStream root(config.seed);
  const RngStream data_root = root.substream(0);
  const RngStream null_root = root.substream(1);

  // critical values cached by (shares, score dimension)
  std::map<std::pair<std::vector<double>, int>, std::pair<double, double>> cv_cache;

  ExperimentResult out;
  out.config = config;

  for (std::size_t cell = 0; cell < config.grid.size(); ++cell) {
    const auto [n, t] = config.grid[cell];
    DgpConfig dgp;
    dgp.kind = config.kind;
    dgp.N = n;
    dgp.T = t;
    dgp.b = config.b;
    dgp.theta = config.theta;
    dgp.P = config.P;
    dgp.rho = config.rho;
    validate_dgp(dgp);

    const RngStream cell_root = data_root.substream(cell);
    const int m_total = config.replications;
    std::vector<RepOutcome> reps(m_total);

    detail::parallel_for(m_total, config.n_threads, [&](std::int64_t m) {
      RngStream rep_rng = cell_root.substream(static_cast<std::uint64_t>(m));
      const std::uint64_t perm_seed = rep_rng.substream(0).origin();
      const GeneratedPanel gen = generate_dgp(dgp, rep_rng);
      RepOutcome& rep = reps[m];
      try {
        const AutoPcaResult fit = estimate_pca_auto(gen.panel, config.rmax);
        const LmEngine engine(fit.pca.loadings, gen.groups);
        const LmEngine::Values vals = engine.compute();
        rep.r = fit.selection.r_selected;
        rep.lm1 = vals.lm1;
        rep.lm2 = vals.lm2;
        if (perm) {
          // permutation runs serially inside the replication; the outer
          // loop is already parallel
          const PermutationResult pr =
              permutation_test(engine, config.num_permutations, perm_seed, 1);
          rep.perm_p1 = pr.p1;
          rep.perm_p2 = pr.p2;
        }
        rep.ok = true;
      } catch (const DegenerateInputError&) {
      } catch (const SingularVarianceError&) {
      } catch (const ConvergenceError&) {
      }
    });

    CellResult res;
    res.N = n;
    res.T = t;
    for (const RepOutcome& rep : reps)
      if (rep.ok) ++res.replications_used;
    res.excluded = m_total - res.replications_used;
    if (res.excluded > 0.01 * m_total)
      throw ExperimentError("cell " + std::to_string(n) + "x" + std::to_string(t) +
                            " excluded " + std::to_string(res.excluded) + " of " +
                            std::to_string(m_total) + " replications");
    if (res.replications_used == 0)
      throw ExperimentError("no usable replications in cell");

    double r_sum = 0.0;
    for (const RepOutcome& rep : reps)
      if (rep.ok) r_sum += rep.r;
    res.mean_r = r_sum / res.replications_used;

    if (asym) {
      std::set<int> dims;
      for (const RepOutcome& rep : reps)
        if (rep.ok) dims.insert(vech_length(rep.r));
      std::vector<double> shares;
      for (int nj : dgp_group_sizes(n))
        shares.push_back(static_cast<double>(nj) / n);
      for (int d : dims) {
        const auto key = std::make_pair(shares, d);
        if (cv_cache.count(key)) continue;
        NullSimulationConfig nc;
        nc.shares = shares;
        nc.d = d;
        nc.n_draws = config.null_draws;
        nc.seed = null_root.substream(static_cast<std::uint64_t>(d)).origin();
        const NullSample sample = simulate_null(nc, config.n_threads);
        cv_cache[key] = {critical_value(sample.max_draws, config.alpha),
                         critical_value(sample.min_draws, config.alpha)};
      }
      int hit1 = 0, hit2 = 0;
      for (const RepOutcome& rep : reps) {
        if (!rep.ok) continue;
        const auto [cv1, cv2] = cv_cache.at({shares, vech_length(rep.r)});
        if (rep.lm1 > cv1) ++hit1;
        if (rep.lm2 > cv2) ++hit2;
      }
      const Rate r1 = rate_from(hit1, res.replications_used);
      const Rate r2 = rate_from(hit2, res.replications_used);
      res.reject_asym_lm1 = r1.pct;
      res.se_asym_lm1 = r1.se;
      res.reject_asym_lm2 = r2.pct;
      res.se_asym_lm2 = r2.se;
    }
    if (perm) {
      int hit1 = 0, hit2 = 0;
      for (const RepOutcome& rep : reps) {
        if (!rep.ok) continue;
        if (rep.perm_p1 <= config.alpha) ++hit1;
        if (rep.perm_p2 <= config.alpha) ++hit2;
      }
      const Rate r1 = rate_from(hit1, res.replications_used);
      const Rate r2 = rate_from(hit2, res.replications_used);
      res.reject_perm_lm1 = r1.pct;
      res.se_perm_lm1 = r1.se;
      res.reject_perm_lm2 = r2.pct;
      res.se_perm_lm2 = r2.se;
    }
    out.cells.push_back(res);
  }
  return out;
}

}  // namespace lmhet
