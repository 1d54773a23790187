#pragma once

#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "lmhet/panel.hpp"
#include "lmhet/pca.hpp"
#include "lmhet/types.hpp"
#include "lmhet/vech.hpp"

namespace lmhet {

// Score statistic pieces for one pair of groups (j, k), j < k.
struct PairStatistic {
  int j = 0;
  int k = 0;
  SymVec a_vec;     // sqrt(N) times the gap between group loading second moments
  Matrix s_mat;     // variance of a_vec under homogeneity
  double lm = 0.0;  // a_vec' s_mat^{-1} a_vec
};

struct HeterogeneityStatistics {
  std::vector<PairStatistic> pairs;  // lexicographic in (j, k)
  double lm1 = 0.0;                  // max over pairs
  double lm2 = 0.0;                  // min over pairs
  std::pair<int, int> argmax_pair{0, 1};
  std::pair<int, int> argmin_pair{0, 1};
};

// a(j,k) = sqrt(N) ( mean_{i in j} vech(l_i l_i') - mean_{i in k} vech(l_i l_i') ).
SymVec stat_A(const LoadingMatrix& loadings, const GroupStructure& groups, int j, int k);

// S(j,k) = (N/N_j + N/N_k) (1/N) sum_{i=1}^{N} c_i c_i' with
// c_i = vech(l_i l_i' - I); the sum runs over all N series, so S is
// invariant to reassigning series across groups.
Matrix stat_S(const LoadingMatrix& loadings, const GroupStructure& groups, int j, int k);

// Throws SingularVarianceError when S(j,k) is numerically singular.
PairStatistic lm_pair(const LoadingMatrix& loadings, const GroupStructure& groups,
                      int j, int k);

HeterogeneityStatistics lm_aggregate(const LoadingMatrix& loadings,
                                     const GroupStructure& groups);

// Shared-work evaluator for the pair statistics under many reassignments of
// series to groups.  The variance factor S_base = (1/N) sum_i c_i c_i' does
// not depend on the assignment, so it is factored once; each evaluation only
// recomputes group means of the precomputed moment rows.
class LmEngine {
public:
  LmEngine(const LoadingMatrix& loadings, const GroupStructure& groups);

  struct Values {
    Vector pair_lm;  // lexicographic in (j, k)
    double lm1 = 0.0;
    double lm2 = 0.0;
    int argmax = 0;  // positions in pair order
    int argmin = 0;
  };

  // Statistics under the identity assignment.
  Values compute() const;

  // Statistics with series reassigned: position i takes the moment row of
  // series perm[i].  perm must be a bijection on 0..N-1.
  Values compute(const std::vector<int>& perm) const;

  int num_pairs() const { return static_cast<int>(pairs_.size()); }
  std::pair<int, int> pair(int p) const { return pairs_[p]; }
  const GroupStructure& groups() const { return groups_; }
  int dim() const { return d_; }

private:
  Values from_means(const Matrix& means) const;

  GroupStructure groups_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w_;  // N x d moment rows
  Eigen::LLT<Matrix> llt_;  // Cholesky factor of S_base
  std::vector<std::pair<int, int>> pairs_;
  Vector inv_scale_;  // 1 / (N/N_j + N/N_k) per pair
  int d_ = 0;
  double n_ = 0.0;
};

}  // namespace lmhet
