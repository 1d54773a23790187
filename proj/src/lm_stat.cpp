#include "lmhet/lm_stat.hpp"

#include <cmath>

namespace lmhet {

namespace {

void check_compatible(const LoadingMatrix& loadings, const GroupStructure& groups) {
  if (loadings.values.rows() != groups.num_vars())
    throw ShapeError("loading matrix has " + std::to_string(loadings.values.rows()) +
                     " rows but the group structure covers " +
                     std::to_string(groups.num_vars()) + " variables");
  if (loadings.values.cols() < 1) throw ShapeError("loading matrix has no columns");
}

void check_pair(const GroupStructure& groups, int j, int k) {
  const int s = groups.num_groups();
  if (j < 0 || k < 0 || j >= s || k >= s || j >= k)
    throw IndexError("invalid group pair (" + std::to_string(j) + ", " +
                     std::to_string(k) + ") for " + std::to_string(s) + " groups");
}

// Moment rows w_i = vech(l_i l_i') stacked into an N x d matrix.
Matrix moment_rows(const LoadingMatrix& loadings) {
  const Index n = loadings.values.rows();
  const int r = loadings.num_factors();
  Matrix w(n, vech_length(r));
  Vector row(w.cols());
  for (Index i = 0; i < n; ++i) {
    vech_outer_into(loadings.values.row(i).transpose(), row);
    w.row(i) = row;
  }
  return w;
}

Vector vech_identity(int r) {
  Vector v = Vector::Zero(vech_length(r));
  Index k = 0;
  for (int c = 0; c < r; ++c) {
    v[k] = 1.0;
    k += r - c;
  }
  return v;
}

Matrix s_base_from(const Matrix& w, int r) {
  Matrix centered = w;
  centered.rowwise() -= vech_identity(r).transpose();
  return centered.transpose() * centered / static_cast<double>(w.rows());
}

// Cholesky with an explicit pivot floor: any pivot at or below
// 1e-12 * max diagonal marks the matrix as singular for our purposes.
Eigen::LLT<Matrix> checked_llt(const Matrix& s, const char* what) {
  Eigen::LLT<Matrix> llt(s);
  const double max_diag = s.diagonal().maxCoeff();
  bool bad = llt.info() != Eigen::Success || !(max_diag > 0.0);
  if (!bad) {
    const Matrix& l = llt.matrixLLT();
    for (Index i = 0; i < s.rows(); ++i) {
      if (!(l(i, i) * l(i, i) > 1e-12 * max_diag)) {
        bad = true;
        break;
      }
    }
  }
  if (bad)
    throw SingularVarianceError(std::string(what) +
                                " is numerically singular; the statistic is undefined");
  return llt;
}

}  // namespace

SymVec stat_A(const LoadingMatrix& loadings, const GroupStructure& groups, int j, int k) {
  check_compatible(loadings, groups);
  check_pair(groups, j, k);
  const int r = loadings.num_factors();
  const double n = static_cast<double>(groups.num_vars());
  const Matrix w = moment_rows(loadings);
  const auto block_mean = [&](int g) -> Vector {
    const int lo = groups.begin_of(g);
    return w.middleRows(lo, groups.sizes[g]).colwise().mean().transpose();
  };
  SymVec a;
  a.dim = r;
  a.entries = std::sqrt(n) * (block_mean(j) - block_mean(k));
  return a;
}

Matrix stat_S(const LoadingMatrix& loadings, const GroupStructure& groups, int j, int k) {
  check_compatible(loadings, groups);
  check_pair(groups, j, k);
  const double n = static_cast<double>(groups.num_vars());
  const double scale = n / groups.sizes[j] + n / groups.sizes[k];
  return scale * s_base_from(moment_rows(loadings), loadings.num_factors());
}

PairStatistic lm_pair(const LoadingMatrix& loadings, const GroupStructure& groups,
                      int j, int k) {
  PairStatistic p;
  p.j = j;
  p.k = k;
  p.a_vec = stat_A(loadings, groups, j, k);
  p.s_mat = stat_S(loadings, groups, j, k);
  const auto llt = checked_llt(p.s_mat, "pair variance matrix");
  p.lm = p.a_vec.entries.dot(llt.solve(p.a_vec.entries));
  return p;
}

HeterogeneityStatistics lm_aggregate(const LoadingMatrix& loadings,
                                     const GroupStructure& groups) {
  const LmEngine engine(loadings, groups);
  const LmEngine::Values vals = engine.compute();
  HeterogeneityStatistics out;
  out.pairs.reserve(engine.num_pairs());
  for (int p = 0; p < engine.num_pairs(); ++p) {
    const auto [j, k] = engine.pair(p);
    PairStatistic ps;
    ps.j = j;
    ps.k = k;
    ps.a_vec = stat_A(loadings, groups, j, k);
    ps.s_mat = stat_S(loadings, groups, j, k);
    ps.lm = vals.pair_lm[p];
    out.pairs.push_back(std::move(ps));
  }
  out.lm1 = vals.lm1;
  out.lm2 = vals.lm2;
  out.argmax_pair = engine.pair(vals.argmax);
  out.argmin_pair = engine.pair(vals.argmin);
  return out;
}

LmEngine::LmEngine(const LoadingMatrix& loadings, const GroupStructure& groups)
    : groups_(groups) {
  check_compatible(loadings, groups);
  if (groups.num_groups() < 2)
    throw InsufficientGroupsError("need at least 2 groups");
  const int r = loadings.num_factors();
  d_ = vech_length(r);
  n_ = static_cast<double>(groups.num_vars());
  w_ = moment_rows(loadings);
  llt_ = checked_llt(s_base_from(w_, r), "loading moment variance matrix");
  const int s = groups.num_groups();
  for (int j = 0; j < s; ++j)
    for (int k = j + 1; k < s; ++k) pairs_.emplace_back(j, k);
  inv_scale_.resize(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto [j, k] = pairs_[p];
    inv_scale_[p] = 1.0 / (n_ / groups.sizes[j] + n_ / groups.sizes[k]);
  }
}

LmEngine::Values LmEngine::from_means(const Matrix& means) const {
  Values out;
  out.pair_lm.resize(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto [j, k] = pairs_[p];
    const Vector diff = (means.row(j) - means.row(k)).transpose();
    out.pair_lm[p] = n_ * inv_scale_[p] * diff.dot(llt_.solve(diff));
  }
  out.lm1 = out.pair_lm[0];
  out.lm2 = out.pair_lm[0];
  out.argmax = out.argmin = 0;
  for (int p = 1; p < static_cast<int>(pairs_.size()); ++p) {
    if (out.pair_lm[p] > out.lm1) {
      out.lm1 = out.pair_lm[p];
      out.argmax = p;
    }
    if (out.pair_lm[p] < out.lm2) {
      out.lm2 = out.pair_lm[p];
      out.argmin = p;
    }
  }
  return out;
}

LmEngine::Values LmEngine::compute() const {
  const int s = groups_.num_groups();
  // accumulate row by row, exactly as the reassignment path does, so the
  // identity reassignment reproduces these values bit for bit
  Matrix means = Matrix::Zero(s, d_);
  for (int j = 0; j < s; ++j) {
    auto row = means.row(j);
    for (int pos = groups_.begin_of(j); pos < groups_.end_of(j); ++pos)
      row += w_.row(pos);
    row /= static_cast<double>(groups_.sizes[j]);
  }
  return from_means(means);
}

LmEngine::Values LmEngine::compute(const std::vector<int>& perm) const {
  const Index n = w_.rows();
  if (static_cast<Index>(perm.size()) != n)
    throw InputError("permutation length does not match variable count");
  std::vector<char> seen(perm.size(), 0);
  for (int src : perm) {
    if (src < 0 || src >= n || seen[src])
      throw InputError("reassignment is not a bijection on the series indices");
    seen[src] = 1;
  }
  const int s = groups_.num_groups();
  Matrix means = Matrix::Zero(s, d_);
  for (int j = 0; j < s; ++j) {
    const int lo = groups_.begin_of(j);
    const int hi = groups_.end_of(j);
    auto row = means.row(j);
    for (int pos = lo; pos < hi; ++pos) row += w_.row(perm[pos]);
    row /= static_cast<double>(groups_.sizes[j]);
  }
  return from_means(means);
}

}  // namespace lmhet
