#include "lmhet/pca.hpp"

#include <cmath>
#include <limits>

#include "lmhet/sym_eig.hpp"

namespace lmhet {

namespace {

// Relative eigenvalue floor below which a component is treated as numerical
// rank deficiency rather than signal.
constexpr double kRankTol = 1e-13;

Matrix prepare(const DataPanel& panel, const PcaOptions& options) {
  validate_panel(panel);
  Matrix x = panel.values;
  if (options.demean) {
    const Vector mu = x.rowwise().mean();
    x.colwise() -= mu;
  }
  if (x.cwiseAbs().maxCoeff() == 0.0)
    throw DegenerateInputError("panel is identically zero after preprocessing");
  return x;
}

struct GramEig {
  bool inner = false;  // decomposition ran on X'X instead of XX'
  EigenDecomposition eig;
};

GramEig decompose(const Matrix& x) {
  GramEig g;
  g.inner = x.cols() < x.rows();
  if (g.inner)
    g.eig = sym_eig(Matrix(x.transpose() * x));
  else
    g.eig = sym_eig(Matrix(x * x.transpose()));
  return g;
}

// Leading r eigenvectors of XX' recovered from whichever side was
// decomposed, canonically signed.
Matrix leading_vectors(const Matrix& x, const GramEig& g, int r) {
  const double w0 = g.eig.eigenvalues[0];
  for (int l = 0; l < r; ++l) {
    const double wl = g.eig.eigenvalues[l];
    if (!(wl > 0.0) || wl <= kRankTol * w0)
      throw DegenerateInputError("panel has numerical rank below the requested " +
                                 std::to_string(r) + " factors");
  }
  if (!g.inner) return g.eig.eigenvectors.leftCols(r);
  Matrix v(x.rows(), r);
  for (int l = 0; l < r; ++l)
    v.col(l) = x * g.eig.eigenvectors.col(l) / std::sqrt(g.eig.eigenvalues[l]);
  canonicalize_signs(v);
  return v;
}

PcaResult build_pca(const Matrix& x, const GramEig& g, int r) {
  const double n = static_cast<double>(x.rows());
  PcaResult out;
  out.loadings.values = std::sqrt(n) * leading_vectors(x, g, r);
  out.factors.values = x.transpose() * out.loadings.values / n;
  out.gram_eigenvalues = g.eig.eigenvalues;
  return out;
}

FactorCountSelection build_selection(const Matrix& x, const GramEig& g, int rmax) {
  const double n = static_cast<double>(x.rows());
  const double t = static_cast<double>(x.cols());
  const double penalty = (n + t) / (n * t) * std::log(std::min(n, t));
  const double total = x.squaredNorm();

  FactorCountSelection sel;
  sel.rmax = rmax;
  sel.criterion_values.resize(rmax);
  double removed = 0.0;
  double best = std::numeric_limits<double>::infinity();
  sel.r_selected = 1;
  for (int k = 1; k <= rmax; ++k) {
    removed += g.eig.eigenvalues[k - 1];
    const double vk = std::max(total - removed, 0.0) / (n * t);
    const double ic = std::log(vk) + k * penalty;  // log(0) = -inf is fine here
    sel.criterion_values[k - 1] = ic;
    if (ic < best) {
      best = ic;
      sel.r_selected = k;
    }
  }
  return sel;
}

void check_rmax(const DataPanel& panel, int rmax) {
  const Index cap = std::min(panel.values.rows(), panel.values.cols()) - 1;
  if (rmax < 1 || rmax > cap)
    throw RankError("rmax must lie in 1.." + std::to_string(cap) + ", got " +
                    std::to_string(rmax));
}

}  // namespace

PcaResult estimate_pca(const DataPanel& panel, int r, const PcaOptions& options) {
  const Index cap = std::min(panel.values.rows(), panel.values.cols());
  if (r < 1 || r > cap)
    throw RankError("factor count must lie in 1.." + std::to_string(cap) + ", got " +
                    std::to_string(r));
  const Matrix x = prepare(panel, options);
  return build_pca(x, decompose(x), r);
}

FactorCountSelection select_num_factors(const DataPanel& panel, int rmax,
                                        const PcaOptions& options) {
  check_rmax(panel, rmax);
  const Matrix x = prepare(panel, options);
  return build_selection(x, decompose(x), rmax);
}

AutoPcaResult estimate_pca_auto(const DataPanel& panel, int rmax,
                                const PcaOptions& options) {
  check_rmax(panel, rmax);
  const Matrix x = prepare(panel, options);
  const GramEig g = decompose(x);
  AutoPcaResult out;
  out.selection = build_selection(x, g, rmax);
  out.pca = build_pca(x, g, out.selection.r_selected);
  return out;
}

}  // namespace lmhet
