#pragma once

#include "lmhet/panel.hpp"
#include "lmhet/types.hpp"

namespace lmhet {

// Estimated loadings, one row per series, normalized so that
// values' * values / N = I_r.  Construction does not enforce the
// normalization; it is a postcondition of estimation, and statistics
// consumers accept any loading matrix.
struct LoadingMatrix {
  Matrix values;  // N x r

  Index num_series() const { return values.rows(); }
  int num_factors() const { return static_cast<int>(values.cols()); }
};

// Estimated factors, one row per period: values = X' * loadings / N.
struct FactorMatrix {
  Matrix values;  // T x r
};

struct PcaOptions {
  bool demean = true;  // subtract each series' time mean first
};

struct PcaResult {
  LoadingMatrix loadings;
  FactorMatrix factors;
  Vector gram_eigenvalues;  // all eigenvalues of the smaller Gram matrix, descending
};

// Principal-components estimation of an approximate factor structure.
// Loadings are sqrt(N) times the leading eigenvectors of X X'; the
// eigendecomposition is carried out on whichever Gram matrix (X X' or X' X)
// is smaller and mapped back, which gives identical results up to roundoff.
// Throws RankError for an infeasible r and DegenerateInputError when the
// (demeaned) panel cannot support r factors numerically.
PcaResult estimate_pca(const DataPanel& panel, int r, const PcaOptions& options = {});

struct FactorCountSelection {
  int r_selected = 0;
  int rmax = 0;
  Vector criterion_values;  // IC(k) for k = 1..rmax
};

// Information-criterion choice of the factor count: IC(k) = ln V(k) +
// k ((N+T)/(NT)) ln(min(N,T)) with V(k) the average squared residual after
// removing k principal components; the minimizing k wins, lowest k on ties.
FactorCountSelection select_num_factors(const DataPanel& panel, int rmax,
                                        const PcaOptions& options = {});

// One decomposition serving both jobs: select the factor count, then build
// loadings and factors for the selected count.
struct AutoPcaResult {
  PcaResult pca;
  FactorCountSelection selection;
};

AutoPcaResult estimate_pca_auto(const DataPanel& panel, int rmax,
                                const PcaOptions& options = {});

}  // namespace lmhet
