#pragma once

#include <Eigen/Dense>

#include "lmhet/errors.hpp"
#include "lmhet/types.hpp"

namespace lmhet {

// Half-vectorization of a symmetric r x r matrix: the lower triangle
// (diagonal included) stacked column by column into a vector of length
// r(r+1)/2.  For [[2,1,0],[1,3,-1],[0,-1,4]] the entries are
// (2, 1, 0, 3, -1, 4).
struct SymVec {
  Vector entries;
  int dim = 0;  // side length of the matrix the vector came from

  Index size() const { return entries.size(); }
};

constexpr int vech_length(int dim) { return dim * (dim + 1) / 2; }

// Side length r such that r(r+1)/2 == len, or -1 if len is not of that form.
constexpr int vech_dim(Index len) {
  for (int r = 0; static_cast<Index>(vech_length(r)) <= len; ++r)
    if (static_cast<Index>(vech_length(r)) == len) return r;
  return -1;
}

template <typename Derived>
SymVec vech(const Eigen::MatrixBase<Derived>& m, double sym_tol = 1e-10) {
  if (m.rows() != m.cols())
    throw ShapeError("vech: matrix must be square, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const Matrix a = m;  // force evaluation of expressions
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol)
    throw SymmetryError("vech: matrix is asymmetric by " + std::to_string(asym) +
                        " (tolerance " + std::to_string(sym_tol) + ")");
  const int r = static_cast<int>(a.rows());
  SymVec out;
  out.dim = r;
  out.entries.resize(vech_length(r));
  Index k = 0;
  for (int c = 0; c < r; ++c)
    for (int i = c; i < r; ++i) out.entries[k++] = a(i, c);
  return out;
}

// Inverse of vech: rebuild the symmetric matrix from its stacked lower
// triangle.  Throws ShapeError when the length is not r(r+1)/2 for any r.
template <typename Derived>
Matrix unvech(const Eigen::MatrixBase<Derived>& v) {
  if (v.cols() != 1) throw ShapeError("unvech: expected a column vector");
  const int r = vech_dim(v.rows());
  if (r < 0)
    throw ShapeError("unvech: length " + std::to_string(v.rows()) +
                     " is not r(r+1)/2 for any r");
  Matrix m(r, r);
  Index k = 0;
  for (int c = 0; c < r; ++c)
    for (int i = c; i < r; ++i) {
      m(i, c) = v(k);
      m(c, i) = v(k);
      ++k;
    }
  return m;
}

inline Matrix unvech(const SymVec& v) { return unvech(v.entries); }

// vech of the outer product x x' without forming the matrix; writes into a
// caller-supplied buffer of length dim(x)(dim(x)+1)/2.  Hot-loop helper.
template <typename VecIn, typename VecOut>
void vech_outer_into(const Eigen::MatrixBase<VecIn>& x, Eigen::MatrixBase<VecOut> const& out_) {
  auto& out = const_cast<Eigen::MatrixBase<VecOut>&>(out_);
  const Index r = x.size();
  Index k = 0;
  for (Index c = 0; c < r; ++c) {
    const double xc = x[c];
    for (Index i = c; i < r; ++i) out[k++] = x[i] * xc;
  }
}

}  // namespace lmhet
