#pragma once

#include "lmhet/errors.hpp"
#include "lmhet/types.hpp"

namespace lmhet {

struct EigenDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns, one per eigenvalue
};

// Flip eigenvector signs to a canonical form: in each column the entry of
// largest magnitude (lowest index on ties) is made non-negative.
void canonicalize_signs(Eigen::Ref<Matrix> vectors);

// Full eigendecomposition of a real symmetric matrix via Householder
// reduction to tridiagonal form followed by the implicit-shift QL iteration.
// Eigenvalues are returned in descending order with canonically signed
// orthonormal eigenvectors.  Throws ShapeError / InputError / SymmetryError
// for bad input and ConvergenceError if any eigenvalue fails to settle
// within the iteration cap.
EigenDecomposition sym_eig(const Matrix& m);

}  // namespace lmhet
