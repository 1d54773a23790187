#pragma once

#include <stdexcept>
#include <string>

namespace lmhet {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent user input (dimensions, ranges, option values).
class InputError : public Error {
public:
  using Error::Error;
};

// Matrix/vector dimensions do not match what an operation requires.
class ShapeError : public Error {
public:
  using Error::Error;
};

// A matrix that must be symmetric is not, beyond tolerance.
class SymmetryError : public Error {
public:
  using Error::Error;
};

// Group or pair index out of range.
class IndexError : public Error {
public:
  using Error::Error;
};

// Requested number of factors is infeasible for the given panel.
class RankError : public Error {
public:
  using Error::Error;
};

// Input data cannot support the requested decomposition (zero panel,
// numerically rank-deficient second-moment matrix, and the like).
class DegenerateInputError : public Error {
public:
  using Error::Error;
};

// An iterative routine exceeded its iteration budget.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

// The variance matrix of the score vector is numerically singular, so the
// quadratic form test statistic is undefined.
class SingularVarianceError : public Error {
public:
  using Error::Error;
};

// Fewer than two groups supplied where a between-group comparison is needed.
class InsufficientGroupsError : public Error {
public:
  using Error::Error;
};

// Series identifiers in the data matrix and the group map do not line up.
class MappingError : public Error {
public:
  using Error::Error;
};

// A Monte Carlo experiment could not produce valid results (for example too
// many replications had to be discarded).
class ExperimentError : public Error {
public:
  using Error::Error;
};

}  // namespace lmhet
