#pragma once

#include <string>
#include <vector>

#include "lmhet/errors.hpp"
#include "lmhet/types.hpp"

namespace lmhet {

// Balanced panel of N series observed over T periods, stored as an N x T
// matrix (one row per series).
struct DataPanel {
  Matrix values;                        // N x T
  std::vector<std::string> series_ids;  // length N, unique, non-empty

  Index num_series() const { return values.rows(); }
  Index num_periods() const { return values.cols(); }
};

// Throws InputError unless the panel has N >= 2, T >= 2, finite values, and
// unique non-empty ids matching the row count (an empty id list is allowed
// and means "unnamed").
void validate_panel(const DataPanel& panel);

DataPanel make_panel(Matrix values, std::vector<std::string> series_ids = {});

// Partition of N variables into S contiguous blocks.  Variables are assumed
// already ordered so that group j occupies rows [boundaries[j-1], boundaries[j]).
struct GroupStructure {
  std::vector<int> sizes;          // N_j, each >= 1
  std::vector<int> boundaries;     // cumulative sizes, boundaries[S-1] == N
  std::vector<double> shares;      // N_j / N
  std::vector<std::string> names;  // one label per group

  int num_groups() const { return static_cast<int>(sizes.size()); }
  int num_vars() const { return boundaries.empty() ? 0 : boundaries.back(); }
  int begin_of(int j) const { return j == 0 ? 0 : boundaries[j - 1]; }
  int end_of(int j) const { return boundaries[j]; }
  int num_pairs() const {
    const int s = num_groups();
    return s * (s - 1) / 2;
  }
};

// Build a contiguous group structure directly from block sizes.
// Throws InsufficientGroupsError for fewer than two groups and InputError
// for an empty block or a name count mismatch.
GroupStructure make_contiguous_groups(const std::vector<int>& sizes,
                                      std::vector<std::string> names = {});

struct GroupingResult {
  GroupStructure groups;
  // permutation[pos] = index, in the original ordering, of the variable that
  // sits at row pos once variables are contiguous by group.
  std::vector<int> permutation;
};

// Group membership from per-variable tags.  Groups are numbered by first
// appearance of their tag; within a group the original order is kept.
// Tags (A, B, A, B) give permutation (0, 2, 1, 3).
GroupingResult group_structure(const std::vector<std::string>& tags);

// Reorder panel rows so that out.row(i) = in.row(perm[i]).  perm must be a
// bijection on 0..N-1 (InputError otherwise).
DataPanel apply_permutation(const DataPanel& panel, const std::vector<int>& perm);

}  // namespace lmhet
