#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace polyinv {

struct Matching {
  /// index[q] is the position in the current value list tracked by target q.
  std::vector<std::size_t> index;
  /// True when the nearest-value match was ambiguous and the assignment
  /// problem decided.
  bool used_fallback = false;
};

/// Pairs the current (ascending) proper values with the targets sorted
/// ascending.
///
/// Each current value is first sent to its nearest target. If that is a
/// bijection and every value beats its runner-up target by more than
/// sep_tol, it is returned as is. Otherwise the minimum sum of squared
/// distances assignment is solved exactly and flagged. Throws
/// Error(AmbiguousMatching) when a competing assignment costs within
/// sep_tol * (target diameter) of the optimum.
Matching match_targets(const Eigen::VectorXd& current, const Eigen::VectorXd& targets,
                       double sep_tol);

/// Minimum-cost perfect assignment (Hungarian method). Returns row -> column.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace polyinv
