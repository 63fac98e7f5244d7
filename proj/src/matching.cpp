#include "polyinv/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polyinv/error.hpp"

namespace polyinv {

std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
  // Shortest augmenting path formulation with 1-based potentials.
  const auto n = static_cast<std::size_t>(cost.rows());
  if (static_cast<std::size_t>(cost.cols()) != n) {
    throw Error(ErrorKind::InvalidInput, "assignment cost matrix must be square");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

Matching match_targets(const Eigen::VectorXd& current, const Eigen::VectorXd& targets,
                       double sep_tol) {
  const auto m = static_cast<std::size_t>(current.size());
  if (static_cast<std::size_t>(targets.size()) != m) {
    throw Error(ErrorKind::InvalidInput, "current and target value lists differ in length");
  }
  Eigen::VectorXd sorted_targets = targets;
  std::sort(sorted_targets.begin(), sorted_targets.end());

  Matching out;
  out.index.assign(m, m);

  // Greedy nearest-target pass over the current values.
  bool clear = true;
  for (std::size_t c = 0; c < m && clear; ++c) {
    double best = std::numeric_limits<double>::infinity();
    double runner_up = best;
    std::size_t arg = m;
    for (std::size_t t = 0; t < m; ++t) {
      const double d = std::abs(current[c] - sorted_targets[t]);
      if (d < best) {
        runner_up = best;
        best = d;
        arg = t;
      } else if (d < runner_up) {
        runner_up = d;
      }
    }
    if (out.index[arg] != m || (m > 1 && runner_up - best <= sep_tol)) {
      clear = false;
    } else {
      out.index[arg] = c;
    }
  }
  if (clear) return out;

  // Assignment fallback: target t -> current value, squared distance cost.
  Eigen::MatrixXd cost(m, m);
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t c = 0; c < m; ++c) cost(t, c) = std::pow(sorted_targets[t] - current[c], 2);
  out.index = solve_assignment(cost);
  out.used_fallback = true;

  const double diameter = m > 0 ? sorted_targets[m - 1] - sorted_targets[0] : 0.0;
  const double tie_tol = sep_tol * std::max(diameter, 1.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto ca = out.index[a];
      const auto cb = out.index[b];
      const double swap_delta = cost(a, cb) + cost(b, ca) - cost(a, ca) - cost(b, cb);
      if (swap_delta <= tie_tol) {
        throw Error(ErrorKind::AmbiguousMatching,
                    "targets " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                        " can be matched either way");
      }
    }
  }
  return out;
}

}  // namespace polyinv
