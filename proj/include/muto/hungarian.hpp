#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace muto {

// Minimum-cost assignment of every row to a distinct column (rows <= cols)
// by shortest augmenting paths with dual potentials, O(rows^2 * cols).
// Returns row_to_col.
template <typename Derived>
std::vector<Eigen::Index> solve_assignment(const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();
  eigen_assert(rows <= cols);
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  // 1-based indexing; column 0 is the virtual source of each augmentation.
  std::vector<Scalar> u(rows + 1, Scalar(0)), v(cols + 1, Scalar(0));
  std::vector<Eigen::Index> col_owner(cols + 1, 0), way(cols + 1, 0);
  std::vector<Scalar> min_slack(cols + 1);
  std::vector<char> used(cols + 1);

  for (Eigen::Index r = 1; r <= rows; ++r) {
    col_owner[0] = r;
    Eigen::Index j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = col_owner[j0];
      Scalar delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const Scalar reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Eigen::Index> row_to_col(rows, -1);
  for (Eigen::Index j = 1; j <= cols; ++j)
    if (col_owner[j] != 0) row_to_col[col_owner[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace muto
