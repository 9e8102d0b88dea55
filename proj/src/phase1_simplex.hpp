#pragma once

// Dense phase-1 simplex for { x >= 0 : A x = b } with b >= 0. Minimizes the
// sum of one artificial per row; the optimum is the L1 residual of the best
// fit, and the optimal duals form a Farkas certificate when it is positive.

#include <cstddef>
#include <limits>
#include <vector>

#include <gmpxx.h>

#include "bellkit/error.hpp"

namespace bellkit::detail {

template <class T>
struct SimplexTolerance;

template <>
struct SimplexTolerance<double> {
  static constexpr double pivot = 1e-11;
  static constexpr double cost = 1e-11;
};

template <>
struct SimplexTolerance<mpq_class> {
  // Exact arithmetic: compare against zero.
  static inline const mpq_class pivot{0};
  static inline const mpq_class cost{0};
};

template <class T>
struct Phase1Solution {
  T residual;
  std::vector<T> primal;  // one entry per structural column
  std::vector<T> duals;   // one entry per row
};

template <class T>
Phase1Solution<T> solve_phase1(std::size_t rows, std::size_t cols, const std::vector<T>& matrix,
                               const std::vector<T>& rhs) {
  using Tol = SimplexTolerance<T>;
  const std::size_t width = cols + rows + 1;  // structural | artificial | rhs
  const std::size_t rhs_col = width - 1;
  std::vector<T> tab(rows * width, T(0));
  std::vector<T> cost(width, T(0));  // reduced costs; cost[rhs_col] holds -objective
  std::vector<std::size_t> basis(rows);

  for (std::size_t i = 0; i < rows; ++i) {
    T* row = &tab[i * width];
    for (std::size_t j = 0; j < cols; ++j) row[j] = matrix[i * cols + j];
    row[cols + i] = T(1);
    row[rhs_col] = rhs[i];
    basis[i] = cols + i;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    T s(0);
    for (std::size_t i = 0; i < rows; ++i) s += tab[i * width + j];
    cost[j] = -s;
  }
  {
    T s(0);
    for (std::size_t i = 0; i < rows; ++i) s += rhs[i];
    cost[rhs_col] = -s;
  }

  const std::size_t max_iterations = 50 * (rows + cols) + 1000;
  std::size_t stalled = 0;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iterations)
      throw Error(ErrorCode::corrupted_data, "simplex iteration limit reached");

    // Dantzig pricing; Bland's rule once progress stalls, which rules out cycling.
    const bool bland = stalled > 20;
    std::size_t enter = width;
    T best(0);
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (cost[j] < -Tol::cost) {
        if (bland) {
          enter = j;
          break;
        }
        if (enter == width || cost[j] < best) {
          enter = j;
          best = cost[j];
        }
      }
    }
    if (enter == width) break;

    std::size_t leave = rows;
    T ratio(0);
    for (std::size_t i = 0; i < rows; ++i) {
      const T& a = tab[i * width + enter];
      if (!(a > Tol::pivot)) continue;
      T r = tab[i * width + rhs_col] / a;
      if (leave == rows || r < ratio || (r == ratio && basis[i] < basis[leave])) {
        leave = i;
        ratio = r;
      }
    }
    if (leave == rows) break;  // unbounded direction cannot occur in phase 1

    const T before = cost[rhs_col];
    T* prow = &tab[leave * width];
    const T pivot = prow[enter];
    for (std::size_t j = 0; j < width; ++j)
      if (prow[j] != 0) prow[j] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave) continue;
      T* row = &tab[i * width];
      const T factor = row[enter];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < width; ++j)
        if (prow[j] != 0) row[j] -= factor * prow[j];
    }
    {
      const T factor = cost[enter];
      for (std::size_t j = 0; j < width; ++j)
        if (prow[j] != 0) cost[j] -= factor * prow[j];
    }
    basis[leave] = enter;
    stalled = (cost[rhs_col] > before) ? 0 : stalled + 1;
  }

  Phase1Solution<T> sol;
  sol.residual = -cost[rhs_col];
  sol.primal.assign(cols, T(0));
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] < cols) sol.primal[basis[i]] = tab[i * width + rhs_col];
  sol.duals.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) sol.duals[i] = T(1) - cost[cols + i];
  return sol;
}

}  // namespace bellkit::detail
