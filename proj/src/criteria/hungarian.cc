// src/criteria/hungarian.cc

// Copyright 2026  The SSND Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ssnd/criteria/hungarian.h"

#include <cmath>
#include <limits>

#include "ssnd/core/error.h"

namespace ssnd {

namespace {

// Rows <= cols. Returns, for each row, its column.
std::vector<int> SolveWide(const Matrix<double> &a) {
  const std::size_t n = a.rows(), m = a.cols();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] is the row matched to column j (0 = none).
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
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
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

}  // namespace

Assignment Hungarian(const Matrix<double> &cost) {
  for (double c : cost.data())
    if (!std::isfinite(c)) throw InvalidArgument("assignment costs must be finite");
  Assignment out;
  if (cost.rows() == 0) return out;
  if (cost.rows() <= cost.cols()) {
    out.row_to_col = SolveWide(cost);
  } else {
    Matrix<double> t(cost.cols(), cost.rows());
    for (std::size_t r = 0; r < cost.rows(); ++r)
      for (std::size_t c = 0; c < cost.cols(); ++c) t(c, r) = cost(r, c);
    auto col_to_row = SolveWide(t);
    out.row_to_col.assign(cost.rows(), -1);
    for (std::size_t c = 0; c < col_to_row.size(); ++c)
      out.row_to_col[col_to_row[c]] = static_cast<int>(c);
  }
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r)
    if (out.row_to_col[r] >= 0) out.total += cost(r, out.row_to_col[r]);
  return out;
}

}  // namespace ssnd
