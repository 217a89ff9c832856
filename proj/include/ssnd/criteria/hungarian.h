// include/ssnd/criteria/hungarian.h

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

#ifndef SSND_CRITERIA_HUNGARIAN_H_
#define SSND_CRITERIA_HUNGARIAN_H_

#include <vector>

#include "ssnd/core/matrix.h"

namespace ssnd {

struct Assignment {
  /// row_to_col[r] is the column matched to row r, or -1 when there are
  /// more rows than columns and r is left unmatched.
  std::vector<int> row_to_col;
  double total = 0.0;
};

/// Minimum-cost matching of rows to columns in O(n^2 m) for an n x m cost
/// matrix (shortest augmenting paths with potentials). Every row is matched
/// when rows <= cols, otherwise every column. Costs must be finite.
Assignment Hungarian(const Matrix<double> &cost);

}  // namespace ssnd

#endif  // SSND_CRITERIA_HUNGARIAN_H_
