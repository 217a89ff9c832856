// include/ssnd/criteria/losses.h

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

#ifndef SSND_CRITERIA_LOSSES_H_
#define SSND_CRITERIA_LOSSES_H_

#include <span>
#include <vector>

#include "ssnd/core/types.h"

namespace ssnd {

/// Probabilities are clipped to [kProbEpsilon, 1 - kProbEpsilon] before
/// every log.
constexpr double kProbEpsilon = 1e-7;

/// order[i] is the label column assigned to output i.
struct LabelPermutation {
  std::vector<std::size_t> order;

  bool IsBijective() const;
  friend bool operator==(const LabelPermutation &,
                         const LabelPermutation &) = default;
};

/// Label columns sorted by ascending azimuth, ties by original index.
/// Azimuths must lie in [0, 360).
LabelPermutation LbtOrder(std::span<const double> azimuths);

/// -sum_c [y log p + (1 - y) log(1 - p)].
double Bce(std::span<const double> y, std::span<const double> p);

/// BCE of a single label/probability pair, clipped.
double BceTerm(double y, double p);

/// Diarization loss with outputs tied to labels in ascending-azimuth order:
/// (1 / TC) sum_t H(y_t permuted, p_t). Requires Y.azimuths.
double EendLossLbt(const PosteriorMatrix &p, const ActivityMatrix &y);

/// Same loss with the outputs tied to labels by an explicit permutation.
double EendLossFixed(const PosteriorMatrix &p, const ActivityMatrix &y,
                     const LabelPermutation &perm);

enum class PitMethod { kBruteForce, kHungarian };

struct PitResult {
  double loss = 0.0;
  LabelPermutation permutation;
};

/// Minimum of EendLossFixed over all permutations. Brute force is limited
/// to C <= 10; the Hungarian route solves the C x C matrix of per-pair BCE
/// sums.
PitResult EendLossPit(const PosteriorMatrix &p, const ActivityMatrix &y,
                      PitMethod method = PitMethod::kHungarian);

/// Per-pair BCE sums: cost(i, j) = sum_t BceTerm(y[t][j], p[t][i]).
Matrix<double> PairwiseBceCost(const PosteriorMatrix &p, const ActivityMatrix &y);

/// C speaker attractors plus one trailing stop attractor, and their
/// existence probabilities.
struct AttractorSet {
  Matrix<double> vectors;              // (C + 1) x E
  std::vector<double> existence_probs;  // C + 1

  std::size_t n_speakers() const {
    return vectors.rows() == 0 ? 0 : vectors.rows() - 1;
  }
};

/// p[t][c] = sigmoid(e_t . a_c) over the first C attractors.
PosteriorMatrix AttractorProbs(const Matrix<double> &embeddings,
                               const AttractorSet &attractors,
                               const FrameGrid &grid);

/// (1 / (C + 1)) H(l, q) with l = (1, ..., 1, 0).
double EdaLoss(std::span<const double> q);

inline double TotalDiarLoss(double eend, double eda) { return eend + eda; }

}  // namespace ssnd

#endif  // SSND_CRITERIA_LOSSES_H_
