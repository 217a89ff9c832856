// src/criteria/losses.cc

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

#include "ssnd/criteria/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ssnd/criteria/hungarian.h"

namespace ssnd {

bool LabelPermutation::IsBijective() const {
  std::vector<char> seen(order.size(), 0);
  for (std::size_t v : order) {
    if (v >= order.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

LabelPermutation LbtOrder(std::span<const double> azimuths) {
  for (double a : azimuths)
    if (!(a >= 0.0 && a < 360.0))
      throw InvalidArgument("azimuths must lie in [0, 360)");
  LabelPermutation perm;
  perm.order.resize(azimuths.size());
  std::iota(perm.order.begin(), perm.order.end(), 0);
  std::stable_sort(perm.order.begin(), perm.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return azimuths[a] < azimuths[b];
                   });
  return perm;
}

double BceTerm(double y, double p) {
  p = std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

double Bce(std::span<const double> y, std::span<const double> p) {
  if (y.size() != p.size()) throw ShapeMismatch("BCE label/probability sizes differ");
  double sum = 0.0;
  for (std::size_t c = 0; c < y.size(); ++c) sum += BceTerm(y[c], p[c]);
  return sum;
}

namespace {

void CheckShapes(const PosteriorMatrix &p, const ActivityMatrix &y) {
  if (!p.values.SameShape(Matrix<double>(y.values.rows(), y.values.cols())))
    throw ShapeMismatch("posterior and label shapes differ");
}

}  // namespace

double EendLossFixed(const PosteriorMatrix &p, const ActivityMatrix &y,
                     const LabelPermutation &perm) {
  CheckShapes(p, y);
  const std::size_t T = y.n_frames(), C = y.n_speakers();
  if (perm.order.size() != C || !perm.IsBijective())
    throw InvalidArgument("permutation does not match speaker count");
  if (T == 0 || C == 0) return 0.0;
  std::vector<double> labels(C), probs(C);
  double sum = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < C; ++i) {
      labels[i] = y.values(t, perm.order[i]);
      probs[i] = p.values(t, i);
    }
    sum += Bce(labels, probs);
  }
  return sum / static_cast<double>(T * C);
}

double EendLossLbt(const PosteriorMatrix &p, const ActivityMatrix &y) {
  if (!y.azimuths) throw InvalidArgument("location-based loss needs azimuths");
  if (y.azimuths->size() != y.n_speakers())
    throw ShapeMismatch("azimuth count does not match speaker count");
  return EendLossFixed(p, y, LbtOrder(*y.azimuths));
}

Matrix<double> PairwiseBceCost(const PosteriorMatrix &p, const ActivityMatrix &y) {
  CheckShapes(p, y);
  const std::size_t T = y.n_frames(), C = y.n_speakers();
  Matrix<double> cost(C, C, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < C; ++i)
      for (std::size_t j = 0; j < C; ++j)
        cost(i, j) += BceTerm(y.values(t, j), p.values(t, i));
  return cost;
}

PitResult EendLossPit(const PosteriorMatrix &p, const ActivityMatrix &y,
                      PitMethod method) {
  CheckShapes(p, y);
  const std::size_t T = y.n_frames(), C = y.n_speakers();
  PitResult best;
  best.permutation.order.resize(C);
  std::iota(best.permutation.order.begin(), best.permutation.order.end(), 0);
  if (T == 0 || C == 0) return best;

  if (method == PitMethod::kBruteForce) {
    if (C > 10) throw InvalidArgument("brute-force PIT is limited to 10 speakers");
    LabelPermutation perm = best.permutation;
    best.loss = std::numeric_limits<double>::infinity();
    do {
      double loss = EendLossFixed(p, y, perm);
      if (loss < best.loss) {
        best.loss = loss;
        best.permutation = perm;
      }
    } while (std::next_permutation(perm.order.begin(), perm.order.end()));
    return best;
  }

  auto assignment = Hungarian(PairwiseBceCost(p, y));
  for (std::size_t i = 0; i < C; ++i)
    best.permutation.order[i] = static_cast<std::size_t>(assignment.row_to_col[i]);
  best.loss = assignment.total / static_cast<double>(T * C);
  return best;
}

PosteriorMatrix AttractorProbs(const Matrix<double> &embeddings,
                               const AttractorSet &attractors,
                               const FrameGrid &grid) {
  const std::size_t C = attractors.n_speakers();
  if (attractors.vectors.rows() > 0 &&
      attractors.vectors.cols() != embeddings.cols())
    throw ShapeMismatch("attractor and embedding dimensions differ");
  if (static_cast<std::int64_t>(embeddings.rows()) != grid.n_frames())
    throw ShapeMismatch("embedding rows do not match grid");
  PosteriorMatrix out;
  out.grid = grid;
  out.values = Matrix<double>(embeddings.rows(), C);
  for (std::size_t t = 0; t < embeddings.rows(); ++t) {
    auto e = embeddings.Row(t);
    for (std::size_t c = 0; c < C; ++c) {
      auto a = attractors.vectors.Row(c);
      double dot = std::inner_product(e.begin(), e.end(), a.begin(), 0.0);
      out.values(t, c) = 1.0 / (1.0 + std::exp(-dot));
    }
  }
  return out;
}

double EdaLoss(std::span<const double> q) {
  if (q.empty()) throw InvalidArgument("EDA loss needs at least the stop attractor");
  std::vector<double> labels(q.size(), 1.0);
  labels.back() = 0.0;
  return Bce(labels, q) / static_cast<double>(q.size());
}

}  // namespace ssnd
