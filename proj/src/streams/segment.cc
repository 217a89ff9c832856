// src/streams/segment.cc

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

#include "ssnd/streams/segment.h"

#include <algorithm>
#include <cmath>

namespace ssnd {

SegmentPlan PlanSegments(Millis length_ms, Millis size_ms, Millis shift_ms) {
  if (shift_ms <= 0 || size_ms < shift_ms)
    throw InvalidArgument("segment plan needs size >= shift > 0");
  if (length_ms < 0) throw InvalidArgument("negative session length");
  SegmentPlan plan{size_ms, shift_ms, {}};
  for (Millis k = 0;; ++k) {
    Millis start = k * shift_ms, end = start + size_ms;
    Millis emit = k == 0 ? 0 : end - shift_ms;
    if (emit >= length_ms) break;
    plan.windows.push_back({start, std::min(end, length_ms), emit});
  }
  return plan;
}

NormalizedSegment NormalizeMixture(const Matrix<double> &mixture,
                                   const Matrix<double> &targets) {
  auto x = mixture.data();
  if (x.empty()) throw InvalidArgument("empty mixture segment");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  // A constant segment leaves only rounding noise in the variance.
  if (!(var > 1e-20 * (mean * mean)) || var == 0.0)
    throw InvalidArgument("mixture segment has zero variance");

  NormalizedSegment out{mixture, targets, 1.0 / std::sqrt(var)};
  for (double &v : out.mixture.data()) v *= out.scale;
  for (double &v : out.targets.data()) v *= out.scale;
  return out;
}

double SeparationLoss(const std::array<Spectrogram, 2> &estimate,
                      const std::array<Spectrogram, 2> &reference) {
  double total = 0.0;
  for (int n = 0; n < 2; ++n) {
    const auto &a = estimate[n].values, &b = reference[n].values;
    if (!a.SameShape(b))
      throw ShapeMismatch("separation loss: stream " + std::to_string(n) +
                          " shapes differ");
    auto x = a.data(), y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i)
      total += std::abs(x[i].real() - y[i].real()) +
               std::abs(x[i].imag() - y[i].imag()) +
               std::abs(std::abs(x[i]) - std::abs(y[i]));
  }
  return 0.5 * total;
}

double SeparationLoss(const Matrix<double> &estimate, const Matrix<double> &reference,
                      const StftConfig &cfg) {
  if (estimate.rows() != 2 || !estimate.SameShape(reference))
    throw ShapeMismatch("separation loss expects two streams of equal length");
  std::array<Spectrogram, 2> a, b;
  for (std::size_t n = 0; n < 2; ++n) {
    a[n] = Stft(estimate.Row(n), cfg, n);
    b[n] = Stft(reference.Row(n), cfg, n);
  }
  return SeparationLoss(a, b);
}

}  // namespace ssnd
