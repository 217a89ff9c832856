// include/ssnd/streams/segment.h

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

#ifndef SSND_STREAMS_SEGMENT_H_
#define SSND_STREAMS_SEGMENT_H_

#include <array>
#include <vector>

#include "ssnd/core/types.h"
#include "ssnd/dsp/stft.h"

namespace ssnd {

struct SegmentWindow {
  Millis start_ms = 0;  // window [start, end), clipped to the session
  Millis end_ms = 0;
  Millis emit_start_ms = 0;  // emitted part is [emit_start, end)

  friend bool operator==(const SegmentWindow &, const SegmentWindow &) = default;
};

struct SegmentPlan {
  Millis size_ms = 0;
  Millis shift_ms = 0;
  std::vector<SegmentWindow> windows;
};

/// Window k spans [k*shift, k*shift + size). The first window emits all of
/// itself, later ones only their trailing `shift` milliseconds, so emitted
/// regions tile [0, length) exactly once and nothing is stitched. Throws
/// InvalidArgument unless size >= shift > 0; a zero length gives no windows.
SegmentPlan PlanSegments(Millis length_ms, Millis size_ms, Millis shift_ms);

/// 30 s / 27 s and 5 s / 4 s are the usual settings.
inline SegmentPlan PlanSegments(double length_s, double size_s, double shift_s) {
  return PlanSegments(SecondsToMillis(length_s), SecondsToMillis(size_s),
                      SecondsToMillis(shift_s));
}

struct NormalizedSegment {
  Matrix<double> mixture;  // M x N
  Matrix<double> targets;  // rows scaled by the same factor
  double scale = 1.0;
};

/// Scales the mixture so its variance, taken over all channels and samples
/// about the mean (divided by the count), is one, and applies the same
/// factor to `targets`. Throws InvalidArgument on a constant (or all-zero)
/// segment.
NormalizedSegment NormalizeMixture(const Matrix<double> &mixture,
                                   const Matrix<double> &targets);

/// Half the summed L1 distance of real parts, imaginary parts and
/// magnitudes over both streams. Throws ShapeMismatch on differing shapes.
double SeparationLoss(const std::array<Spectrogram, 2> &estimate,
                      const std::array<Spectrogram, 2> &reference);

/// Transforms two waveforms (rows of 2 x N matrices) with `cfg` first.
double SeparationLoss(const Matrix<double> &estimate, const Matrix<double> &reference,
                      const StftConfig &cfg);

}  // namespace ssnd

#endif  // SSND_STREAMS_SEGMENT_H_
