// include/ssnd/core/types.h

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

#ifndef SSND_CORE_TYPES_H_
#define SSND_CORE_TYPES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssnd/core/matrix.h"

namespace ssnd {

/// Integer milliseconds. All interval arithmetic is done in this unit.
using Millis = std::int64_t;

Millis SecondsToMillis(double seconds);
inline double MillisToSeconds(Millis ms) { return static_cast<double>(ms) / 1000.0; }

/// A frame grid: frame t covers [t*shift, t*shift + window) milliseconds.
class FrameGrid {
 public:
  FrameGrid() = default;
  /// Throws InvalidArgument unless shift > 0 and window >= shift.
  FrameGrid(Millis shift_ms, Millis window_ms, std::int64_t n_frames);

  /// Grid with window == shift and enough frames to cover `duration_ms`.
  static FrameGrid Covering(Millis duration_ms, Millis shift_ms);

  Millis shift_ms() const { return shift_ms_; }
  Millis window_ms() const { return window_ms_; }
  std::int64_t n_frames() const { return n_frames_; }

  Millis FrameStart(std::int64_t t) const { return t * shift_ms_; }
  /// Twice the frame center, in ms, so half-millisecond centers stay exact.
  Millis TwiceCenter(std::int64_t t) const {
    return 2 * t * shift_ms_ + window_ms_;
  }
  /// Index of the frame whose [start, start+shift) span holds `ms`.
  std::int64_t FrameOf(Millis ms) const { return ms / shift_ms_; }

  Millis DurationMs() const { return n_frames_ * shift_ms_; }

  FrameGrid WithFrames(std::int64_t n_frames) const {
    return FrameGrid(shift_ms_, window_ms_, n_frames);
  }

  friend bool operator==(const FrameGrid &, const FrameGrid &) = default;

 private:
  Millis shift_ms_ = 10;
  Millis window_ms_ = 10;
  std::int64_t n_frames_ = 0;
};

/// Speech activity of one speaker over the half-open span [start, end).
struct SpeakerInterval {
  std::string speaker;
  Millis start_ms = 0;
  Millis end_ms = 0;

  double start() const { return MillisToSeconds(start_ms); }
  double end() const { return MillisToSeconds(end_ms); }
  Millis duration_ms() const { return end_ms - start_ms; }

  /// Rounds both ends to the nearest millisecond; throws on start >= end
  /// or negative start.
  static SpeakerInterval FromSeconds(std::string speaker, double start,
                                     double end);

  friend bool operator==(const SpeakerInterval &,
                         const SpeakerInterval &) = default;
};

void ValidateInterval(const SpeakerInterval &interval);

/// Binary frame-level activity, T frames by C speakers.
struct ActivityMatrix {
  FrameGrid grid;
  Matrix<std::uint8_t> values;
  std::vector<std::string> speakers;
  std::optional<std::vector<double>> azimuths;  // degrees, one per speaker

  std::size_t n_frames() const { return values.rows(); }
  std::size_t n_speakers() const { return values.cols(); }
  void Validate() const;
};

/// Frame-level speech probabilities, T frames by C outputs.
struct PosteriorMatrix {
  FrameGrid grid;
  Matrix<double> values;
  std::vector<std::string> speakers;  // column labels; may be empty

  std::size_t n_frames() const { return values.rows(); }
  std::size_t n_speakers() const { return values.cols(); }
  std::string SpeakerLabel(std::size_t c) const;
  void Validate() const;
};

using MicPosition = std::array<double, 3>;

/// M channels by N samples.
struct MultichannelAudio {
  Matrix<double> samples;
  int sample_rate = 16000;
  std::optional<std::vector<MicPosition>> geometry;
  std::size_t reference = 0;

  std::size_t n_channels() const { return samples.rows(); }
  std::size_t n_samples() const { return samples.cols(); }
  std::span<const double> Channel(std::size_t m) const { return samples.Row(m); }
  std::span<double> Channel(std::size_t m) { return samples.Row(m); }
  void Validate() const;
};

/// Seven-microphone circular array: six mics on a 4.25 cm circle plus a
/// center mic, which is channel 0 and the reference.
std::vector<MicPosition> CircularArrayGeometry(int n_ring = 6,
                                               double radius_m = 0.0425);

/// Sorts by (start, end, speaker).
void SortIntervals(std::vector<SpeakerInterval> *intervals);

/// Distinct speaker ids in order of first appearance after sorting.
std::vector<std::string> SpeakersOf(const std::vector<SpeakerInterval> &intervals);

}  // namespace ssnd

#endif  // SSND_CORE_TYPES_H_
