// src/core/types.cc

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

#include "ssnd/core/types.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

namespace ssnd {

Millis SecondsToMillis(double seconds) {
  return static_cast<Millis>(std::llround(seconds * 1000.0));
}

FrameGrid::FrameGrid(Millis shift_ms, Millis window_ms, std::int64_t n_frames)
    : shift_ms_(shift_ms), window_ms_(window_ms), n_frames_(n_frames) {
  if (shift_ms <= 0) throw InvalidArgument("frame shift must be positive");
  if (window_ms < shift_ms)
    throw InvalidArgument("frame window must be at least the frame shift");
  if (n_frames < 0) throw InvalidArgument("negative frame count");
}

FrameGrid FrameGrid::Covering(Millis duration_ms, Millis shift_ms) {
  if (shift_ms <= 0) throw InvalidArgument("frame shift must be positive");
  std::int64_t n = (std::max<Millis>(duration_ms, 0) + shift_ms - 1) / shift_ms;
  return FrameGrid(shift_ms, shift_ms, n);
}

SpeakerInterval SpeakerInterval::FromSeconds(std::string speaker, double start,
                                             double end) {
  SpeakerInterval out{std::move(speaker), SecondsToMillis(start),
                      SecondsToMillis(end)};
  ValidateInterval(out);
  return out;
}

void ValidateInterval(const SpeakerInterval &interval) {
  if (interval.start_ms < 0)
    throw InvalidArgument("interval for " + interval.speaker +
                          " starts before 0");
  if (interval.start_ms >= interval.end_ms)
    throw InvalidArgument("interval for " + interval.speaker +
                          " has start >= end");
}

void ActivityMatrix::Validate() const {
  if (static_cast<std::int64_t>(values.rows()) != grid.n_frames())
    throw ShapeMismatch("activity rows do not match grid frame count");
  if (speakers.size() != values.cols())
    throw ShapeMismatch("activity columns do not match speaker list");
  if (azimuths && azimuths->size() != values.cols())
    throw ShapeMismatch("azimuth count does not match speaker count");
  for (auto v : values.data())
    if (v > 1) throw InvalidArgument("activity values must be 0 or 1");
}

std::string PosteriorMatrix::SpeakerLabel(std::size_t c) const {
  if (c < speakers.size()) return speakers[c];
  return "spk" + std::to_string(c);
}

void PosteriorMatrix::Validate() const {
  if (static_cast<std::int64_t>(values.rows()) != grid.n_frames())
    throw ShapeMismatch("posterior rows do not match grid frame count");
  if (!speakers.empty() && speakers.size() != values.cols())
    throw ShapeMismatch("posterior columns do not match speaker list");
  for (double v : values.data())
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidArgument("posterior values must lie in [0, 1]");
}

void MultichannelAudio::Validate() const {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (n_channels() > 0 && reference >= n_channels())
    throw InvalidArgument("reference channel out of range");
  if (geometry && geometry->size() != n_channels())
    throw ShapeMismatch("geometry does not match channel count");
}

std::vector<MicPosition> CircularArrayGeometry(int n_ring, double radius_m) {
  std::vector<MicPosition> mics;
  mics.push_back({0.0, 0.0, 0.0});
  for (int i = 0; i < n_ring; ++i) {
    double phi = 2.0 * std::numbers::pi * i / n_ring;
    mics.push_back({radius_m * std::cos(phi), radius_m * std::sin(phi), 0.0});
  }
  return mics;
}

void SortIntervals(std::vector<SpeakerInterval> *intervals) {
  std::sort(intervals->begin(), intervals->end(),
            [](const SpeakerInterval &a, const SpeakerInterval &b) {
              if (a.start_ms != b.start_ms) return a.start_ms < b.start_ms;
              if (a.end_ms != b.end_ms) return a.end_ms < b.end_ms;
              return a.speaker < b.speaker;
            });
}

std::vector<std::string> SpeakersOf(
    const std::vector<SpeakerInterval> &intervals) {
  std::vector<SpeakerInterval> sorted = intervals;
  SortIntervals(&sorted);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto &iv : sorted)
    if (seen.insert(iv.speaker).second) out.push_back(iv.speaker);
  return out;
}

}  // namespace ssnd
