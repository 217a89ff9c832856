// src/core/activity.cc

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

#include "ssnd/core/activity.h"

#include <algorithm>
#include <unordered_map>

namespace ssnd {

ActivityMatrix IntervalsToActivity(const std::vector<SpeakerInterval> &intervals,
                                   const FrameGrid &grid,
                                   const std::vector<std::string> &speakers) {
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < speakers.size(); ++c) column[speakers[c]] = c;

  ActivityMatrix act;
  act.grid = grid;
  act.speakers = speakers;
  act.values = Matrix<std::uint8_t>(grid.n_frames(), speakers.size(), 0);

  const std::int64_t n = grid.n_frames();
  const Millis shift = grid.shift_ms(), window = grid.window_ms();
  for (const auto &iv : intervals) {
    auto it = column.find(iv.speaker);
    if (it == column.end())
      throw InvalidArgument("unknown speaker in intervals: " + iv.speaker);
    ValidateInterval(iv);
    // Smallest t with 2*t*shift + window >= 2*start, and smallest t with
    // 2*t*shift + window >= 2*end; frames in between have centers inside.
    auto first_at_or_after = [&](Millis ms) -> std::int64_t {
      Millis num = 2 * ms - window;
      if (num <= 0) return 0;
      return (num + 2 * shift - 1) / (2 * shift);
    };
    std::int64_t t0 = std::min(first_at_or_after(iv.start_ms), n);
    std::int64_t t1 = std::min(first_at_or_after(iv.end_ms), n);
    for (std::int64_t t = t0; t < t1; ++t) act.values(t, it->second) = 1;
  }
  return act;
}

std::vector<SpeakerInterval> ActivityToIntervals(const ActivityMatrix &act) {
  std::vector<SpeakerInterval> out;
  const std::size_t n = act.n_frames();
  for (std::size_t c = 0; c < act.n_speakers(); ++c) {
    const std::string name =
        c < act.speakers.size() ? act.speakers[c] : "spk" + std::to_string(c);
    std::size_t t = 0;
    while (t < n) {
      if (!act.values(t, c)) {
        ++t;
        continue;
      }
      std::size_t run_end = t;
      while (run_end < n && act.values(run_end, c)) ++run_end;
      out.push_back({name, act.grid.FrameStart(t), act.grid.FrameStart(run_end)});
      t = run_end;
    }
  }
  SortIntervals(&out);
  return out;
}

std::vector<SpeakerInterval> MergeSpeakerIntervals(
    std::vector<SpeakerInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const SpeakerInterval &a, const SpeakerInterval &b) {
              if (a.speaker != b.speaker) return a.speaker < b.speaker;
              return a.start_ms < b.start_ms;
            });
  std::vector<SpeakerInterval> out;
  for (auto &iv : intervals) {
    if (!out.empty() && out.back().speaker == iv.speaker &&
        iv.start_ms <= out.back().end_ms) {
      out.back().end_ms = std::max(out.back().end_ms, iv.end_ms);
    } else {
      out.push_back(std::move(iv));
    }
  }
  SortIntervals(&out);
  return out;
}

}  // namespace ssnd
