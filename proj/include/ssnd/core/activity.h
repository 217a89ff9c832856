// include/ssnd/core/activity.h

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

#ifndef SSND_CORE_ACTIVITY_H_
#define SSND_CORE_ACTIVITY_H_

#include <string>
#include <vector>

#include "ssnd/core/types.h"

namespace ssnd {

/// Rasterizes intervals onto `grid`. Frame t is active for speaker c iff the
/// frame center lies inside one of c's half-open intervals. Throws
/// InvalidArgument if an interval names a speaker missing from `speakers`.
ActivityMatrix IntervalsToActivity(const std::vector<SpeakerInterval> &intervals,
                                   const FrameGrid &grid,
                                   const std::vector<std::string> &speakers);

/// Maximal runs of active frames per speaker, as [run_start, run_end) frame
/// onsets. Output is sorted by (start, end, speaker).
std::vector<SpeakerInterval> ActivityToIntervals(const ActivityMatrix &act);

/// Merges overlapping or abutting intervals of the same speaker.
std::vector<SpeakerInterval> MergeSpeakerIntervals(
    std::vector<SpeakerInterval> intervals);

}  // namespace ssnd

#endif  // SSND_CORE_ACTIVITY_H_
