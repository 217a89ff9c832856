// src/streams/assemble.cc

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

#include "ssnd/streams/assemble.h"

#include "ssnd/core/activity.h"

namespace ssnd {

Assembly Assemble(const std::vector<SpeakerInterval> &intervals,
                  const Matrix<double> &frame_embeddings, const FrameGrid &grid,
                  const AssemblyOptions &options, const Matrix<double> *sources,
                  const std::vector<std::string> &source_speakers) {
  if (frame_embeddings.rows() != static_cast<std::size_t>(grid.n_frames()))
    throw ShapeMismatch("frame embeddings do not match the grid");
  Assembly out;
  out.intervals = intervals;
  auto activity = IntervalsToActivity(intervals, grid, SpeakersOf(intervals));
  out.embeddings = ExtractEmbeddings(frame_embeddings, activity, options.fallback);
  out.assignment = AssignStreams(intervals);
  out.sequences = BuildEmbeddingSequences(intervals, out.assignment, out.embeddings, grid);
  if (sources)
    out.targets = BuildTargetStreams(intervals, out.assignment, *sources,
                                     source_speakers, options.sample_rate);
  return out;
}

}  // namespace ssnd
