// include/ssnd/streams/assemble.h

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

#ifndef SSND_STREAMS_ASSEMBLE_H_
#define SSND_STREAMS_ASSEMBLE_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ssnd/streams/assign.h"
#include "ssnd/streams/embedding.h"

namespace ssnd {

struct AssemblyOptions {
  EmbeddingFallback fallback = EmbeddingFallback::kNone;
  int sample_rate = 16000;
};

struct Assembly {
  std::vector<SpeakerInterval> intervals;  // as given
  std::vector<SpeakerEmbedding> embeddings;
  StreamAssignment assignment;
  std::array<EmbeddingSequence, 2> sequences;
  std::optional<Matrix<double>> targets;  // 2 x N when sources were given
};

/// Decided intervals and frame embeddings (T x E on `grid`) to speaker
/// embeddings, a two-stream assignment and the two embedding sequences.
/// Activity for embedding extraction is the rasterized intervals. When
/// `sources` is set (one row per entry of `source_speakers`) target streams
/// are built too.
Assembly Assemble(const std::vector<SpeakerInterval> &intervals,
                  const Matrix<double> &frame_embeddings, const FrameGrid &grid,
                  const AssemblyOptions &options = {},
                  const Matrix<double> *sources = nullptr,
                  const std::vector<std::string> &source_speakers = {});

}  // namespace ssnd

#endif  // SSND_STREAMS_ASSEMBLE_H_
