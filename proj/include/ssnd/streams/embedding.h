// include/ssnd/streams/embedding.h

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

#ifndef SSND_STREAMS_EMBEDDING_H_
#define SSND_STREAMS_EMBEDDING_H_

#include <string>
#include <vector>

#include "ssnd/core/types.h"

namespace ssnd {

/// Raised when a speaker is never active alone.
class NoSoloFrames : public Error {
 public:
  explicit NoSoloFrames(const std::string &speaker)
      : Error("speaker " + speaker + " has no single-talker frames"),
        speaker_(speaker) {}
  const std::string &speaker() const { return speaker_; }

 private:
  std::string speaker_;
};

struct SpeakerEmbedding {
  std::string speaker;
  std::vector<double> vector;
  std::size_t n_frames = 0;  // frames averaged
};

enum class EmbeddingFallback {
  kNone,             // throw NoSoloFrames
  kAllActiveFrames,  // average over every frame where the speaker is active
};

/// Frames where speaker c is active and every other speaker silent. The
/// set may be discontinuous.
std::vector<std::size_t> SingleTalkerFrames(const ActivityMatrix &y, std::size_t c);

/// Mean of the frame embeddings (rows of `frames`, T x E) over the
/// single-talker frames of speaker c. With the fallback enabled a speaker
/// without solo frames is averaged over all its active frames; a speaker
/// that is never active still throws NoSoloFrames.
SpeakerEmbedding ExtractEmbedding(const Matrix<double> &frames,
                                  const ActivityMatrix &y, std::size_t c,
                                  EmbeddingFallback fallback = EmbeddingFallback::kNone);

/// ExtractEmbedding for every column of y, in column order.
std::vector<SpeakerEmbedding> ExtractEmbeddings(
    const Matrix<double> &frames, const ActivityMatrix &y,
    EmbeddingFallback fallback = EmbeddingFallback::kNone);

}  // namespace ssnd

#endif  // SSND_STREAMS_EMBEDDING_H_
