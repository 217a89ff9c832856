// src/streams/embedding.cc

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

#include "ssnd/streams/embedding.h"

namespace ssnd {

std::vector<std::size_t> SingleTalkerFrames(const ActivityMatrix &y, std::size_t c) {
  if (c >= y.n_speakers()) throw InvalidArgument("speaker index out of range");
  std::vector<std::size_t> frames;
  for (std::size_t t = 0; t < y.n_frames(); ++t) {
    if (!y.values(t, c)) continue;
    bool alone = true;
    for (std::size_t d = 0; d < y.n_speakers() && alone; ++d)
      alone = d == c || !y.values(t, d);
    if (alone) frames.push_back(t);
  }
  return frames;
}

SpeakerEmbedding ExtractEmbedding(const Matrix<double> &frames,
                                  const ActivityMatrix &y, std::size_t c,
                                  EmbeddingFallback fallback) {
  if (frames.rows() != y.n_frames())
    throw ShapeMismatch("embedding frames (" + std::to_string(frames.rows()) +
                        ") do not match activity frames (" +
                        std::to_string(y.n_frames()) + ")");
  const std::string name =
      c < y.speakers.size() ? y.speakers[c] : "spk" + std::to_string(c);
  auto selected = SingleTalkerFrames(y, c);
  if (selected.empty() && fallback == EmbeddingFallback::kAllActiveFrames)
    for (std::size_t t = 0; t < y.n_frames(); ++t)
      if (y.values(t, c)) selected.push_back(t);
  if (selected.empty()) throw NoSoloFrames(name);

  SpeakerEmbedding e;
  e.speaker = name;
  e.n_frames = selected.size();
  e.vector.assign(frames.cols(), 0.0);
  for (std::size_t t : selected) {
    auto row = frames.Row(t);
    for (std::size_t k = 0; k < row.size(); ++k) e.vector[k] += row[k];
  }
  for (auto &v : e.vector) v /= static_cast<double>(selected.size());
  return e;
}

std::vector<SpeakerEmbedding> ExtractEmbeddings(const Matrix<double> &frames,
                                                const ActivityMatrix &y,
                                                EmbeddingFallback fallback) {
  std::vector<SpeakerEmbedding> out;
  for (std::size_t c = 0; c < y.n_speakers(); ++c)
    out.push_back(ExtractEmbedding(frames, y, c, fallback));
  return out;
}

}  // namespace ssnd
