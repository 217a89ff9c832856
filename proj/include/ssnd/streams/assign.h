// include/ssnd/streams/assign.h

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

#ifndef SSND_STREAMS_ASSIGN_H_
#define SSND_STREAMS_ASSIGN_H_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssnd/core/types.h"
#include "ssnd/streams/embedding.h"

namespace ssnd {

/// Raised when three or more intervals are active at once.
class ThreeWayOverlap : public Error {
 public:
  explicit ThreeWayOverlap(Millis time_ms)
      : Error("more than two speakers active at " + std::to_string(time_ms) + " ms"),
        time_ms_(time_ms) {}
  Millis time_ms() const { return time_ms_; }

 private:
  Millis time_ms_;
};

struct StreamAssignment {
  struct Entry {
    std::size_t interval;  // index into the input list
    int stream;            // 0 or 1
  };
  /// In processing order.
  std::vector<Entry> entries;
  /// stream[i] for input interval i.
  std::vector<int> stream;
};

/// Distributes intervals over two streams so that intervals sharing a
/// stream never overlap. Intervals are processed by (onset, longer first,
/// speaker, input index). A stream is free at an onset when its last
/// interval has ended (end <= onset). The first interval takes stream 0;
/// when exactly one stream is free the interval takes it; when both are
/// free it follows the previously ended interval -- latest end, then later
/// onset, then stream 0 -- onto the same stream if the speaker matches and
/// onto the other stream otherwise. Throws ThreeWayOverlap (with the onset)
/// when neither stream is free.
StreamAssignment AssignStreams(const std::vector<SpeakerInterval> &intervals);

struct EmbeddingSequence {
  Matrix<double> values;  // T x E
  FrameGrid grid;
};

/// Frame t of stream s carries the embedding of the speaker whose interval
/// on s contains the frame center, and is zero otherwise. Throws
/// InvalidArgument if an interval's speaker has no embedding.
std::array<EmbeddingSequence, 2> BuildEmbeddingSequences(
    const std::vector<SpeakerInterval> &intervals,
    const StreamAssignment &assignment,
    const std::vector<SpeakerEmbedding> &embeddings, const FrameGrid &grid);

/// Stream s at sample n is the source of the speaker whose interval on s
/// covers n (interval ends converted at `sample_rate`), else zero.
/// `sources` holds one row per entry of `speakers`.
Matrix<double> BuildTargetStreams(const std::vector<SpeakerInterval> &intervals,
                                  const StreamAssignment &assignment,
                                  const Matrix<double> &sources,
                                  const std::vector<std::string> &speakers,
                                  int sample_rate = 16000);

/// As above, computing the assignment first; throws ThreeWayOverlap.
Matrix<double> BuildTargetStreams(const std::vector<SpeakerInterval> &intervals,
                                  const Matrix<double> &sources,
                                  const std::vector<std::string> &speakers,
                                  int sample_rate = 16000);

/// Text dump, one record per interval in input order:
///   <interval_id> <speaker> <start_s> <end_s> <stream>
void WriteAssignment(const std::vector<SpeakerInterval> &intervals,
                     const StreamAssignment &assignment, std::ostream &os);

struct AssignmentDump {
  std::vector<SpeakerInterval> intervals;
  std::vector<int> stream;
};
AssignmentDump ParseAssignment(std::istream &is, const std::string &source = "<assignment>");

}  // namespace ssnd

#endif  // SSND_STREAMS_ASSIGN_H_
