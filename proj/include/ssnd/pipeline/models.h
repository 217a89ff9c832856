// include/ssnd/pipeline/models.h

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

#ifndef SSND_PIPELINE_MODELS_H_
#define SSND_PIPELINE_MODELS_H_

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "ssnd/core/io.h"
#include "ssnd/core/types.h"
#include "ssnd/simulate/session.h"
#include "ssnd/streams/assign.h"

namespace ssnd {

struct DiarizerOutput {
  PosteriorMatrix posteriors;  // T x C
  Matrix<double> embeddings;   // T x E on posteriors.grid
};

/// Frame-level speech posteriors and frame embeddings from a mixture.
class DiarizerInterface {
 public:
  virtual ~DiarizerInterface() = default;
  virtual std::string Name() const = 0;
  /// `grid` is the frame grid the caller expects; implementations must
  /// return posteriors and embeddings on it.
  virtual DiarizerOutput Diarize(const MultichannelAudio &mixture,
                                 const FrameGrid &grid) = 0;
};

/// Where a segment sits in the session.
struct SegmentContext {
  std::size_t offset_samples = 0;
  Millis start_ms = 0;
};

/// Two reference-mic waveforms from a mixture segment and the matching
/// slices of the two embedding sequences (whose frame 0 is the segment's
/// first frame).
class SeparatorInterface {
 public:
  virtual ~SeparatorInterface() = default;
  virtual std::string Name() const = 0;
  /// Returns 2 x segment.n_samples().
  virtual Matrix<double> Separate(const MultichannelAudio &segment,
                                  const std::array<EmbeddingSequence, 2> &sequences,
                                  const SegmentContext &context) = 0;
};

/// Transcripts from separated streams. `decided` and `assignment` say which
/// decided speaker each part of each stream belongs to.
class RecognizerInterface {
 public:
  virtual ~RecognizerInterface() = default;
  virtual std::string Name() const = 0;
  virtual std::vector<TranscriptRecord> Recognize(
      const Matrix<double> &streams, const std::vector<SpeakerInterval> &decided,
      const StreamAssignment &assignment) = 0;
};

/// Ground-truth diarizer: posteriors are the reference activity (0/1) and
/// the frame embedding is the sum of one-hot indicators of the speakers
/// active in the frame, so averaging over solo frames gives exact one-hot
/// speaker embeddings. Dimension k belongs to session speaker k.
class OracleDiarizer : public DiarizerInterface {
 public:
  explicit OracleDiarizer(const Session &session, std::size_t embedding_dim = 256);
  std::string Name() const override { return "oracle"; }
  DiarizerOutput Diarize(const MultichannelAudio &mixture, const FrameGrid &grid) override;

 private:
  const Session &session_;
  std::size_t dim_;
};

/// Raised by the oracle separator on a frame embedding that is neither zero
/// nor one-hot.
class AmbiguousEmbedding : public Error {
 public:
  AmbiguousEmbedding(int stream, std::int64_t frame)
      : Error("stream " + std::to_string(stream) + " frame " +
              std::to_string(frame) + " is not a one-hot embedding"),
        stream_(stream), frame_(frame) {}
  int stream() const { return stream_; }
  std::int64_t frame() const { return frame_; }

 private:
  int stream_;
  std::int64_t frame_;
};

/// Ground-truth separator: sample n of stream s copies the session source
/// selected by the one-hot embedding of frame floor(n / hop), and is zero
/// where the embedding is zero.
class OracleSeparator : public SeparatorInterface {
 public:
  explicit OracleSeparator(const Session &session) : session_(session) {}
  std::string Name() const override { return "oracle"; }
  Matrix<double> Separate(const MultichannelAudio &segment,
                          const std::array<EmbeddingSequence, 2> &sequences,
                          const SegmentContext &context) override;

 private:
  const Session &session_;
};

/// Ground-truth recognizer: a reference utterance is transcribed only if it
/// lies inside one decided interval and that interval's stream equals the
/// utterance's source sample for sample over the utterance. Its words are
/// attributed to the decided speaker.
class OracleRecognizer : public RecognizerInterface {
 public:
  explicit OracleRecognizer(const Session &session) : session_(session) {}
  std::string Name() const override { return "oracle"; }
  std::vector<TranscriptRecord> Recognize(const Matrix<double> &streams,
                                          const std::vector<SpeakerInterval> &decided,
                                          const StreamAssignment &assignment) override;

 private:
  const Session &session_;
};

// External models run as subprocesses through a shell command. Files are
// exchanged in a fresh temporary directory:
//
//   diarizer:  <command> mixture.wav <outdir>
//              writes <outdir>/posteriors.mat and <outdir>/embeddings.mat
//   separator: <command> segment.wav seq0.mat seq1.mat streams.wav
//              writes a two-channel streams.wav of the segment's length
//
// Paths are passed as absolute, single-quoted arguments. A nonzero exit
// status or a missing or malformed output raises Error.

class ExternalDiarizer : public DiarizerInterface {
 public:
  explicit ExternalDiarizer(std::string command) : command_(std::move(command)) {}
  std::string Name() const override { return "external"; }
  DiarizerOutput Diarize(const MultichannelAudio &mixture, const FrameGrid &grid) override;

 private:
  std::string command_;
};

class ExternalSeparator : public SeparatorInterface {
 public:
  explicit ExternalSeparator(std::string command) : command_(std::move(command)) {}
  std::string Name() const override { return "external"; }
  Matrix<double> Separate(const MultichannelAudio &segment,
                          const std::array<EmbeddingSequence, 2> &sequences,
                          const SegmentContext &context) override;

 private:
  std::string command_;
};

/// Runs `command` through the shell; throws Error on a nonzero status.
void RunCommand(const std::string &command);

}  // namespace ssnd

#endif  // SSND_PIPELINE_MODELS_H_
