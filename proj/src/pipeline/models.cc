// src/pipeline/models.cc

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

#include "ssnd/pipeline/models.h"

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "ssnd/core/activity.h"

namespace ssnd {

namespace fs = std::filesystem;

OracleDiarizer::OracleDiarizer(const Session &session, std::size_t embedding_dim)
    : session_(session), dim_(embedding_dim) {
  if (dim_ < session.speakers.size())
    throw InvalidArgument("embedding dimension " + std::to_string(dim_) +
                          " is smaller than the speaker count " +
                          std::to_string(session.speakers.size()));
}

DiarizerOutput OracleDiarizer::Diarize(const MultichannelAudio &, const FrameGrid &grid) {
  auto act = IntervalsToActivity(session_.intervals, grid, session_.speakers);
  DiarizerOutput out;
  out.posteriors.grid = grid;
  out.posteriors.speakers = session_.speakers;
  out.posteriors.values = Matrix<double>(act.n_frames(), act.n_speakers());
  out.embeddings = Matrix<double>(act.n_frames(), dim_);
  for (std::size_t t = 0; t < act.n_frames(); ++t)
    for (std::size_t c = 0; c < act.n_speakers(); ++c)
      if (act.values(t, c)) {
        out.posteriors.values(t, c) = 1.0;
        out.embeddings(t, c) += 1.0;
      }
  return out;
}

Matrix<double> OracleSeparator::Separate(const MultichannelAudio &segment,
                                         const std::array<EmbeddingSequence, 2> &sequences,
                                         const SegmentContext &context) {
  const std::size_t len = segment.n_samples();
  const auto &src = session_.sources;
  if (context.offset_samples + len > src.cols())
    throw InvalidArgument("segment extends past the session sources");
  Matrix<double> out(2, len);
  for (int s = 0; s < 2; ++s) {
    const auto &seq = sequences[s];
    const Millis shift = seq.grid.shift_ms();
    if (shift * segment.sample_rate % 1000 != 0)
      throw InvalidArgument("frame shift is not a whole number of samples");
    const std::size_t hop = static_cast<std::size_t>(shift * segment.sample_rate / 1000);
    std::vector<long> who(seq.values.rows(), -1);
    for (std::size_t t = 0; t < who.size(); ++t) {
      auto row = seq.values.Row(t);
      int nonzero = 0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] == 0.0) continue;
        if (row[k] != 1.0 || ++nonzero > 1 || k >= src.rows())
          throw AmbiguousEmbedding(s, static_cast<std::int64_t>(t));
        who[t] = static_cast<long>(k);
      }
    }
    for (std::size_t n = 0; n < len; ++n) {
      const std::size_t t = n / hop;
      if (t < who.size() && who[t] >= 0)
        out(s, n) = src(static_cast<std::size_t>(who[t]), context.offset_samples + n);
    }
  }
  return out;
}

std::vector<TranscriptRecord> OracleRecognizer::Recognize(
    const Matrix<double> &streams, const std::vector<SpeakerInterval> &decided,
    const StreamAssignment &assignment) {
  const int sr = session_.mixture.sample_rate;
  const std::size_t N = streams.cols();
  std::vector<TranscriptRecord> out;
  for (const auto &u : session_.transcripts) {
    const std::size_t k = session_.SpeakerIndex(u.speaker);
    const std::size_t n0 = std::min<std::size_t>(N, u.start_ms * sr / 1000);
    const std::size_t n1 = std::min<std::size_t>(N, u.end_ms * sr / 1000);
    for (std::size_t i = 0; i < decided.size(); ++i) {
      if (decided[i].start_ms > u.start_ms || decided[i].end_ms < u.end_ms) continue;
      const auto s = static_cast<std::size_t>(assignment.stream[i]);
      bool exact = true;
      for (std::size_t n = n0; n < n1 && exact; ++n)
        exact = streams(s, n) == session_.sources(k, n);
      if (!exact) continue;
      out.push_back({u.session, decided[i].speaker, u.start_ms, u.end_ms, u.text});
      break;
    }
  }
  return out;
}

namespace {

std::string Quote(const std::string &s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Temporary directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "ssnd-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw IoError("cannot create a temporary directory");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string &name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

}  // namespace

void RunCommand(const std::string &command) {
  int status = std::system(command.c_str());
  if (status == -1) throw Error("cannot run: " + command);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw Error("command failed (status " +
                std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) +
                "): " + command);
}

DiarizerOutput ExternalDiarizer::Diarize(const MultichannelAudio &mixture,
                                         const FrameGrid &grid) {
  ScratchDir dir;
  WriteWav(mixture, dir / "mixture.wav");
  RunCommand(command_ + " " + Quote(dir / "mixture.wav") + " " + Quote(dir.str()));
  auto post = ReadMatrixFile(dir / "posteriors.mat");
  auto emb = ReadMatrixFile(dir / "embeddings.mat");
  const auto T = static_cast<std::size_t>(grid.n_frames());
  if (post.values.rows() != T || emb.values.rows() != T)
    throw ShapeMismatch("external diarizer returned " + std::to_string(post.values.rows()) +
                        " posterior and " + std::to_string(emb.values.rows()) +
                        " embedding frames, expected " + std::to_string(T));
  if (post.shift_ms != 0 && post.shift_ms != grid.shift_ms())
    throw ShapeMismatch("external diarizer used a " + std::to_string(post.shift_ms) +
                        " ms frame shift, expected " + std::to_string(grid.shift_ms()));
  DiarizerOutput out;
  out.posteriors.grid = grid;
  out.posteriors.values = std::move(post.values);
  out.embeddings = std::move(emb.values);
  return out;
}

Matrix<double> ExternalSeparator::Separate(const MultichannelAudio &segment,
                                           const std::array<EmbeddingSequence, 2> &sequences,
                                           const SegmentContext &) {
  ScratchDir dir;
  WriteWav(segment, dir / "segment.wav");
  for (int s = 0; s < 2; ++s) {
    MatrixFile f{MatrixKind::kEmbedding, sequences[s].grid.shift_ms(),
                 sequences[s].grid.window_ms(), sequences[s].values};
    WriteMatrixFile(f, dir / ("seq" + std::to_string(s) + ".mat"));
  }
  RunCommand(command_ + " " + Quote(dir / "segment.wav") + " " + Quote(dir / "seq0.mat") +
             " " + Quote(dir / "seq1.mat") + " " + Quote(dir / "streams.wav"));
  auto streams = ReadWav(dir / "streams.wav");
  if (streams.n_channels() != 2 || streams.n_samples() != segment.n_samples())
    throw ShapeMismatch("external separator must return 2 x " +
                        std::to_string(segment.n_samples()) + " samples, got " +
                        std::to_string(streams.n_channels()) + " x " +
                        std::to_string(streams.n_samples()));
  return std::move(streams.samples);
}

}  // namespace ssnd
