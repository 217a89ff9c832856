// src/streams/assign.cc

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

#include "ssnd/streams/assign.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ssnd {

StreamAssignment AssignStreams(const std::vector<SpeakerInterval> &intervals) {
  for (const auto &iv : intervals) ValidateInterval(iv);
  std::vector<std::size_t> order(intervals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &x = intervals[a], &y = intervals[b];
    if (x.start_ms != y.start_ms) return x.start_ms < y.start_ms;
    if (x.duration_ms() != y.duration_ms()) return x.duration_ms() > y.duration_ms();
    if (x.speaker != y.speaker) return x.speaker < y.speaker;
    return a < b;
  });

  StreamAssignment out;
  out.stream.assign(intervals.size(), -1);
  // Last interval placed on each stream; it is also the one that ends last
  // there, since a stream's intervals never overlap.
  std::array<long, 2> last = {-1, -1};
  for (std::size_t i : order) {
    const auto &iv = intervals[i];
    bool free[2];
    for (int s = 0; s < 2; ++s)
      free[s] = last[s] < 0 || intervals[last[s]].end_ms <= iv.start_ms;
    int stream;
    if (!free[0] && !free[1]) {
      throw ThreeWayOverlap(iv.start_ms);
    } else if (free[0] != free[1]) {
      stream = free[0] ? 0 : 1;
    } else if (last[0] < 0 && last[1] < 0) {
      stream = 0;
    } else {
      // The previously ended interval: latest end, then later onset, then
      // stream 0.
      int prev;
      if (last[0] < 0 || last[1] < 0) {
        prev = last[0] < 0 ? 1 : 0;
      } else {
        const auto &a = intervals[last[0]], &b = intervals[last[1]];
        if (a.end_ms != b.end_ms)
          prev = a.end_ms > b.end_ms ? 0 : 1;
        else if (a.start_ms != b.start_ms)
          prev = a.start_ms > b.start_ms ? 0 : 1;
        else
          prev = 0;
      }
      stream = intervals[last[prev]].speaker == iv.speaker ? prev : 1 - prev;
    }
    last[stream] = static_cast<long>(i);
    out.stream[i] = stream;
    out.entries.push_back({i, stream});
  }
  return out;
}

namespace {

void CheckAssignment(const std::vector<SpeakerInterval> &intervals,
                     const StreamAssignment &assignment) {
  if (assignment.stream.size() != intervals.size())
    throw ShapeMismatch("assignment covers " +
                        std::to_string(assignment.stream.size()) +
                        " intervals, expected " + std::to_string(intervals.size()));
  for (int s : assignment.stream)
    if (s != 0 && s != 1) throw InvalidArgument("stream index must be 0 or 1");
}

}  // namespace

std::array<EmbeddingSequence, 2> BuildEmbeddingSequences(
    const std::vector<SpeakerInterval> &intervals,
    const StreamAssignment &assignment,
    const std::vector<SpeakerEmbedding> &embeddings, const FrameGrid &grid) {
  CheckAssignment(intervals, assignment);
  std::size_t dim = embeddings.empty() ? 0 : embeddings[0].vector.size();
  for (const auto &e : embeddings)
    if (e.vector.size() != dim) throw ShapeMismatch("embedding sizes differ");
  const std::size_t T = static_cast<std::size_t>(grid.n_frames());
  std::array<EmbeddingSequence, 2> seq;
  for (auto &s : seq) {
    s.values = Matrix<double>(T, dim);
    s.grid = grid;
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto &iv = intervals[i];
    auto it = std::find_if(embeddings.begin(), embeddings.end(),
                           [&](const SpeakerEmbedding &e) { return e.speaker == iv.speaker; });
    if (it == embeddings.end())
      throw InvalidArgument("no embedding for speaker " + iv.speaker);
    auto &m = seq[assignment.stream[i]].values;
    for (std::size_t t = 0; t < T; ++t) {
      Millis c2 = grid.TwiceCenter(static_cast<std::int64_t>(t));
      if (c2 < 2 * iv.start_ms) continue;
      if (c2 >= 2 * iv.end_ms) break;
      std::copy(it->vector.begin(), it->vector.end(), m.Row(t).begin());
    }
  }
  return seq;
}

Matrix<double> BuildTargetStreams(const std::vector<SpeakerInterval> &intervals,
                                  const StreamAssignment &assignment,
                                  const Matrix<double> &sources,
                                  const std::vector<std::string> &speakers,
                                  int sample_rate) {
  CheckAssignment(intervals, assignment);
  if (sources.rows() != speakers.size())
    throw ShapeMismatch("sources have " + std::to_string(sources.rows()) +
                        " rows for " + std::to_string(speakers.size()) + " speakers");
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  const std::size_t N = sources.cols();
  Matrix<double> out(2, N);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto &iv = intervals[i];
    auto it = std::find(speakers.begin(), speakers.end(), iv.speaker);
    if (it == speakers.end()) throw InvalidArgument("no source for speaker " + iv.speaker);
    auto src = sources.Row(static_cast<std::size_t>(it - speakers.begin()));
    auto dst = out.Row(static_cast<std::size_t>(assignment.stream[i]));
    auto n0 = std::min<std::size_t>(N, static_cast<std::size_t>(iv.start_ms * sample_rate / 1000));
    auto n1 = std::min<std::size_t>(N, static_cast<std::size_t>(iv.end_ms * sample_rate / 1000));
    std::copy(src.begin() + n0, src.begin() + n1, dst.begin() + n0);
  }
  return out;
}

Matrix<double> BuildTargetStreams(const std::vector<SpeakerInterval> &intervals,
                                  const Matrix<double> &sources,
                                  const std::vector<std::string> &speakers,
                                  int sample_rate) {
  return BuildTargetStreams(intervals, AssignStreams(intervals), sources, speakers,
                            sample_rate);
}

void WriteAssignment(const std::vector<SpeakerInterval> &intervals,
                     const StreamAssignment &assignment, std::ostream &os) {
  CheckAssignment(intervals, assignment);
  char buf[64];
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto &iv = intervals[i];
    std::snprintf(buf, sizeof(buf), " %.3f %.3f ", iv.start(), iv.end());
    os << i << ' ' << iv.speaker << buf << assignment.stream[i] << '\n';
  }
}

AssignmentDump ParseAssignment(std::istream &is, const std::string &source) {
  AssignmentDump dump;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::size_t id;
    std::string speaker, extra;
    double start, end;
    int stream;
    if (!(ls >> id >> speaker >> start >> end >> stream) || (ls >> extra))
      throw ParseError(source, lineno, "expected <id> <speaker> <start> <end> <stream>");
    if (id != dump.intervals.size())
      throw ParseError(source, lineno, "interval ids must be consecutive from 0");
    if (stream != 0 && stream != 1)
      throw ParseError(source, lineno, "stream must be 0 or 1");
    try {
      dump.intervals.push_back(SpeakerInterval::FromSeconds(speaker, start, end));
    } catch (const InvalidArgument &e) {
      throw ParseError(source, lineno, e.what());
    }
    dump.stream.push_back(stream);
  }
  return dump;
}

}  // namespace ssnd
