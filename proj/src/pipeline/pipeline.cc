// src/pipeline/pipeline.cc

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

#include "ssnd/pipeline/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "ssnd/core/activity.h"
#include "ssnd/diarpost/postprocess.h"

namespace ssnd {

namespace {

// Runs one stage, timing it and tagging any error with its name.
template <typename F>
auto Stage(const char *name, std::vector<StageTime> *timing, F &&f) {
  auto t0 = std::chrono::steady_clock::now();
  auto done = [&] {
    std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - t0;
    timing->push_back({name, d.count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      done();
    } else {
      auto r = f();
      done();
      return r;
    }
  } catch (const PipelineError &) {
    throw;
  } catch (const std::exception &e) {
    throw PipelineError(name, e.what());
  }
}

std::size_t ToSamples(Millis ms, int sample_rate, std::size_t limit) {
  return std::min<std::size_t>(limit, static_cast<std::size_t>(ms * sample_rate / 1000));
}

std::array<EmbeddingSequence, 2> SliceSequences(const std::array<EmbeddingSequence, 2> &seq,
                                                std::int64_t first, std::int64_t count) {
  std::array<EmbeddingSequence, 2> out;
  for (int s = 0; s < 2; ++s) {
    const auto &src = seq[s];
    out[s].grid = src.grid.WithFrames(count);
    out[s].values = Matrix<double>(static_cast<std::size_t>(count), src.values.cols());
    for (std::int64_t t = 0; t < count; ++t) {
      const std::int64_t u = first + t;
      if (u >= src.grid.n_frames()) break;
      auto from = src.values.Row(static_cast<std::size_t>(u));
      std::copy(from.begin(), from.end(), out[s].values.Row(static_cast<std::size_t>(t)).begin());
    }
  }
  return out;
}

}  // namespace

PipelineResult RunPipeline(const PipelineConfig &cfg, const Session &session,
                           const PipelineModels &models) {
  if (!models.diarizer || !models.separator)
    throw InvalidArgument("pipeline needs a diarizer and a separator");
  cfg.Validate();
  PipelineResult r;
  r.session = session.id;
  const auto &mix = session.mixture;
  const int sr = mix.sample_rate;
  const std::size_t N = mix.n_samples();
  const Millis duration_ms =
      static_cast<Millis>((static_cast<std::int64_t>(N) * 1000 + sr - 1) / sr);
  r.grid = FrameGrid::Covering(duration_ms, cfg.stft.shift_ms);

  auto diar = Stage("diarize", &r.timing, [&] {
    auto out = models.diarizer->Diarize(mix, r.grid);
    if (out.posteriors.grid.n_frames() != r.grid.n_frames() ||
        out.embeddings.rows() != static_cast<std::size_t>(r.grid.n_frames()))
      throw ShapeMismatch("diarizer output does not match the frame grid");
    return out;
  });
  r.decided = Stage("postprocess", &r.timing, [&] {
    PostProcessConfig pp = cfg.postprocess;
    pp.frame_shift_ms = cfg.stft.shift_ms;
    return Decide(diar.posteriors, pp);
  });
  r.embeddings = Stage("embed", &r.timing, [&] {
    auto act = IntervalsToActivity(r.decided, r.grid, SpeakersOf(r.decided));
    return ExtractEmbeddings(diar.embeddings, act, cfg.fallback);
  });
  r.assignment = Stage("assign", &r.timing, [&] { return AssignStreams(r.decided); });
  auto sequences = Stage("sequences", &r.timing, [&] {
    return BuildEmbeddingSequences(r.decided, r.assignment, r.embeddings, r.grid);
  });
  r.plan = Stage("plan", &r.timing, [&] {
    return PlanSegments(duration_ms, cfg.segment_size_ms, cfg.segment_shift_ms);
  });
  r.streams = Stage("separate", &r.timing, [&] {
    Matrix<double> streams(2, N);
    const Millis shift = cfg.stft.shift_ms;
    for (const auto &w : r.plan.windows) {
      const std::size_t s0 = ToSamples(w.start_ms, sr, N), s1 = ToSamples(w.end_ms, sr, N);
      MultichannelAudio seg;
      seg.sample_rate = sr;
      seg.geometry = mix.geometry;
      seg.reference = mix.reference;
      seg.samples = Matrix<double>(mix.n_channels(), s1 - s0);
      for (std::size_t m = 0; m < mix.n_channels(); ++m) {
        auto from = mix.Channel(m);
        std::copy(from.begin() + s0, from.begin() + s1, seg.Channel(m).begin());
      }
      auto seq = SliceSequences(sequences, w.start_ms / shift,
                                (w.end_ms - w.start_ms + shift - 1) / shift);
      auto out = models.separator->Separate(seg, seq, {s0, w.start_ms});
      if (out.rows() != 2 || out.cols() != s1 - s0)
        throw ShapeMismatch("separator output has the wrong shape");
      const std::size_t e0 = ToSamples(w.emit_start_ms, sr, N);
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t n = e0; n < s1; ++n) streams(s, n) = out(s, n - s0);
    }
    return streams;
  });
  Stage("score", &r.timing, [&] {
    r.der = ComputeDer(session.intervals, r.decided, cfg.der);
    if (!models.recognizer) return;
    r.hypothesis = models.recognizer->Recognize(r.streams, r.decided, r.assignment);
    auto ref = ConcatenateBySpeaker(session.transcripts);
    std::size_t words = 0;
    for (const auto &s : ref) words += s.words.size();
    if (words > 0) r.cpwer = ComputeCpwer(ref, ConcatenateBySpeaker(r.hypothesis));
  });
  Stage("targets", &r.timing, [&] {
    if (session.sources.cols() != N) return;
    // Decided speakers take the source of the reference speaker the DER
    // mapping pairs them with; unmatched ones have no source.
    const auto hyp_speakers = SpeakersOf(r.decided);
    Matrix<double> hyp_sources(hyp_speakers.size(), N);
    for (const auto &[ref, hyp] : r.der.mapping) {
      auto h = std::find(hyp_speakers.begin(), hyp_speakers.end(), hyp);
      if (h == hyp_speakers.end()) continue;
      auto from = session.sources.Row(session.SpeakerIndex(ref));
      std::copy(from.begin(), from.end(),
                hyp_sources.Row(static_cast<std::size_t>(h - hyp_speakers.begin())).begin());
    }
    r.targets = BuildTargetStreams(r.decided, r.assignment, hyp_sources, hyp_speakers, sr);
    for (std::size_t n = 0; n < N; ++n) {
      double sum = 0.0;
      for (std::size_t k = 0; k < session.sources.rows(); ++k) sum += session.sources(k, n);
      r.sum_max_abs_error = std::max(
          r.sum_max_abs_error, std::abs(r.streams(0, n) + r.streams(1, n) - sum));
      for (std::size_t s = 0; s < 2; ++s)
        r.max_abs_error =
            std::max(r.max_abs_error, std::abs(r.streams(s, n) - r.targets(s, n)));
    }
  });
  return r;
}

PipelineResult RunPipeline(const PipelineConfig &cfg, const Session &session) {
  std::unique_ptr<DiarizerInterface> diarizer;
  std::unique_ptr<SeparatorInterface> separator;
  std::unique_ptr<RecognizerInterface> recognizer;
  try {
    if (cfg.diarizer == "external")
      diarizer = std::make_unique<ExternalDiarizer>(cfg.diarizer_command);
    else
      diarizer = std::make_unique<OracleDiarizer>(session, cfg.embedding_dim);
    if (cfg.separator == "external")
      separator = std::make_unique<ExternalSeparator>(cfg.separator_command);
    else
      separator = std::make_unique<OracleSeparator>(session);
    if (cfg.recognizer == "oracle") recognizer = std::make_unique<OracleRecognizer>(session);
  } catch (const std::exception &e) {
    throw PipelineError("setup", e.what());
  }
  return RunPipeline(cfg, session, {diarizer.get(), separator.get(), recognizer.get()});
}

std::string ReportJson(const PipelineResult &r, bool with_timing) {
  using json = nlohmann::json;
  auto num = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
  };
  json j;
  j["session"] = r.session;
  j["frame_shift_ms"] = r.grid.shift_ms();
  j["n_frames"] = r.grid.n_frames();
  j["n_samples"] = r.streams.cols();
  j["der"] = {{"der", num(r.der.der)},
              {"missed", num(r.der.missed)},
              {"false_alarm", num(r.der.false_alarm)},
              {"confusion", num(r.der.confusion)},
              {"collar_s", r.der.collar_s},
              {"reference_s", r.der.reference_s},
              {"missed_s", r.der.missed_s},
              {"false_alarm_s", r.der.false_alarm_s},
              {"confusion_s", r.der.confusion_s}};
  if (r.cpwer) {
    const auto &w = r.cpwer->report;
    json mapping = json::array();
    for (const auto &[ref, hyp] : r.cpwer->mapping) mapping.push_back({ref, hyp});
    j["cpwer"] = {{"cpwer", num(r.cpwer->cpwer)},
                  {"substitutions", w.substitutions},
                  {"deletions", w.deletions},
                  {"insertions", w.insertions},
                  {"ref_words", w.n_ref_words},
                  {"mapping", mapping}};
  } else {
    j["cpwer"] = nullptr;
  }
  j["streams"] = {{"max_abs_error", r.max_abs_error},
                  {"sum_max_abs_error", r.sum_max_abs_error}};
  json ivs = json::array();
  for (std::size_t i = 0; i < r.decided.size(); ++i)
    ivs.push_back({{"id", i},
                   {"speaker", r.decided[i].speaker},
                   {"start", r.decided[i].start()},
                   {"end", r.decided[i].end()},
                   {"stream", r.assignment.stream[i]}});
  j["assignment"] = ivs;
  json emb = json::array();
  for (const auto &e : r.embeddings) emb.push_back({{"speaker", e.speaker}, {"n_frames", e.n_frames}});
  j["embeddings"] = emb;
  json segs = json::array();
  for (const auto &w : r.plan.windows)
    segs.push_back({{"start", MillisToSeconds(w.start_ms)},
                    {"end", MillisToSeconds(w.end_ms)},
                    {"emit_start", MillisToSeconds(w.emit_start_ms)}});
  j["segments"] = segs;
  if (with_timing) {
    json t = json::object();
    for (const auto &s : r.timing) t[s.stage] = s.ms;
    j["timing_ms"] = t;
  }
  return j.dump(2);
}

void WritePipelineArtifacts(const PipelineResult &r, const std::string &dir,
                            int sample_rate) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  MultichannelAudio streams;
  streams.samples = r.streams;
  streams.sample_rate = sample_rate;
  if (streams.n_samples() > 0) WriteWav(streams, (fs::path(dir) / "streams.wav").string());
  WriteRttm(r.decided, (fs::path(dir) / "hyp.rttm").string(), r.session);
  {
    std::ofstream os(fs::path(dir) / "assignment.txt");
    WriteAssignment(r.decided, r.assignment, os);
    if (!os) throw IoError("cannot write " + dir + "/assignment.txt");
  }
  WriteTranscripts(r.hypothesis, (fs::path(dir) / "hyp-transcripts.tsv").string());
  std::ofstream os(fs::path(dir) / "report.json");
  os << ReportJson(r, false) << '\n';
  if (!os) throw IoError("cannot write " + dir + "/report.json");
}

}  // namespace ssnd
