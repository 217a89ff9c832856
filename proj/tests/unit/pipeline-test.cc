// tests/unit/pipeline-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "ssnd/core/activity.h"
#include "ssnd/pipeline/pipeline.h"
#include "ssnd/simulate/session.h"
#include "ssnd/streams/embedding.h"

using namespace ssnd;

namespace {

UtterancePool Pool(std::uint64_t seed, int n_speakers = 8) {
  SyntheticPoolOptions o;
  o.n_speakers = n_speakers;
  o.seed = seed;
  return MakeSyntheticPool(o);
}

Session MakeSession(std::uint64_t seed, int n_speakers = 8, bool noisy = false) {
  SessionSpec spec;
  spec.n_speakers = n_speakers;
  spec.seed = seed;
  if (!noisy) spec.snr_range_db = {INFINITY, INFINITY};
  return GenerateSession(spec, Pool(seed + 1000, n_speakers), "s" + std::to_string(seed));
}

PipelineConfig Config() {
  PipelineConfig cfg;
  cfg.postprocess.frame_shift_ms = cfg.stft.shift_ms;
  return cfg;
}

// Shifts each reference boundary by a random whole number of frames in
// [-max_frames, max_frames], keeping utterances apart. Posteriors and
// embeddings follow the jittered intervals.
class JitterDiarizer : public DiarizerInterface {
 public:
  JitterDiarizer(const Session &session, int max_frames, std::uint64_t seed)
      : session_(session) {
    std::mt19937 rng(seed);
    for (auto iv : session.intervals) {
      iv.start_ms += 10 * (static_cast<int>(rng() % (2 * max_frames + 1)) - max_frames);
      iv.end_ms += 10 * (static_cast<int>(rng() % (2 * max_frames + 1)) - max_frames);
      iv.start_ms = std::max<Millis>(0, iv.start_ms);
      jittered_.push_back(iv);
    }
  }
  std::string Name() const override { return "jitter"; }
  DiarizerOutput Diarize(const MultichannelAudio &, const FrameGrid &grid) override {
    auto act = IntervalsToActivity(jittered_, grid, session_.speakers);
    DiarizerOutput out;
    out.posteriors.grid = grid;
    out.posteriors.speakers = session_.speakers;
    out.posteriors.values = Matrix<double>(act.n_frames(), act.n_speakers());
    out.embeddings = Matrix<double>(act.n_frames(), 16);
    for (std::size_t t = 0; t < act.n_frames(); ++t)
      for (std::size_t c = 0; c < act.n_speakers(); ++c)
        if (act.values(t, c)) out.posteriors.values(t, c) = out.embeddings(t, c) = 1.0;
    return out;
  }
  const std::vector<SpeakerInterval> &jittered() const { return jittered_; }

 private:
  const Session &session_;
  std::vector<SpeakerInterval> jittered_;
};

class ThrowingDiarizer : public DiarizerInterface {
 public:
  std::string Name() const override { return "throwing"; }
  DiarizerOutput Diarize(const MultichannelAudio &, const FrameGrid &) override {
    throw IoError("model file missing");
  }
};

std::string FakeModel() {
  return (std::filesystem::path(SSND_TEST_BINARY_DIR) / "fake-model").string();
}

}  // namespace

TEST_CASE("oracle diarizer embeddings") {
  auto s = MakeSession(3, 4);
  OracleDiarizer diar(s, 256);
  auto grid = FrameGrid::Covering(s.DurationMs(), 10);
  auto out = diar.Diarize(s.mixture, grid);
  REQUIRE(out.embeddings.cols() == 256);
  auto act = IntervalsToActivity(s.intervals, grid, s.speakers);
  bool saw_overlap = false;
  for (std::size_t t = 0; t < act.n_frames(); ++t) {
    int active = 0;
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(out.embeddings(t, c) == act.values(t, c));
      CHECK(out.posteriors.values(t, c) == act.values(t, c));
      active += act.values(t, c);
    }
    saw_overlap = saw_overlap || active == 2;
  }
  CHECK(saw_overlap);
  // Averaging over solo frames recovers exact one-hot vectors.
  for (std::size_t c = 0; c < 4; ++c) {
    auto e = ExtractEmbedding(out.embeddings, act, c);
    for (std::size_t k = 0; k < 256; ++k) REQUIRE(e.vector[k] == (k == c ? 1.0 : 0.0));
  }
  CHECK_THROWS_AS(OracleDiarizer(s, 3), InvalidArgument);
}

TEST_CASE("oracle separator") {
  auto s = MakeSession(4, 3);
  OracleSeparator sep(s);
  std::array<EmbeddingSequence, 2> seq;
  for (auto &q : seq) {
    q.grid = FrameGrid(10, 10, 4);
    q.values = Matrix<double>(4, 8);
  }
  seq[0].values(0, 1) = 1.0;  // speaker 1 on stream 0 in frame 0
  seq[1].values(0, 2) = 1.0;  // speaker 2 on stream 1 in frame 0
  seq[0].values(2, 0) = 1.0;
  MultichannelAudio seg;
  seg.samples = Matrix<double>(1, 640);
  auto out = sep.Separate(seg, seq, {1600, 100});
  for (std::size_t n = 0; n < 640; ++n) {
    const std::size_t t = n / 160;
    CHECK(out(0, n) == (t == 0 ? s.sources(1, 1600 + n) : t == 2 ? s.sources(0, 1600 + n) : 0.0));
    CHECK(out(1, n) == (t == 0 ? s.sources(2, 1600 + n) : 0.0));
  }
  seq[1].values(3, 0) = 0.5;
  try {
    sep.Separate(seg, seq, {1600, 100});
    FAIL("expected AmbiguousEmbedding");
  } catch (const AmbiguousEmbedding &e) {
    CHECK(e.stream() == 1);
    CHECK(e.frame() == 3);
  }
}

TEST_CASE("oracle pipeline is lossless") {
  for (std::uint64_t seed : {1, 2, 3, 5, 8}) {
    auto s = MakeSession(seed, 8, seed == 2);
    auto cfg = Config();
    cfg.segment_size_ms = seed % 2 ? 30000 : 5000;
    cfg.segment_shift_ms = seed % 2 ? 27000 : 4000;
    auto r = RunPipeline(cfg, s);
    INFO("seed " << seed);
    CHECK(r.der.der == 0.0);
    REQUIRE(r.cpwer);
    CHECK(r.cpwer->cpwer == 0.0);
    CHECK(r.cpwer->report.n_ref_words > 0);
    CHECK(r.max_abs_error == 0.0);
    CHECK(r.sum_max_abs_error == 0.0);
    CHECK(r.plan.windows.size() > 1);
    CHECK(r.embeddings.size() == 8);
    // Stage order and attribution.
    std::vector<std::string> stages;
    for (const auto &t : r.timing) stages.push_back(t.stage);
    CHECK(stages == std::vector<std::string>{"diarize", "postprocess", "embed", "assign",
                                             "sequences", "plan", "separate", "score",
                                             "targets"});
  }
}

TEST_CASE("empty session gives empty outputs") {
  Session s;
  s.id = "empty";
  s.mixture.samples = Matrix<double>(7, 16000);
  s.sources = Matrix<double>(0, 16000);
  auto r = RunPipeline(Config(), s);
  CHECK(r.decided.empty());
  CHECK(r.assignment.entries.empty());
  CHECK(r.der.der == 0.0);
  CHECK(!r.cpwer);
  for (double v : r.streams.data()) CHECK(v == 0.0);
  CHECK(r.max_abs_error == 0.0);
}

TEST_CASE("jittered diarization costs the injected error") {
  for (std::uint64_t seed : {11, 12, 13}) {
    auto s = MakeSession(seed, 6);
    JitterDiarizer diar(s, 3, seed);
    OracleSeparator sep(s);
    OracleRecognizer rec(s);
    auto r = RunPipeline(Config(), s, {&diar, &sep, &rec});
    // Injected error: speaker time where the jittered and reference
    // activity differ, counted millisecond by millisecond.
    Millis end = 0;
    for (const auto &iv : s.intervals) end = std::max(end, iv.end_ms + 100);
    double wrong = 0.0, total = 0.0;
    for (const auto &spk : s.speakers)
      for (Millis t = 0; t < end; ++t) {
        bool a = false, b = false;
        for (const auto &iv : s.intervals)
          a = a || (iv.speaker == spk && iv.start_ms <= t && t < iv.end_ms);
        for (const auto &iv : diar.jittered())
          b = b || (iv.speaker == spk && iv.start_ms <= t && t < iv.end_ms);
        wrong += a != b;
        total += a;
      }
    INFO("seed " << seed);
    CHECK(std::abs(r.der.der - wrong / total) <= 10.0 / total);
    CHECK(r.der.confusion == 0.0);
    CHECK(r.der.der > 0.0);
  }
}

TEST_CASE("errors are attributed to their stage") {
  auto s = MakeSession(21, 4);
  OracleSeparator sep(s);
  ThrowingDiarizer bad;
  try {
    RunPipeline(Config(), s, {&bad, &sep, nullptr});
    FAIL("expected PipelineError");
  } catch (const PipelineError &e) {
    CHECK(e.stage() == "diarize");
    CHECK(std::string(e.what()).find("model file missing") != std::string::npos);
  }

  // Three simultaneous speakers break the assignment stage.
  Session three = s;
  three.intervals = {{three.speakers[0], 0, 2000}, {three.speakers[1], 1000, 3000},
                     {three.speakers[2], 1500, 4000}, {three.speakers[1], 5000, 6000}};
  OracleDiarizer d3(three, 16);
  try {
    RunPipeline(Config(), three, {&d3, &sep, nullptr});
    FAIL("expected PipelineError");
  } catch (const PipelineError &e) {
    CHECK(e.stage() == "assign");
  }

  // Noisy embeddings cannot change intervals or streams assignment; the
  // oracle separator then rejects them in its own stage.
  class NoisyEmbeddings : public DiarizerInterface {
   public:
    explicit NoisyEmbeddings(const Session &s) : inner_(s, 16) {}
    std::string Name() const override { return "noisy"; }
    DiarizerOutput Diarize(const MultichannelAudio &m, const FrameGrid &g) override {
      auto out = inner_.Diarize(m, g);
      std::mt19937 rng(5);
      std::normal_distribution<double> n(0.0, 0.1);
      for (double &v : out.embeddings.data()) v += n(rng);
      return out;
    }

   private:
    OracleDiarizer inner_;
  } noisy(s);
  OracleDiarizer clean(s, 16);
  auto ref = RunPipeline(Config(), s, {&clean, &sep, nullptr});
  try {
    RunPipeline(Config(), s, {&noisy, &sep, nullptr});
    FAIL("expected PipelineError");
  } catch (const PipelineError &e) {
    CHECK(e.stage() == "separate");
  }
  class Capture : public SeparatorInterface {
   public:
    std::string Name() const override { return "zeros"; }
    Matrix<double> Separate(const MultichannelAudio &seg, const std::array<EmbeddingSequence, 2> &,
                            const SegmentContext &) override {
      return Matrix<double>(2, seg.n_samples());
    }
  } zeros;
  auto r = RunPipeline(Config(), s, {&noisy, &zeros, nullptr});
  CHECK(r.decided == ref.decided);
  CHECK(r.assignment.stream == ref.assignment.stream);
  CHECK(r.der.der == 0.0);
}

TEST_CASE("report json") {
  auto s = MakeSession(31, 3);
  auto r = RunPipeline(Config(), s);
  auto a = ReportJson(r), b = ReportJson(RunPipeline(Config(), s));
  CHECK(a == b);
  CHECK(a.find("timing_ms") == std::string::npos);
  CHECK(ReportJson(r, true).find("timing_ms") != std::string::npos);
  CHECK(a.find("\"der\"") != std::string::npos);
  CHECK(a.find("\"assignment\"") != std::string::npos);
}

TEST_CASE("config parsing") {
  auto cfg = ParseConfig(R"({"segment": {"size_s": 5, "shift_s": 4},
                             "postprocess": {"threshold": 0.4, "median_len": 11},
                             "embedding_fallback": true, "seed": 9})");
  CHECK(cfg.segment_size_ms == 5000);
  CHECK(cfg.segment_shift_ms == 4000);
  CHECK(cfg.postprocess.threshold == 0.4);
  CHECK(cfg.postprocess.median_len == 11);
  CHECK(cfg.fallback == EmbeddingFallback::kAllActiveFrames);
  CHECK(cfg.seed == 9);
  CHECK(cfg.diarizer == "oracle");

  auto back = ParseConfig(ConfigToJson(cfg));
  CHECK(ConfigToJson(back) == ConfigToJson(cfg));

  CHECK_THROWS_AS(ParseConfig(R"({"bogus": 1})"), ParseError);
  CHECK_THROWS_AS(ParseConfig(R"({"segment": {"size_s": 3, "shift_s": 4}})"), InvalidArgument);
  CHECK_THROWS_AS(ParseConfig(R"({"segment": {"size_s": 5.005, "shift_s": 4}})"), InvalidArgument);
  CHECK_THROWS_AS(ParseConfig(R"({"diarizer": "external"})"), InvalidArgument);
  CHECK_THROWS_AS(ParseConfig(R"({"postprocess": {"median_len": 4}})"), InvalidArgument);
  CHECK_THROWS_AS(ParseConfig("{not json"), ParseError);

  auto path = std::filesystem::temp_directory_path() / "ssnd-config-test.json";
  {
    std::ofstream os(path);
    os << R"({"seed": 42})";
  }
  setenv(kConfigEnvVar, path.c_str(), 1);
  CHECK(ResolveConfig().seed == 42);
  unsetenv(kConfigEnvVar);
  CHECK(ResolveConfig().seed == 0);
  CHECK_THROWS_AS(LoadConfig("/nonexistent/ssnd.json"), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("external model adapters") {
  auto s = MakeSession(41, 3);
  auto dir = std::filesystem::temp_directory_path() / "ssnd-external-test";
  std::filesystem::create_directories(dir);
  WriteRttm(s.intervals, (dir / "ref.rttm").string(), s.id);

  auto cfg = Config();
  cfg.diarizer = "external";
  std::string order;
  for (const auto &spk : s.speakers) order += (order.empty() ? "" : ",") + spk;
  cfg.diarizer_command =
      FakeModel() + " diarize '" + (dir / "ref.rttm").string() + "' 16 " + order;
  auto r = RunPipeline(cfg, s);
  CHECK(r.der.der == 0.0);
  // Hypothesis labels come from the model ("spk<c>"); cpWER maps them.
  REQUIRE(r.cpwer);
  CHECK(r.cpwer->cpwer == 0.0);
  CHECK(r.max_abs_error == 0.0);

  cfg.separator = "external";
  cfg.separator_command = FakeModel() + " separate";
  auto r2 = RunPipeline(cfg, s);
  // Stream 0 carries the float32-rounded reference mixture where active.
  double err = 0.0;
  std::size_t active = 0;
  for (std::size_t n = 0; n < r2.streams.cols(); ++n) {
    CHECK(r2.streams(1, n) == 0.0);
    if (r2.streams(0, n) != 0.0) {
      ++active;
      err = std::max(err, std::abs(r2.streams(0, n) - s.mixture.samples(0, n)));
    }
  }
  CHECK(active > 0);
  CHECK(err < 1e-6);

  cfg.separator_command = FakeModel() + " bad-separate";
  try {
    RunPipeline(cfg, s);
    FAIL("expected PipelineError");
  } catch (const PipelineError &e) {
    CHECK(e.stage() == "separate");
  }
  cfg.separator_command = "false";
  CHECK_THROWS_AS(RunPipeline(cfg, s), PipelineError);
  std::filesystem::remove_all(dir);
}
