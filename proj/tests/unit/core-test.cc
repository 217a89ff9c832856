// tests/unit/core-test.cc

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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ssnd/core/activity.h"
#include "ssnd/core/io.h"

using namespace ssnd;

namespace {

std::string TempPath(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("ssnd-core-" + name))
      .string();
}

// Per-frame membership using floating-point frame centers.
bool CenterInside(const FrameGrid &g, std::int64_t t, const SpeakerInterval &iv) {
  double center = t * g.shift_ms() + g.window_ms() / 2.0;
  return center >= iv.start_ms && center < iv.end_ms;
}

}  // namespace

TEST_CASE("frame grid rejects bad parameters") {
  CHECK_THROWS_AS(FrameGrid(0, 10, 5), InvalidArgument);
  CHECK_THROWS_AS(FrameGrid(10, 5, 5), InvalidArgument);
  FrameGrid g = FrameGrid::Covering(1001, 10);
  CHECK(g.n_frames() == 101);
  CHECK(g.TwiceCenter(3) == 70);
}

TEST_CASE("interval from seconds rounds to milliseconds") {
  auto iv = SpeakerInterval::FromSeconds("a", 0.0004, 1.2346);
  CHECK(iv.start_ms == 0);
  CHECK(iv.end_ms == 1235);
  CHECK_THROWS_AS(SpeakerInterval::FromSeconds("a", 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SpeakerInterval::FromSeconds("a", -1.0, 1.0), InvalidArgument);
}

TEST_CASE("intervals to activity") {
  FrameGrid g(10, 10, 300);
  SUBCASE("one second is frames 0..99") {
    auto act = IntervalsToActivity({{"a", 0, 1000}}, g, {"a"});
    for (int t = 0; t < 300; ++t) CHECK(act.values(t, 0) == (t < 100 ? 1 : 0));
  }
  SUBCASE("empty list") {
    auto act = IntervalsToActivity({}, g, {"a", "b"});
    for (auto v : act.values.data()) CHECK(v == 0);
  }
  SUBCASE("abutting intervals give 200 contiguous frames") {
    std::vector<SpeakerInterval> ivs = {{"a", 0, 1000}, {"a", 1000, 2000}};
    auto act = IntervalsToActivity(ivs, g, {"a"});
    int count = 0;
    for (int t = 0; t < 300; ++t) {
      bool expect = CenterInside(g, t, ivs[0]) || CenterInside(g, t, ivs[1]);
      CHECK(act.values(t, 0) == expect);
      count += act.values(t, 0);
    }
    CHECK(count == 200);
    auto back = ActivityToIntervals(act);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == SpeakerInterval{"a", 0, 2000});
  }
  SUBCASE("unknown speaker") {
    CHECK_THROWS_AS(IntervalsToActivity({{"z", 0, 10}}, g, {"a"}),
                    InvalidArgument);
  }
}

TEST_CASE("rasterization matches the frame-center oracle on random input") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Millis shift = 5 + rng() % 46;
    Millis window = shift + rng() % (2 * shift);
    FrameGrid g(shift, window, 1 + rng() % 150);
    std::vector<SpeakerInterval> ivs;
    for (int i = 0; i < 6; ++i) {
      Millis a = rng() % 2000, len = 1 + rng() % 700;
      ivs.push_back({"s" + std::to_string(rng() % 3), a, a + len});
    }
    auto act = IntervalsToActivity(ivs, g, {"s0", "s1", "s2"});
    for (std::int64_t t = 0; t < g.n_frames(); ++t) {
      for (int c = 0; c < 3; ++c) {
        bool expect = false;
        for (const auto &iv : ivs)
          if (iv.speaker == "s" + std::to_string(c) && CenterInside(g, t, iv))
            expect = true;
        REQUIRE(act.values(t, c) == expect);
      }
    }
  }
}

TEST_CASE("activity to intervals") {
  FrameGrid g(10, 10, 20);
  ActivityMatrix act;
  act.grid = g;
  act.speakers = {"a"};
  act.values = Matrix<std::uint8_t>(20, 1, 0);
  CHECK(ActivityToIntervals(act).empty());
  for (int t = 5; t <= 9; ++t) act.values(t, 0) = 1;
  auto ivs = ActivityToIntervals(act);
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].start() == doctest::Approx(0.05));
  CHECK(ivs[0].end() == doctest::Approx(0.10));
}

TEST_CASE("activity round trip is exact on random matrices") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t T = 1 + rng() % 200, C = 1 + rng() % 8;
    Millis shift = 10 * (1 + rng() % 5);
    FrameGrid g(shift, shift + rng() % shift, T);
    ActivityMatrix act;
    act.grid = g;
    for (std::size_t c = 0; c < C; ++c) act.speakers.push_back("s" + std::to_string(c));
    act.values = Matrix<std::uint8_t>(T, C);
    for (auto &v : act.values.data()) v = (rng() % 3 == 0);
    auto again = IntervalsToActivity(ActivityToIntervals(act), g, act.speakers);
    REQUIRE(again.values == act.values);
  }
}

TEST_CASE("frame and second conversions are mutually inverse") {
  FrameGrid g(10, 10, 1000);
  for (std::int64_t t = 0; t < 1000; t += 7) {
    Millis ms = g.FrameStart(t);
    CHECK(g.FrameOf(ms) == t);
    CHECK(g.FrameOf(ms + 9) == t);
  }
}

TEST_CASE("merge speaker intervals") {
  auto merged = MergeSpeakerIntervals(
      {{"a", 0, 10}, {"a", 10, 20}, {"b", 5, 8}, {"a", 30, 40}, {"a", 35, 38}});
  REQUIRE(merged.size() == 3);
  CHECK(merged[0] == SpeakerInterval{"a", 0, 20});
  CHECK(merged[1] == SpeakerInterval{"b", 5, 8});
  CHECK(merged[2] == SpeakerInterval{"a", 30, 40});
}

TEST_CASE("rttm parsing") {
  std::istringstream is(
      ";; comment\n"
      "SPKR-INFO sess 1 <NA> <NA> <NA> unknown spkA <NA>\n"
      "SPEAKER sess 1 0.50 2.00 <NA> <NA> spkA <NA> <NA>\n\n");
  auto ivs = ParseRttm(is);
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].speaker == "spkA");
  CHECK(ivs[0].start_ms == 500);
  CHECK(ivs[0].end_ms == 2500);

  std::istringstream empty("");
  CHECK(ParseRttm(empty).empty());

  std::istringstream bad("SPEAKER sess 1 0.50 2.00 <NA> <NA> spkA\n"
                         "SPEAKER sess 1 x 2.00 <NA> <NA> spkA <NA> <NA>\n");
  try {
    ParseRttm(bad, "bad.rttm");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("rttm write/read round trip on random intervals") {
  std::mt19937 rng(3);
  std::vector<SpeakerInterval> ivs;
  for (int i = 0; i < 1000; ++i) {
    Millis a = rng() % 3600000;
    ivs.push_back({"spk" + std::to_string(rng() % 9), a, a + 1 + static_cast<Millis>(rng() % 20000)});
  }
  std::string path = TempPath("rt.rttm");
  WriteRttm(ivs, path);
  CHECK(ReadRttm(path) == ivs);
  std::remove(path.c_str());
}

TEST_CASE("wav io") {
  std::string path = TempPath("io.wav");
  SUBCASE("one mono sample") {
    MultichannelAudio a;
    a.samples = Matrix<double>(1, 1, 0.25);
    WriteWav(a, path);
    auto b = ReadWav(path);
    CHECK(b.samples == a.samples);
    CHECK(b.sample_rate == 16000);
  }
  SUBCASE("random seven-channel float buffer is bitwise identical") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    MultichannelAudio a;
    a.samples = Matrix<double>(7, 4001);
    for (auto &v : a.samples.data()) v = u(rng);
    WriteWav(a, path);
    CHECK(ReadWav(path).samples == a.samples);
  }
  SUBCASE("pcm16 quantizes to within half a step") {
    MultichannelAudio a;
    a.samples = Matrix<double>(2, 100);
    for (std::size_t n = 0; n < 100; ++n) {
      a.samples(0, n) = std::sin(0.1 * n) * 0.9;
      a.samples(1, n) = -0.5;
    }
    WriteWav(a, path, WavEncoding::kPcm16);
    auto b = ReadWav(path);
    for (std::size_t i = 0; i < a.samples.data().size(); ++i)
      CHECK(std::abs(b.samples.data()[i] - a.samples.data()[i]) <= 0.5 / 32768 + 1e-12);
  }
  SUBCASE("zero-length file is an error") {
    MultichannelAudio a;
    a.samples = Matrix<double>(1, 0);
    WriteWav(a, path);
    CHECK_THROWS_AS(ReadWav(path), IoError);
  }
  SUBCASE("unsupported encoding") {
    MultichannelAudio a;
    a.samples = Matrix<double>(1, 4, 0.1);
    WriteWav(a, path, WavEncoding::kPcm16);
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(34);
    std::uint16_t bits = 24;
    f.write(reinterpret_cast<const char *>(&bits), 2);
    f.close();
    CHECK_THROWS_AS(ReadWav(path), IoError);
  }
  std::remove(path.c_str());
}

TEST_CASE("transcript manifest round trip") {
  std::vector<TranscriptRecord> recs = {
      {"s1", "a", 0, 1500, "hello there world"},
      {"s1", "b", 1200, 3001, "general kenobi"}};
  std::string path = TempPath("tr.tsv");
  WriteTranscripts(recs, path);
  CHECK(ReadTranscripts(path) == recs);
  std::remove(path.c_str());

  std::istringstream bad("s1\ta\t0.0\n");
  CHECK_THROWS_AS(ParseTranscripts(bad, "x"), ParseError);
}

TEST_CASE("matrix file round trip") {
  MatrixFile f;
  f.kind = MatrixKind::kEmbedding;
  f.shift_ms = 10;
  f.window_ms = 10;
  f.values = Matrix<double>(3, 4);
  for (std::size_t i = 0; i < 12; ++i) f.values.data()[i] = i * 0.5 - 1.0;
  std::string path = TempPath("m.bin");
  WriteMatrixFile(f, path);
  auto g = ReadMatrixFile(path);
  CHECK(g.kind == MatrixKind::kEmbedding);
  CHECK(g.shift_ms == 10);
  CHECK(g.values == f.values);
  CHECK(std::filesystem::file_size(path) == 48 + 12 * 8);
  std::remove(path.c_str());
}

TEST_CASE("matrix file rejects malformed headers and payloads") {
  MatrixFile f;
  f.kind = MatrixKind::kPosterior;
  f.shift_ms = 10;
  f.window_ms = 25;
  f.values = Matrix<double>(2, 3);
  const std::string good = TempPath("good.mat");
  WriteMatrixFile(f, good);
  std::string bytes;
  {
    std::ifstream is(good, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(is), {});
  }
  auto corrupt = [&](std::size_t offset, char value, std::size_t size_delta, bool grow) {
    std::string b = bytes;
    if (offset < b.size()) b[offset] = value;
    if (grow) b.append(size_delta, '\0');
    else b.resize(b.size() - size_delta);
    const std::string path = TempPath("bad.mat");
    std::ofstream(path, std::ios::binary) << b;
    return path;
  };
  CHECK_NOTHROW(ReadMatrixFile(good));
  CHECK_THROWS_AS(ReadMatrixFile(corrupt(0, 'X', 0, true)), IoError);     // magic
  CHECK_THROWS_AS(ReadMatrixFile(corrupt(8, 9, 0, true)), IoError);       // kind
  CHECK_THROWS_AS(ReadMatrixFile(corrupt(12, 1, 0, true)), IoError);      // reserved
  CHECK_THROWS_AS(ReadMatrixFile(corrupt(39, '\xff', 0, true)), IoError); // shift < 0
  CHECK_THROWS_AS(ReadMatrixFile(corrupt(99, 0, 8, false)), IoError);     // short
  CHECK_THROWS_AS(ReadMatrixFile(corrupt(99, 0, 1, true)), IoError);      // trailing
  CHECK_THROWS_AS(ReadMatrixFile(corrupt(23, '\x7f', 0, true)), IoError); // huge rows
  std::remove(good.c_str());
}
