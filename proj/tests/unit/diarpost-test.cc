// tests/unit/diarpost-test.cc

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

#include <random>
#include <sstream>

#include "ssnd/core/activity.h"
#include "ssnd/diarpost/postprocess.h"
#include "test-util.h"

using namespace ssnd;

namespace {

// Direct windowed majority: counts the window element by element.
int OracleMajority(const std::vector<int> &col, int t, int len) {
  const int T = static_cast<int>(col.size());
  int r = std::min({len / 2, t, T - 1 - t});
  int ones = 0;
  for (int k = t - r; k <= t + r; ++k) ones += col[k];
  return ones > r ? 1 : 0;  // more than half of 2r+1
}

}  // namespace

TEST_CASE("threshold is inclusive") {
  auto p = testutil::MakePosterior({{0.6, 0.5}, {0.49, 0.0}});
  auto y = Threshold(p, 0.5);
  CHECK(y.values(0, 0) == 1);
  CHECK(y.values(0, 1) == 1);
  CHECK(y.values(1, 0) == 0);
  CHECK(y.values(1, 1) == 0);
  CHECK(y.speakers == std::vector<std::string>{"spk0", "spk1"});
}

TEST_CASE("threshold is monotone in tau") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> rows(40, std::vector<double>(3));
    for (auto &r : rows)
      for (auto &v : r) v = u(rng);
    auto p = testutil::MakePosterior(rows);
    double t1 = u(rng), t2 = u(rng);
    if (t1 > t2) std::swap(t1, t2);
    auto lo = Threshold(p, t1), hi = Threshold(p, t2);
    for (std::size_t k = 0; k < lo.values.data().size(); ++k)
      CHECK(lo.values.data()[k] >= hi.values.data()[k]);
  }
}

TEST_CASE("median filter basics") {
  std::vector<std::vector<int>> rows(61, std::vector<int>{0, 1});
  rows[30][0] = 1;
  auto y = testutil::MakeActivity(rows, {});
  auto f = MedianFilter(y, 31);
  for (int t = 0; t < 61; ++t) {
    CHECK(f.values(t, 0) == 0);
    CHECK(f.values(t, 1) == 1);
  }
  CHECK_THROWS_AS(MedianFilter(y, 30), InvalidArgument);
  CHECK_THROWS_AS(MedianFilter(y, 0), InvalidArgument);
  CHECK(MedianFilter(y, 1).values == y.values);
}

TEST_CASE("median filter matches windowed majority oracle") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int T = 1 + rng() % 80;
    const int len = 1 + 2 * (rng() % 20);
    std::vector<std::vector<int>> rows(T, std::vector<int>(2));
    for (auto &r : rows)
      for (auto &v : r) v = rng() % 2;
    auto f = MedianFilter(testutil::MakeActivity(rows, {}), len);
    for (int c = 0; c < 2; ++c) {
      std::vector<int> col(T);
      for (int t = 0; t < T; ++t) col[t] = rows[t][c];
      for (int t = 0; t < T; ++t) CHECK(f.values(t, c) == OracleMajority(col, t, len));
    }
  }
}

TEST_CASE("median filter keeps long runs and is idempotent on them") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<int>> rows;
    int v = rng() % 2;
    while (rows.size() < 300) {
      int run = 16 + rng() % 40;
      for (int k = 0; k < run; ++k) rows.push_back({v});
      v = 1 - v;
    }
    auto y = testutil::MakeActivity(rows, {});
    auto f = MedianFilter(y, 31);
    CHECK(f.values == y.values);
    CHECK(MedianFilter(f, 31).values == f.values);
  }
}

TEST_CASE("decide") {
  // One clean utterance on frames [20, 80).
  std::vector<std::vector<double>> rows(100, std::vector<double>{0.0});
  for (int t = 20; t < 80; ++t) rows[t][0] = 1.0;
  PostProcessConfig cfg;
  auto p = testutil::MakePosterior(rows);
  p.speakers = {"A"};
  auto iv = Decide(p, cfg);
  REQUIRE(iv.size() == 1);
  CHECK(iv[0] == SpeakerInterval{"A", 200, 800});

  // A five-frame dropout is healed.
  for (int t = 40; t < 45; ++t) p.values(t, 0) = 0.1;
  iv = Decide(p, cfg);
  REQUIRE(iv.size() == 1);
  CHECK(iv[0] == SpeakerInterval{"A", 200, 800});
  cfg.median_len = 1;
  CHECK(Decide(p, cfg).size() == 2);

  auto zeros = testutil::MakePosterior(std::vector<std::vector<double>>(50, {0.0, 0.0}));
  CHECK(Decide(zeros, PostProcessConfig{}).empty());

  cfg.frame_shift_ms = 30;
  CHECK_THROWS_AS(Decide(p, cfg), InvalidArgument);
  cfg.frame_shift_ms = 0;
  cfg.threshold = 1.0;
  CHECK_THROWS_AS(Decide(p, cfg), InvalidArgument);
}

TEST_CASE("decide never emits overlapping same-speaker intervals") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> rows(200, std::vector<double>(3));
    for (auto &r : rows)
      for (auto &v : r) v = u(rng);
    PostProcessConfig cfg;
    cfg.median_len = 1 + 2 * (rng() % 5);
    auto iv = Decide(testutil::MakePosterior(rows), cfg);
    for (std::size_t a = 0; a < iv.size(); ++a)
      for (std::size_t b = a + 1; b < iv.size(); ++b)
        if (iv[a].speaker == iv[b].speaker)
          CHECK((iv[a].end_ms <= iv[b].start_ms || iv[b].end_ms <= iv[a].start_ms));
  }
}

TEST_CASE("tuning sweep") {
  std::vector<SpeakerInterval> ref = {{"A", 0, 3000}, {"B", 1800, 6000}};
  std::vector<PosteriorMatrix> perfect;
  for (Millis shift : {30, 40, 50}) {
    FrameGrid grid = FrameGrid::Covering(6000, shift);
    auto act = IntervalsToActivity(ref, grid, {"A", "B"});
    PosteriorMatrix p;
    p.grid = grid;
    p.values = Matrix<double>(act.n_frames(), 2);
    for (std::size_t k = 0; k < p.values.data().size(); ++k)
      p.values.data()[k] = act.values.data()[k];
    perfect.push_back(p);
  }
  auto rows = TuningSweep(perfect, ref, {0.3, 0.5}, 31);
  REQUIRE(rows.size() == 6);
  for (const auto &r : rows) CHECK(r.der.der == 0.0);
  CHECK(rows[2].shift_ms == 40);
  CHECK(rows[3].tau == 0.5);

  std::ostringstream os;
  WriteSweepCsv(rows, os);
  CHECK(os.str().rfind("shift_ms,tau,der,mi,fa,cf\n30,0.300,0.000000", 0) == 0);
}
