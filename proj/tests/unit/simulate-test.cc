// tests/unit/simulate-test.cc

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
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>

#include "ssnd/core/activity.h"
#include "ssnd/dsp/features.h"
#include "ssnd/dsp/stft.h"
#include "ssnd/simulate/acoustics.h"
#include "ssnd/simulate/session.h"

using namespace ssnd;

namespace {

UtterancePool SmallPool(int n_speakers = 8, int per_speaker = 2, double max_len = 4.0) {
  SyntheticPoolOptions o;
  o.n_speakers = n_speakers;
  o.utterances_per_speaker = per_speaker;
  o.min_len_s = 2.0;
  o.max_len_s = max_len;
  o.seed = 99;
  return MakeSyntheticPool(o);
}

// Sweep over every millisecond: independent of the event-based code.
double BruteOverlapRatio(const std::vector<SpeakerInterval> &iv) {
  Millis end = 0;
  for (const auto &x : iv) end = std::max(end, x.end_ms);
  long speech = 0, overlap = 0;
  for (Millis t = 0; t < end; ++t) {
    std::vector<std::string> active;
    for (const auto &x : iv)
      if (x.start_ms <= t && t < x.end_ms &&
          std::find(active.begin(), active.end(), x.speaker) == active.end())
        active.push_back(x.speaker);
    speech += !active.empty();
    overlap += active.size() >= 2;
  }
  return speech ? static_cast<double>(overlap) / speech : 0.0;
}

std::vector<double> DirectConvolution(const std::vector<double> &x,
                                      std::span<const double> h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < h.size(); ++k) y[i + k] += x[i] * h[k];
  return y;
}

}  // namespace

TEST_CASE("synthetic pool") {
  auto pool = SmallPool();
  REQUIRE(pool.speakers.size() == 8);
  for (const auto &spk : pool.speakers) {
    REQUIRE(spk.utterances.size() == 2);
    for (const auto &u : spk.utterances) {
      CHECK(u.samples.size() % 160 == 0);
      CHECK(u.samples.size() >= 32000);
      CHECK(u.samples.size() <= 64000);
      CHECK(!u.text.empty());
      for (double v : u.samples) REQUIRE(v != 0.0);
    }
  }
  auto again = SmallPool();
  CHECK(again.speakers[3].utterances[1].samples == pool.speakers[3].utterances[1].samples);
}

TEST_CASE("overlap ratio") {
  CHECK(OverlapRatio({}) == 0.0);
  CHECK(OverlapRatio({{"A", 0, 10}, {"B", 20, 30}}) == 0.0);
  CHECK(OverlapRatio({{"A", 0, 10}, {"B", 0, 10}}) == 1.0);
  CHECK(OverlapRatio({{"A", 0, 10000}, {"B", 5000, 15000}}) == doctest::Approx(1.0 / 3.0));
  std::mt19937 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SpeakerInterval> iv;
    for (int k = 0; k < 6; ++k) {
      Millis a = rng() % 200;
      iv.push_back({"s" + std::to_string(rng() % 3), a, a + 1 + Millis(rng() % 80)});
    }
    CHECK(OverlapRatio(iv) == doctest::Approx(BruteOverlapRatio(iv)).epsilon(1e-12));
  }
  CHECK(MaxConcurrency({{"A", 0, 10}, {"B", 10, 20}}) == 1);
  CHECK(MaxConcurrency({{"A", 0, 10}, {"B", 5, 20}, {"C", 9, 12}}) == 3);
}

TEST_CASE("azimuth sampling keeps the minimum separation") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + seed % 40;
    const double sep = seed % 2 ? 5.0 : 360.0 / n;
    auto az = SampleAzimuths(n, sep, seed);
    REQUIRE(static_cast<int>(az.size()) == n);
    for (int i = 0; i < n; ++i) {
      CHECK(az[i] >= 0.0);
      CHECK(az[i] < 360.0);
      for (int j = i + 1; j < n; ++j) {
        double d = std::abs(az[i] - az[j]);
        d = std::min(d, 360.0 - d);
        CHECK(d >= sep - 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(SampleAzimuths(73, 5.0, 1), InvalidArgument);
}

TEST_CASE("far-field delays") {
  auto geo = CircularArrayGeometry();
  for (double az : {0.0, 37.0, 90.0, 200.0}) {
    auto d = FarFieldDelays(az, geo, 0);
    CHECK(d[0] == 0.0);
    for (int m = 1; m <= 6; ++m) {
      double phi = 2.0 * std::numbers::pi * (m - 1) / 6.0;
      double closed = -(0.0425 / 343.0) * std::cos(az * std::numbers::pi / 180.0 - phi);
      CHECK(d[m] == doctest::Approx(closed).epsilon(1e-12));
    }
  }
  // Broadside to the pair of mics at 0 and 180 degrees.
  auto b = FarFieldDelays(90.0, geo, 0);
  CHECK(std::abs(b[1] - b[4]) < 1e-15);
}

TEST_CASE("spatialize") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> x(4000);
  for (auto &v : x) v = g(rng);

  std::vector<MicPosition> single = {{0.0, 0.0, 0.0}};
  auto id = Spatialize(x, 30.0, single);
  CHECK(std::vector<double>(id.Channel(0).begin(), id.Channel(0).end()) == x);

  // A mic exactly 3 samples of travel further from a source at azimuth 0.
  const double step = kSpeedOfSound / 16000.0;
  std::vector<MicPosition> line = {{0.0, 0.0, 0.0}, {-3.0 * step, 0.0, 0.0}};
  auto shifted = Spatialize(x, 0.0, line);
  double err = 0.0;
  for (std::size_t n = 3; n < x.size(); ++n)
    err = std::max(err, std::abs(shifted.samples(1, n) - x[n - 3]));
  CHECK(err < 1e-9);
}

TEST_CASE("spatialized tone has the analytic inter-channel phase") {
  // A tone on DFT bin 40 of a 512-point rectangular analysis, with smooth
  // edges so the band-limited delay is exact in the interior.
  const std::size_t N = 16000, ramp = 2000;
  const int k0 = 40;
  std::vector<double> x(N);
  for (std::size_t n = 0; n < N; ++n) {
    double env = 1.0;
    if (n < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * n / ramp);
    if (n >= N - ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * (N - 1 - n) / ramp);
    x[n] = env * std::cos(2.0 * std::numbers::pi * k0 * n / 512.0);
  }
  auto geo = CircularArrayGeometry();
  const double az = 37.0;
  auto audio = Spatialize(x, az, geo);
  StftConfig cfg{32, 10, 512, WindowKind::kRectangular};
  std::vector<Spectrogram> specs;
  for (std::size_t m = 0; m < geo.size(); ++m) specs.push_back(Stft(audio.Channel(m), cfg, m));
  auto ipd = Ipd(specs, 0);
  auto delays = FarFieldDelays(az, geo, 0);
  const std::size_t F = cfg.n_bins();
  double err = 0.0;
  for (std::size_t t = 30; t + 30 < ipd.values.rows(); ++t) {
    for (std::size_t j = 0; j + 1 < geo.size(); ++j) {
      double phase = 2.0 * std::numbers::pi * k0 * delays[j + 1] * 16000.0 / 512.0;
      err = std::max(err, std::abs(ipd.values(t, 2 * j * F + k0) - std::cos(phase)));
      err = std::max(err, std::abs(ipd.values(t, (2 * j + 1) * F + k0) - std::sin(phase)));
    }
  }
  CHECK(err <= 1e-4);
}

TEST_CASE("rir convolution") {
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> x(1000);
  for (auto &v : x) v = g(rng);

  MultichannelAudio impulse;
  impulse.samples = Matrix<double>(2, 5);
  impulse.samples(0, 0) = 1.0;
  impulse.samples(1, 3) = 1.0;
  auto y = Convolve(x, impulse, 2);
  REQUIRE(y.n_samples() == 1004);
  for (std::size_t n = 0; n < x.size(); ++n) {
    CHECK(y.samples(0, n) == doctest::Approx(x[n]).epsilon(1e-12));
    CHECK(y.samples(1, n + 3) == doctest::Approx(x[n]).epsilon(1e-12));
  }

  MultichannelAudio rir;
  rir.samples = Matrix<double>(3, 64);
  for (auto &v : rir.samples.data()) v = g(rng);
  auto z = Convolve(x, rir, 3);
  for (std::size_t m = 0; m < 3; ++m) {
    auto ref = DirectConvolution(x, rir.Channel(m));
    double err = 0.0;
    for (std::size_t n = 0; n < ref.size(); ++n) err = std::max(err, std::abs(ref[n] - z.samples(m, n)));
    CHECK(err < 1e-9);
  }
  CHECK_THROWS_AS(Convolve(x, rir, 7), ShapeMismatch);
  CHECK_THROWS_AS(Convolve(x, MultichannelAudio{}), InvalidArgument);

  auto dir = std::filesystem::temp_directory_path() / "ssnd-rir-test.wav";
  WriteWav(rir, dir.string());
  auto imported = ImportRirs({dir.string()});
  REQUIRE(imported.size() == 1);
  CHECK(imported[0].n_channels() == 3);
  std::filesystem::remove(dir);
}

TEST_CASE("add noise hits the requested snr") {
  MultichannelAudio mix;
  mix.geometry = CircularArrayGeometry();
  mix.samples = Matrix<double>(7, 8000);
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (auto &v : mix.samples.data()) v = 0.3 * g(rng);
  for (auto kind : {NoiseKind::kDiffuse, NoiseKind::kUncorrelated}) {
    for (double snr : {0.0, 10.0, 27.5}) {
      Matrix<double> noise;
      auto out = AddNoise(mix, snr, kind, 17, &noise);
      double measured = 10.0 * std::log10(MeanPower(mix.samples) / MeanPower(noise));
      CHECK(measured == doctest::Approx(snr).epsilon(1e-9));
      CHECK(std::abs(measured - snr) <= 0.1);
      for (std::size_t k = 0; k < 100; ++k)
        CHECK(out.samples.data()[k] == doctest::Approx(mix.samples.data()[k] + noise.data()[k]));
      auto again = AddNoise(mix, snr, kind, 17);
      CHECK(again.samples == out.samples);
    }
  }
  auto clean = AddNoise(mix, std::numeric_limits<double>::infinity(), NoiseKind::kDiffuse, 1);
  CHECK(clean.samples == mix.samples);
  MultichannelAudio silent = mix;
  silent.samples = Matrix<double>(7, 100);
  CHECK_THROWS_AS(AddNoise(silent, 10.0, NoiseKind::kDiffuse, 1), InvalidArgument);
  CHECK_THROWS_AS(AddNoise(mix, std::nan(""), NoiseKind::kDiffuse, 1), InvalidArgument);

  // Diffuse noise: the zero-lag correlation between two mics a distance d
  // apart approaches the band average of J0(2 pi f d / c) for an in-plane
  // isotropic field; white noise is uncorrelated.
  auto correlation = [](const Matrix<double> &x, std::size_t a, std::size_t b) {
    double c = 0.0, pa = 0.0, pb = 0.0;
    for (std::size_t n = 0; n < x.cols(); ++n) {
      c += x(a, n) * x(b, n);
      pa += x(a, n) * x(a, n);
      pb += x(b, n) * x(b, n);
    }
    return c / std::sqrt(pa * pb);
  };
  auto theory = [](double d) {
    const int steps = 4000;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
      double f = 8000.0 * (i + 0.5) / steps;
      acc += std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * f * d / kSpeedOfSound);
    }
    return acc / steps;
  };
  double diffuse_near = 0.0, diffuse_far = 0.0, white = 0.0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    auto d = MakeNoise(mix, NoiseKind::kDiffuse, seed);
    diffuse_near += correlation(d, 0, 1) / seeds;
    diffuse_far += correlation(d, 1, 4) / seeds;
    white += correlation(MakeNoise(mix, NoiseKind::kUncorrelated, seed), 0, 1) / seeds;
  }
  CHECK(std::abs(diffuse_near - theory(0.0425)) < 0.04);
  CHECK(std::abs(diffuse_far - theory(0.085)) < 0.04);
  CHECK(std::abs(white) < 0.02);
}

TEST_CASE("placement rule") {
  auto starts = PlaceUtterances({100, 100, 100}, {0, 30, 0}, {50, 0, 20});
  CHECK(starts == std::vector<Millis>{50, 120, 240});
  CHECK_THROWS_AS(PlaceUtterances({10}, {0}, {0, 0}), ShapeMismatch);
}

TEST_CASE("sequential session without overlap") {
  auto pool = SmallPool(4);
  SessionSpec spec;
  spec.n_speakers = 4;
  spec.overlap_range = {0.0, 0.0};
  spec.silence_prob = 1.0;
  spec.snr_range_db = {std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
  auto s = GenerateSession(spec, pool);
  CHECK(s.overlap_ratio == 0.0);
  CHECK(MaxConcurrency(s.intervals) == 1);
  for (std::size_t i = 1; i < s.intervals.size(); ++i)
    CHECK(s.intervals[i].start_ms - s.intervals[i - 1].end_ms >= 500);
}

TEST_CASE("generated sessions satisfy the recipe") {
  auto pool = SmallPool();
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    SessionSpec spec = seed % 2 ? SessionSpec::Separation() : SessionSpec::Diarization();
    spec.seed = seed;
    const bool noisy = seed % 4 == 0;
    if (!noisy)
      spec.snr_range_db = {std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};
    auto s = GenerateSession(spec, pool, "s" + std::to_string(seed));
    CAPTURE(seed);
    CHECK(s.overlap_ratio >= spec.overlap_range.first);
    CHECK(s.overlap_ratio <= spec.overlap_range.second);
    CHECK(s.overlap_ratio == doctest::Approx(BruteOverlapRatio(s.intervals)));
    CHECK(MaxConcurrency(s.intervals) <= 2);
    if (noisy) {
      CHECK(s.snr_db >= 10.0);
      CHECK(s.snr_db <= 30.0);
    }
    CHECK(s.intervals == PlanSessionIntervals(spec, pool));
    for (double l : s.levels_db) CHECK(std::abs(l) <= 3.5);
    for (std::size_t i = 0; i < s.azimuths.size(); ++i)
      for (std::size_t j = i + 1; j < s.azimuths.size(); ++j) {
        double d = std::abs(s.azimuths[i] - s.azimuths[j]);
        CHECK(std::min(d, 360.0 - d) >= 5.0 - 1e-9);
      }
    // Interval boundaries are on the 10 ms grid and mark exactly where each
    // source is nonzero.
    const std::size_t N = s.mixture.n_samples();
    for (std::size_t k = 0; k < s.speakers.size(); ++k) {
      std::vector<char> inside(N, 0);
      for (const auto &iv : s.intervals) {
        CHECK(iv.start_ms % 10 == 0);
        CHECK(iv.end_ms % 10 == 0);
        if (iv.speaker != s.speakers[k]) continue;
        for (Millis n = iv.start_ms * 16; n < iv.end_ms * 16; ++n) inside[n] = 1;
      }
      std::size_t bad = 0;
      for (std::size_t n = 0; n < N; ++n) bad += (s.sources(k, n) != 0.0) != inside[n];
      CHECK(bad == 0);
    }
    // The reference channel is the sum of sources plus noise.
    double err = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      double sum = s.noise(0, n);
      for (std::size_t k = 0; k < s.speakers.size(); ++k) sum += s.sources(k, n);
      err = std::max(err, std::abs(s.mixture.samples(0, n) - sum));
    }
    CHECK(err <= 1e-9);
    // Every utterance keeps single-talker speech.
    auto act = IntervalsToActivity(s.intervals, FrameGrid::Covering(s.DurationMs(), 10),
                                   s.speakers);
    for (std::size_t c = 0; c < act.n_speakers(); ++c) {
      std::size_t solo = 0;
      for (std::size_t t = 0; t < act.n_frames(); ++t) {
        int total = 0;
        for (std::size_t d = 0; d < act.n_speakers(); ++d) total += act.values(t, d);
        solo += act.values(t, c) && total == 1;
      }
      CHECK(solo >= 50);
    }
    CHECK(s.transcripts.size() == s.intervals.size());
  }
}

TEST_CASE("planned overlap stays in range over many seeds") {
  auto pool = SmallPool();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    SessionSpec spec = seed % 2 ? SessionSpec::Separation() : SessionSpec::Diarization();
    spec.seed = seed;
    auto iv = PlanSessionIntervals(spec, pool);
    double r = OverlapRatio(iv);
    CHECK(r >= spec.overlap_range.first);
    CHECK(r <= spec.overlap_range.second);
    CHECK(MaxConcurrency(iv) <= 2);
  }
}

TEST_CASE("session generation is deterministic") {
  auto pool = SmallPool();
  SessionSpec spec;
  spec.seed = 7;
  auto a = GenerateSession(spec, pool), b = GenerateSession(spec, pool);
  CHECK(a == b);
  spec.seed = 8;
  CHECK(!(GenerateSession(spec, pool) == a));
}

TEST_CASE("session generation errors") {
  auto pool = SmallPool(2, 1);
  SessionSpec spec;
  spec.n_speakers = 3;
  CHECK_THROWS_AS(GenerateSession(spec, pool), InvalidArgument);
  spec.n_speakers = 2;
  CHECK_THROWS_AS(GenerateSession(spec, pool), InvalidArgument);  // needs 2 each
  spec.min_utterances_per_speaker = spec.max_utterances_per_speaker = 1;
  spec.min_azimuth_sep_deg = 200.0;
  CHECK_THROWS_AS(GenerateSession(spec, pool), InvalidArgument);
  spec.min_azimuth_sep_deg = 5.0;
  spec.silence_prob = 1.5;
  CHECK_THROWS_AS(GenerateSession(spec, pool), InvalidArgument);
}

TEST_CASE("training segments") {
  auto pool = SmallPool(1, 1, 2.0);
  SessionSpec spec;
  spec.n_speakers = 1;
  spec.min_utterances_per_speaker = spec.max_utterances_per_speaker = 1;
  spec.tail_s = 8.0;  // 10 s session
  auto solo = GenerateSession(spec, pool);
  REQUIRE(solo.DurationMs() == 10000);
  auto segs = MakeTrainingSegments(solo, 5.0);
  CHECK(segs.segments.size() == 2);
  CHECK(segs.single_speaker_fraction == 1.0);

  auto big = GenerateSession(SessionSpec::Separation(), SmallPool());
  auto t = MakeTrainingSegments(big);
  CHECK(t.segments.size() == static_cast<std::size_t>(big.DurationMs() / 5000));
  std::vector<std::int64_t> recount(3, 0);
  for (const auto &seg : t.segments) {
    CHECK(seg.mixture.n_samples() == 80000);
    CHECK(seg.targets.rows() == seg.speakers.size());
    for (std::size_t f = 0; f < seg.speaker_count.size(); ++f) {
      Millis center = seg.start_ms + 10 * static_cast<Millis>(f) + 5;
      int count = 0;
      for (const auto &iv : big.intervals) count += iv.start_ms <= center && center < iv.end_ms;
      CHECK(seg.speaker_count[f] == count);
      ++recount[count];
    }
  }
  t.count_histogram.resize(3, 0);
  CHECK(t.count_histogram == recount);
  CHECK_THROWS_AS(MakeTrainingSegments(solo, 20.0), InvalidArgument);
}

TEST_CASE("session files round trip") {
  auto pool = SmallPool(3);
  SessionSpec spec;
  spec.n_speakers = 3;
  spec.seed = 5;
  auto s = GenerateSession(spec, pool, "rt");
  auto dir = std::filesystem::temp_directory_path() / "ssnd-session-test";
  std::filesystem::remove_all(dir);
  WriteSession(s, dir.string());
  auto r = ReadSession(dir.string());
  CHECK(r.id == "rt");
  CHECK(r.spec == s.spec);
  CHECK(r.speakers == s.speakers);
  CHECK(r.azimuths == s.azimuths);
  CHECK(r.levels_db == s.levels_db);
  CHECK(r.snr_db == s.snr_db);
  CHECK(r.intervals == s.intervals);
  CHECK(r.transcripts == s.transcripts);
  REQUIRE(r.sources.rows() == s.sources.rows());
  double err = 0.0;
  for (std::size_t k = 0; k < s.sources.data().size(); ++k)
    err = std::max(err, std::abs(r.sources.data()[k] - s.sources.data()[k]));
  CHECK(err < 1e-6);
  std::filesystem::remove_all(dir);
}
