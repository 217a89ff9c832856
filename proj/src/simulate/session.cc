// src/simulate/session.cc

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

#include "ssnd/simulate/session.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "ssnd/core/activity.h"

namespace ssnd {

namespace {

constexpr Millis kQuantumMs = 10;

void CheckRange(const Range &r, const char *name, bool allow_inf = false) {
  bool finite = std::isfinite(r.first) && std::isfinite(r.second);
  if (!(r.first <= r.second) || (!finite && !allow_inf))
    throw InvalidArgument(std::string("bad range for ") + name);
}

Millis SnapDown(double ms) {
  return static_cast<Millis>(std::floor(ms / kQuantumMs)) * kQuantumMs;
}

Millis SnapNearest(double ms) {
  return static_cast<Millis>(std::llround(ms / kQuantumMs)) * kQuantumMs;
}

struct Item {
  int speaker;
  int utterance;
  Millis length_ms;
};

// Caps the overlap of every join so each utterance keeps `solo_ms` of
// single-talker speech and at most two utterances are ever active.
std::vector<Millis> ClippedOverlaps(const std::vector<Item> &order,
                                    const std::vector<char> &overlapping,
                                    double kappa, Millis solo_ms) {
  const std::size_t n = order.size();
  std::vector<Millis> o(n, 0);
  Millis prev_start = 0, prev_end = order.empty() ? 0 : order[0].length_ms;
  Millis prev2_end = std::numeric_limits<Millis>::min();
  for (std::size_t i = 1; i < n; ++i) {
    const Millis len = order[i].length_ms;
    if (overlapping[i]) {
      Millis want = SnapDown(kappa * static_cast<double>(len));
      Millis cap = prev_end - std::max(prev2_end, prev_start) - solo_ms;
      want = std::min({want, cap, len - solo_ms});
      o[i] = std::max<Millis>(0, want);
    }
    // Only the placement relative to the previous end matters here; gaps
    // shift everything later without changing the caps.
    Millis start = prev_end - o[i];
    prev2_end = prev_end;
    prev_start = start;
    prev_end = start + len;
  }
  return o;
}

std::vector<SpeakerInterval> Layout(const std::vector<Item> &order,
                                    const std::vector<Millis> &overlap,
                                    const std::vector<Millis> &gap,
                                    const UtterancePool &pool,
                                    std::vector<Millis> *starts_out) {
  std::vector<Millis> lengths;
  for (const auto &it : order) lengths.push_back(it.length_ms);
  auto starts = PlaceUtterances(lengths, overlap, gap);
  std::vector<SpeakerInterval> iv;
  for (std::size_t i = 0; i < order.size(); ++i)
    iv.push_back({pool.speakers[order[i].speaker].id, starts[i],
                  starts[i] + lengths[i]});
  if (starts_out) *starts_out = std::move(starts);
  return iv;
}

}  // namespace

SessionSpec SessionSpec::Diarization() { return SessionSpec{}; }

SessionSpec SessionSpec::Separation() {
  SessionSpec s;
  s.min_utterances_per_speaker = 1;
  s.max_utterances_per_speaker = 2;
  s.overlap_range = {0.4, 0.5};
  s.silence_range_s = {0.5, 1.0};
  s.silence_prob = 0.05;
  return s;
}

void SessionSpec::Validate() const {
  if (n_speakers < 1) throw InvalidArgument("need at least one speaker");
  if (min_utterances_per_speaker < 1 ||
      max_utterances_per_speaker < min_utterances_per_speaker)
    throw InvalidArgument("bad utterances-per-speaker range");
  CheckRange(overlap_range, "overlap");
  if (overlap_range.first < 0.0) throw InvalidArgument("negative overlap ratio");
  CheckRange(silence_range_s, "silence");
  if (silence_range_s.first < 0.0) throw InvalidArgument("negative silence");
  if (!(silence_prob >= 0.0 && silence_prob <= 1.0))
    throw InvalidArgument("silence probability outside [0, 1]");
  CheckRange(level_range_db, "level");
  CheckRange(snr_range_db, "snr", true);
  if (std::isinf(snr_range_db.first) != std::isinf(snr_range_db.second) ||
      snr_range_db.first == -std::numeric_limits<double>::infinity())
    throw InvalidArgument("SNR range must be finite or both +inf");
  if (!(min_azimuth_sep_deg >= 0.0)) throw InvalidArgument("negative azimuth separation");
  if (!(min_solo_s >= 0.0) || !(tail_s >= 0.0))
    throw InvalidArgument("negative solo or tail duration");
  if (sample_rate <= 0 || sample_rate % 100 != 0)
    throw InvalidArgument("sample rate must be a positive multiple of 100 Hz");
}

std::size_t Session::SpeakerIndex(const std::string &speaker) const {
  auto it = std::find(speakers.begin(), speakers.end(), speaker);
  if (it == speakers.end()) throw InvalidArgument("unknown speaker " + speaker);
  return static_cast<std::size_t>(it - speakers.begin());
}

Millis Session::DurationMs() const {
  return static_cast<Millis>(mixture.n_samples()) * 1000 / mixture.sample_rate;
}

bool operator==(const Session &a, const Session &b) {
  return a.id == b.id && a.spec == b.spec &&
         a.mixture.samples == b.mixture.samples &&
         a.mixture.sample_rate == b.mixture.sample_rate &&
         a.mixture.geometry == b.mixture.geometry &&
         a.mixture.reference == b.mixture.reference && a.noise == b.noise &&
         a.speakers == b.speakers && a.sources == b.sources &&
         a.intervals == b.intervals && a.transcripts == b.transcripts &&
         a.azimuths == b.azimuths && a.levels_db == b.levels_db &&
         (a.snr_db == b.snr_db || (std::isnan(a.snr_db) && std::isnan(b.snr_db))) &&
         a.overlap_ratio == b.overlap_ratio;
}

std::vector<Millis> PlaceUtterances(const std::vector<Millis> &lengths_ms,
                                    const std::vector<Millis> &overlap_ms,
                                    const std::vector<Millis> &gap_ms) {
  const std::size_t n = lengths_ms.size();
  if (overlap_ms.size() != n || gap_ms.size() != n)
    throw ShapeMismatch("placement vectors differ in length");
  std::vector<Millis> starts(n);
  Millis last_end = 0;
  for (std::size_t i = 0; i < n; ++i) {
    starts[i] = i == 0 ? gap_ms[0] : last_end - overlap_ms[i] + gap_ms[i];
    if (starts[i] < 0) throw InvalidArgument("utterance placed before time 0");
    last_end = std::max(last_end, starts[i] + lengths_ms[i]);
  }
  return starts;
}

double OverlapRatio(const std::vector<SpeakerInterval> &intervals) {
  auto merged = MergeSpeakerIntervals(intervals);
  std::vector<std::pair<Millis, int>> events;
  for (const auto &iv : merged) {
    events.push_back({iv.start_ms, +1});
    events.push_back({iv.end_ms, -1});
  }
  std::sort(events.begin(), events.end());
  Millis speech = 0, overlap = 0, prev = 0;
  int active = 0;
  for (const auto &[t, delta] : events) {
    if (active >= 1) speech += t - prev;
    if (active >= 2) overlap += t - prev;
    active += delta;
    prev = t;
  }
  return speech == 0 ? 0.0 : static_cast<double>(overlap) / speech;
}

int MaxConcurrency(const std::vector<SpeakerInterval> &intervals) {
  std::vector<std::pair<Millis, int>> events;
  for (const auto &iv : MergeSpeakerIntervals(intervals)) {
    events.push_back({iv.start_ms, +1});
    events.push_back({iv.end_ms, -1});
  }
  // Ends sort before starts at equal times: intervals are half-open.
  std::sort(events.begin(), events.end());
  int active = 0, best = 0;
  for (const auto &e : events) best = std::max(best, active += e.second);
  return best;
}

std::vector<double> SampleAzimuths(int n, double min_sep_deg, std::uint64_t seed) {
  if (n < 0) throw InvalidArgument("negative speaker count");
  if (n * min_sep_deg > 360.0)
    throw InvalidArgument("cannot place " + std::to_string(n) +
                          " azimuths at least " + std::to_string(min_sep_deg) +
                          " degrees apart");
  std::mt19937_64 rng(seed);
  const double slack = 360.0 - n * min_sep_deg;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> offsets(n);
  for (auto &v : offsets) v = slack * u(rng);
  std::sort(offsets.begin(), offsets.end());
  const double origin = 360.0 * u(rng);
  std::vector<double> az(n);
  for (int k = 0; k < n; ++k) {
    az[k] = std::fmod(origin + offsets[k] + k * min_sep_deg, 360.0);
  }
  std::shuffle(az.begin(), az.end(), rng);
  return az;
}

namespace {

struct SessionLayout {
  std::vector<std::string> speakers;
  std::vector<double> azimuths, levels_db;
  std::vector<Item> order;
  std::vector<Millis> starts;
  std::vector<SpeakerInterval> intervals;  // in utterance order
};

SessionLayout PlanLayout(const SessionSpec &spec, const UtterancePool &pool,
                         std::mt19937_64 &rng) {
  spec.Validate();
  if (pool.sample_rate != spec.sample_rate)
    throw InvalidArgument("pool sample rate differs from the session spec");
  if (static_cast<int>(pool.speakers.size()) < spec.n_speakers)
    throw InvalidArgument("pool has " + std::to_string(pool.speakers.size()) +
                          " speakers, spec needs " + std::to_string(spec.n_speakers));
  const std::int64_t samples_per_ms = spec.sample_rate / 1000;
  const std::int64_t quantum = spec.sample_rate / 100;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto uniform = [&](const Range &r) { return r.first + (r.second - r.first) * unif(rng); };

  SessionLayout s;
  std::vector<Item> items;
  std::uniform_int_distribution<int> n_utts(spec.min_utterances_per_speaker,
                                            spec.max_utterances_per_speaker);
  for (int k = 0; k < spec.n_speakers; ++k) {
    const auto &spk = pool.speakers[k];
    s.speakers.push_back(spk.id);
    int count = n_utts(rng);
    if (static_cast<int>(spk.utterances.size()) < count)
      throw InvalidArgument("pool exhausted for speaker " + spk.id);
    for (int u = 0; u < count; ++u) {
      const auto n = static_cast<std::int64_t>(spk.utterances[u].samples.size());
      if (n == 0 || n % quantum != 0)
        throw InvalidArgument("pool utterance length is not a multiple of 10 ms");
      items.push_back({k, u, n / samples_per_ms});
    }
  }
  s.azimuths = SampleAzimuths(spec.n_speakers, spec.min_azimuth_sep_deg, rng());
  for (int k = 0; k < spec.n_speakers; ++k) s.levels_db.push_back(uniform(spec.level_range_db));
  // Arrange utterances until the measured overlap ratio lands in range.
  const Millis solo_ms = SnapNearest(spec.min_solo_s * 1000.0);
  std::vector<Millis> overlap, gap;
  bool placed = false;
  for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
    s.order = items;
    auto &order = s.order;
    for (int tries = 0; tries < 100; ++tries) {
      std::shuffle(order.begin(), order.end(), rng);
      bool repeats = false;
      for (std::size_t i = 1; i < order.size(); ++i)
        repeats |= order[i].speaker == order[i - 1].speaker;
      if (!repeats) break;
    }
    const std::size_t n = order.size();
    std::vector<char> overlapping(n, 0);
    gap.assign(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
      bool silence = unif(rng) < spec.silence_prob ||
                     order[i].speaker == order[i - 1].speaker;
      if (silence)
        gap[i] = SnapNearest(1000.0 * uniform(spec.silence_range_s));
      else
        overlapping[i] = 1;
    }
    const double target = uniform(spec.overlap_range);

    auto ratio_at = [&](double kappa, std::vector<Millis> *o) {
      *o = ClippedOverlaps(order, overlapping, kappa, solo_ms);
      return OverlapRatio(Layout(order, *o, gap, pool, nullptr));
    };
    // The realized ratio grows with kappa up to clipping; bisect towards
    // the target and keep the closest candidate.
    double lo = 0.0, hi = 1.0, best_err = std::numeric_limits<double>::infinity();
    std::vector<Millis> cand;
    double best_ratio = 0.0;
    for (int it = 0; it < 40; ++it) {
      double kappa = it == 0 ? 0.0 : it == 1 ? 1.0 : 0.5 * (lo + hi);
      double r = ratio_at(kappa, &cand);
      if (std::abs(r - target) < best_err) {
        best_err = std::abs(r - target);
        best_ratio = r;
        overlap = cand;
      }
      if (it >= 1) (r < target ? lo : hi) = kappa;
      if (best_err == 0.0) break;
    }
    placed = best_ratio >= spec.overlap_range.first &&
             best_ratio <= spec.overlap_range.second;
  }
  if (!placed) throw InvalidArgument("could not realize the requested overlap range");

  s.intervals = Layout(s.order, overlap, gap, pool, &s.starts);
  return s;
}

}  // namespace

std::vector<SpeakerInterval> PlanSessionIntervals(const SessionSpec &spec,
                                                  const UtterancePool &pool) {
  std::mt19937_64 rng(spec.seed);
  auto layout = PlanLayout(spec, pool, rng);
  SortIntervals(&layout.intervals);
  return layout.intervals;
}

Session GenerateSession(const SessionSpec &spec, const UtterancePool &pool,
                        const std::string &id) {
  std::mt19937_64 rng(spec.seed);
  SessionLayout layout = PlanLayout(spec, pool, rng);
  const std::int64_t samples_per_ms = spec.sample_rate / 1000;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto uniform = [&](const Range &r) { return r.first + (r.second - r.first) * unif(rng); };

  Session s;
  s.id = id;
  s.spec = spec;
  s.speakers = layout.speakers;
  s.azimuths = layout.azimuths;
  s.levels_db = layout.levels_db;
  const auto &order = layout.order;
  const auto &starts = layout.starts;
  const auto &unsorted = layout.intervals;
  const Millis end_ms = unsorted.empty() ? 0 : std::max_element(
      unsorted.begin(), unsorted.end(),
      [](const auto &a, const auto &b) { return a.end_ms < b.end_ms; })->end_ms;
  const Millis total_ms = end_ms + SnapNearest(spec.tail_s * 1000.0);
  const std::size_t N = static_cast<std::size_t>(total_ms * samples_per_ms);

  const auto geometry = CircularArrayGeometry();
  MultichannelAudio speech;
  speech.sample_rate = spec.sample_rate;
  speech.geometry = geometry;
  speech.reference = 0;
  speech.samples = Matrix<double>(geometry.size(), N);
  s.sources = Matrix<double>(spec.n_speakers, N);
  constexpr std::size_t kPad = 160;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Item &it = order[i];
    const auto &src = pool.speakers[it.speaker].utterances[it.utterance];
    const double gain = std::pow(10.0, s.levels_db[it.speaker] / 20.0);
    const std::size_t offset = static_cast<std::size_t>(starts[i] * samples_per_ms);
    std::vector<double> padded(src.samples.size() + 2 * kPad, 0.0);
    for (std::size_t n = 0; n < src.samples.size(); ++n) {
      padded[kPad + n] = gain * src.samples[n];
      s.sources(it.speaker, offset + n) = padded[kPad + n];
    }
    auto image = Spatialize(padded, s.azimuths[it.speaker], geometry, 0,
                            spec.sample_rate);
    for (std::size_t m = 0; m < geometry.size(); ++m) {
      for (std::size_t n = 0; n < padded.size(); ++n) {
        std::int64_t t = static_cast<std::int64_t>(offset + n) - static_cast<std::int64_t>(kPad);
        if (t >= 0 && t < static_cast<std::int64_t>(N)) speech.samples(m, t) += image.samples(m, n);
      }
    }
    s.transcripts.push_back({id, pool.speakers[it.speaker].id, unsorted[i].start_ms,
                             unsorted[i].end_ms, src.text});
  }

  if (std::isinf(spec.snr_range_db.first)) {
    s.snr_db = std::numeric_limits<double>::infinity();
    s.mixture = speech;
    s.noise = Matrix<double>(speech.n_channels(), N);
  } else {
    s.snr_db = uniform(spec.snr_range_db);
    s.mixture = AddNoise(speech, s.snr_db, spec.noise_kind, rng(), &s.noise);
  }

  s.intervals = unsorted;
  SortIntervals(&s.intervals);
  std::sort(s.transcripts.begin(), s.transcripts.end(),
            [](const TranscriptRecord &a, const TranscriptRecord &b) {
              return std::tie(a.start_ms, a.end_ms, a.speaker) <
                     std::tie(b.start_ms, b.end_ms, b.speaker);
            });
  s.overlap_ratio = OverlapRatio(s.intervals);
  return s;
}

TrainingSegments MakeTrainingSegments(const Session &session, double segment_s) {
  if (!(segment_s > 0.0)) throw InvalidArgument("segment length must be positive");
  const int sr = session.mixture.sample_rate;
  const Millis seg_ms = SecondsToMillis(segment_s);
  const std::size_t seg_samples = static_cast<std::size_t>(seg_ms) * sr / 1000;
  const std::size_t n_chunks = session.mixture.n_samples() / seg_samples;
  if (n_chunks == 0) throw InvalidArgument("session is shorter than one segment");

  TrainingSegments out;
  std::size_t single = 0;
  for (std::size_t k = 0; k < n_chunks; ++k) {
    TrainingSegment seg;
    seg.start_ms = static_cast<Millis>(k) * seg_ms;
    seg.end_ms = seg.start_ms + seg_ms;
    const std::size_t a = k * seg_samples;
    seg.mixture = session.mixture;
    seg.mixture.samples = Matrix<double>(session.mixture.n_channels(), seg_samples);
    for (std::size_t m = 0; m < session.mixture.n_channels(); ++m)
      std::copy_n(session.mixture.Channel(m).begin() + a, seg_samples,
                  seg.mixture.Channel(m).begin());
    for (const auto &iv : session.intervals)
      if (iv.start_ms < seg.end_ms && iv.end_ms > seg.start_ms &&
          std::find(seg.speakers.begin(), seg.speakers.end(), iv.speaker) ==
              seg.speakers.end())
        seg.speakers.push_back(iv.speaker);
    seg.targets = Matrix<double>(seg.speakers.size(), seg_samples);
    for (std::size_t j = 0; j < seg.speakers.size(); ++j) {
      auto row = session.sources.Row(session.SpeakerIndex(seg.speakers[j]));
      std::copy_n(row.begin() + a, seg_samples, seg.targets.Row(j).begin());
    }
    FrameGrid grid(kQuantumMs, kQuantumMs, seg_ms / kQuantumMs);
    std::vector<SpeakerInterval> local;
    for (const auto &iv : session.intervals) {
      Millis s0 = std::max(iv.start_ms, seg.start_ms), e0 = std::min(iv.end_ms, seg.end_ms);
      if (s0 < e0) local.push_back({iv.speaker, s0 - seg.start_ms, e0 - seg.start_ms});
    }
    auto act = IntervalsToActivity(local, grid, session.speakers);
    seg.speaker_count.assign(act.n_frames(), 0);
    for (std::size_t t = 0; t < act.n_frames(); ++t) {
      for (std::size_t c = 0; c < act.n_speakers(); ++c) seg.speaker_count[t] += act.values(t, c);
      const std::size_t count = seg.speaker_count[t];
      if (out.count_histogram.size() <= count) out.count_histogram.resize(count + 1, 0);
      ++out.count_histogram[count];
    }
    single += seg.speakers.size() <= 1;
    out.segments.push_back(std::move(seg));
  }
  out.single_speaker_fraction = static_cast<double>(single) / n_chunks;
  return out;
}

}  // namespace ssnd
