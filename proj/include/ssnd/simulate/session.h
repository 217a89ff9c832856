// include/ssnd/simulate/session.h

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

#ifndef SSND_SIMULATE_SESSION_H_
#define SSND_SIMULATE_SESSION_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssnd/core/io.h"
#include "ssnd/core/types.h"
#include "ssnd/simulate/acoustics.h"
#include "ssnd/simulate/pool.h"

namespace ssnd {

using Range = std::pair<double, double>;

struct SessionSpec {
  int n_speakers = 8;
  int min_utterances_per_speaker = 2;
  int max_utterances_per_speaker = 2;
  Range overlap_range{0.0, 0.45};
  Range silence_range_s{0.5, 3.0};
  double silence_prob = 0.26;
  Range level_range_db{-3.5, 3.5};
  /// Set both ends to +inf for a noise-free session.
  Range snr_range_db{10.0, 30.0};
  NoiseKind noise_kind = NoiseKind::kDiffuse;
  double min_azimuth_sep_deg = 5.0;
  /// Every utterance keeps at least this much single-talker speech, which
  /// also separates any two utterances that are not neighbours in time.
  double min_solo_s = 0.5;
  double tail_s = 0.5;  // silence after the last utterance
  int sample_rate = 16000;
  std::uint64_t seed = 0;

  /// Diarization-training recipe: 2 utterances per speaker, overlap
  /// 0-45%, 0.5-3 s silences with probability 0.26.
  static SessionSpec Diarization();
  /// Separation-training recipe: 1-2 utterances per speaker, overlap
  /// 40-50%, 0.5-1 s silences with probability 0.05.
  static SessionSpec Separation();

  /// Throws InvalidArgument on empty or inverted ranges and probabilities
  /// outside [0, 1].
  void Validate() const;

  friend bool operator==(const SessionSpec &, const SessionSpec &) = default;
};

struct Session {
  std::string id;
  SessionSpec spec;
  MultichannelAudio mixture;  // speech plus noise
  Matrix<double> noise;       // same shape as the mixture
  std::vector<std::string> speakers;
  /// Direct-path image of each speaker at the reference mic, one row per
  /// speaker, full session length, level applied.
  Matrix<double> sources;
  std::vector<SpeakerInterval> intervals;      // one per utterance, sorted
  std::vector<TranscriptRecord> transcripts;   // one per utterance, sorted
  std::vector<double> azimuths;   // degrees, per speaker
  std::vector<double> levels_db;  // per speaker
  double snr_db = 0.0;
  double overlap_ratio = 0.0;

  std::size_t SpeakerIndex(const std::string &speaker) const;
  Millis DurationMs() const;

  friend bool operator==(const Session &, const Session &);
};

/// Generates one session. All randomness derives from spec.seed. Utterance
/// boundaries fall on a 10 ms grid provided the pool utterances are
/// multiples of 10 ms long. Throws InvalidArgument if a pool speaker has too
/// few utterances, the pool has too few speakers, the azimuth constraint
/// cannot be met (n * min_sep > 360), or no arrangement reaches the
/// overlap range.
Session GenerateSession(const SessionSpec &spec, const UtterancePool &pool,
                        const std::string &id = "session");

/// The intervals GenerateSession() would produce for `spec`, without
/// rendering any audio.
std::vector<SpeakerInterval> PlanSessionIntervals(const SessionSpec &spec,
                                                  const UtterancePool &pool);

/// Utterances are laid out in order; `overlap_ms[i]` (i >= 1) is how much
/// utterance i overlaps the previous one and `gap_ms[i]` the silence before
/// it. Exposed for testing the placement rule.
std::vector<Millis> PlaceUtterances(const std::vector<Millis> &lengths_ms,
                                    const std::vector<Millis> &overlap_ms,
                                    const std::vector<Millis> &gap_ms);

/// Time with at least two speakers active divided by time with at least
/// one; 0 for no speech.
double OverlapRatio(const std::vector<SpeakerInterval> &intervals);

/// Maximum number of simultaneously active speakers.
int MaxConcurrency(const std::vector<SpeakerInterval> &intervals);

/// Azimuths in [0, 360) with circular pairwise separation >= min_sep.
std::vector<double> SampleAzimuths(int n, double min_sep_deg,
                                   std::uint64_t seed);

struct TrainingSegment {
  Millis start_ms = 0;
  Millis end_ms = 0;
  MultichannelAudio mixture;
  Matrix<double> targets;                 // speaker x samples
  std::vector<std::string> speakers;      // speakers active in the chunk
  std::vector<int> speaker_count;         // per 10 ms frame
};

struct TrainingSegments {
  std::vector<TrainingSegment> segments;
  double single_speaker_fraction = 0.0;   // chunks with at most one speaker
  std::vector<std::int64_t> count_histogram;  // frames with 0, 1, 2, ... speakers
};

/// Non-overlapping chunks of `segment_s` seconds from time 0; a trailing
/// remainder shorter than a chunk is dropped. Throws InvalidArgument if the
/// session is shorter than one chunk.
TrainingSegments MakeTrainingSegments(const Session &session, double segment_s = 5.0);

/// Session directory layout: mixture.wav, sources/<speaker>.wav, ref.rttm,
/// transcripts.tsv and manifest.txt. Audio is written as float32.
void WriteSession(const Session &session, const std::string &dir);
Session ReadSession(const std::string &dir);

/// Text manifest: one "key value..." record per line.
void WriteManifest(const Session &session, std::ostream &os);

}  // namespace ssnd

#endif  // SSND_SIMULATE_SESSION_H_
