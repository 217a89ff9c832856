// include/ssnd/simulate/pool.h

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

#ifndef SSND_SIMULATE_POOL_H_
#define SSND_SIMULATE_POOL_H_

#include <cstdint>
#include <string>
#include <vector>

namespace ssnd {

struct Utterance {
  std::vector<double> samples;
  std::string text;
};

struct PoolSpeaker {
  std::string id;
  std::vector<Utterance> utterances;
};

/// Source material for session generation, one entry per speaker.
struct UtterancePool {
  std::vector<PoolSpeaker> speakers;
  int sample_rate = 16000;
};

struct SyntheticPoolOptions {
  int n_speakers = 8;
  int utterances_per_speaker = 2;
  double min_len_s = 2.0;
  double max_len_s = 6.0;
  /// Lengths are multiples of this many milliseconds.
  int length_quantum_ms = 10;
  int sample_rate = 16000;
  std::uint64_t seed = 0;
};

/// Stand-in "speech": white noise through a speaker-specific two-pole
/// resonator, shaped by a syllable-rate envelope that never reaches zero,
/// scaled to an RMS of 0.1. Each utterance carries a random word string
/// drawn from a small vocabulary, about 2.5 words per second.
UtterancePool MakeSyntheticPool(const SyntheticPoolOptions &opts);

}  // namespace ssnd

#endif  // SSND_SIMULATE_POOL_H_
