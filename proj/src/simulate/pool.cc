// src/simulate/pool.cc

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

#include "ssnd/simulate/pool.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ssnd/core/error.h"

namespace ssnd {

namespace {

const char *const kVocabulary[] = {
    "the",   "meeting", "starts", "at",     "noon",   "we",    "should",
    "review", "budget", "plan",   "for",    "next",   "quarter", "please",
    "send",  "notes",   "after",  "call",   "team",   "agreed", "on",
    "three", "points",  "first",  "second", "design", "model",  "data",
    "test",  "results", "look",   "good",   "maybe",  "later",  "today",
};

}  // namespace

UtterancePool MakeSyntheticPool(const SyntheticPoolOptions &opts) {
  if (opts.n_speakers < 1 || opts.utterances_per_speaker < 1)
    throw InvalidArgument("pool needs at least one speaker and utterance");
  if (!(opts.min_len_s > 0.0) || opts.max_len_s < opts.min_len_s)
    throw InvalidArgument("bad utterance length range");
  if (opts.length_quantum_ms <= 0 || opts.sample_rate <= 0)
    throw InvalidArgument("bad pool quantum or sample rate");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::int64_t quantum =
      static_cast<std::int64_t>(opts.sample_rate) * opts.length_quantum_ms / 1000;
  const std::int64_t lo = static_cast<std::int64_t>(
      std::ceil(opts.min_len_s * opts.sample_rate / quantum));
  const std::int64_t hi = static_cast<std::int64_t>(
      std::floor(opts.max_len_s * opts.sample_rate / quantum));
  if (hi < lo || lo < 1) throw InvalidArgument("utterance length range too narrow");
  std::uniform_int_distribution<std::int64_t> n_quanta(lo, hi);
  constexpr std::size_t kVocabSize = std::size(kVocabulary);

  UtterancePool pool;
  pool.sample_rate = opts.sample_rate;
  for (int s = 0; s < opts.n_speakers; ++s) {
    PoolSpeaker spk;
    spk.id = "spk" + std::to_string(s);
    // Resonance between 300 Hz and 2.5 kHz, pole radius 0.9..0.98.
    const double f0 = 300.0 + 2200.0 * unif(rng);
    const double radius = 0.9 + 0.08 * unif(rng);
    const double a1 = 2.0 * radius * std::cos(2.0 * std::numbers::pi * f0 / opts.sample_rate);
    const double a2 = -radius * radius;
    const double rate_hz = 3.0 + 2.0 * unif(rng);
    for (int u = 0; u < opts.utterances_per_speaker; ++u) {
      Utterance utt;
      const std::size_t n = static_cast<std::size_t>(n_quanta(rng) * quantum);
      utt.samples.resize(n);
      const double phase = 2.0 * std::numbers::pi * unif(rng);
      double y1 = 0.0, y2 = 0.0, energy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double y = gauss(rng) + a1 * y1 + a2 * y2;
        y2 = y1;
        y1 = y;
        double env = 0.35 + 0.65 * std::pow(std::sin(std::numbers::pi * rate_hz * i /
                                                         opts.sample_rate + phase), 2);
        utt.samples[i] = y * env;
        energy += utt.samples[i] * utt.samples[i];
      }
      const double scale = 0.1 / std::sqrt(energy / n);
      for (auto &v : utt.samples) v *= scale;

      const std::size_t n_words = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::lround(2.5 * n / opts.sample_rate)));
      for (std::size_t w = 0; w < n_words; ++w) {
        if (w) utt.text += ' ';
        utt.text += kVocabulary[rng() % kVocabSize];
      }
      spk.utterances.push_back(std::move(utt));
    }
    pool.speakers.push_back(std::move(spk));
  }
  return pool;
}

}  // namespace ssnd
