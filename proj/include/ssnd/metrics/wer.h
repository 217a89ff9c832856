// include/ssnd/metrics/wer.h

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

#ifndef SSND_METRICS_WER_H_
#define SSND_METRICS_WER_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssnd/core/io.h"

namespace ssnd {

struct WerReport {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t n_ref_words = 0;

  std::int64_t errors() const { return substitutions + deletions + insertions; }
  /// errors / n_ref_words; 0 for an empty reference with no errors and
  /// +inf for an empty reference with insertions.
  double wer() const;

  WerReport &operator+=(const WerReport &o);
};

/// Lowercase, drop punctuation (anything not alphanumeric, apostrophe or
/// whitespace), split on whitespace. With normalize = false only splits.
std::vector<std::string> Tokenize(const std::string &text, bool normalize = true);

/// Unit-cost Levenshtein alignment. Counts come from one optimal alignment;
/// on ties the backtrace prefers substitution/match, then deletion, then
/// insertion.
WerReport ComputeWer(const std::vector<std::string> &ref,
                     const std::vector<std::string> &hyp);

/// Edit distance only.
std::int64_t EditDistance(const std::vector<std::string> &ref,
                          const std::vector<std::string> &hyp);

/// All words one speaker said, in time order.
struct SpeakerWords {
  std::string speaker;
  std::vector<std::string> words;
};

enum class CpwerMethod { kBruteForce, kHungarian };

struct CpwerResult {
  WerReport report;  // summed over matched speaker pairs
  double cpwer = 0.0;
  /// (reference speaker, hypothesis speaker); an empty string marks the
  /// padding side of an unmatched speaker.
  std::vector<std::pair<std::string, std::string>> mapping;
};

/// Concatenated minimum-permutation WER. The smaller side is padded with
/// empty transcripts; the one-to-one mapping minimizing total edits is
/// chosen. Brute force is limited to 8 speakers on the larger side. Throws
/// InvalidArgument if the reference has no words.
CpwerResult ComputeCpwer(const std::vector<SpeakerWords> &ref,
                         const std::vector<SpeakerWords> &hyp,
                         CpwerMethod method = CpwerMethod::kHungarian);

/// Groups records by speaker (first-appearance order after sorting by
/// start) and concatenates each speaker's utterances in time order.
std::vector<SpeakerWords> ConcatenateBySpeaker(
    const std::vector<TranscriptRecord> &records, bool normalize = true);

}  // namespace ssnd

#endif  // SSND_METRICS_WER_H_
