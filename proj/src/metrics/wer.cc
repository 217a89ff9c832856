// src/metrics/wer.cc

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

#include "ssnd/metrics/wer.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>

#include "ssnd/criteria/hungarian.h"

namespace ssnd {

double WerReport::wer() const {
  if (n_ref_words > 0) return static_cast<double>(errors()) / n_ref_words;
  return errors() == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

WerReport &WerReport::operator+=(const WerReport &o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  n_ref_words += o.n_ref_words;
  return *this;
}

std::vector<std::string> Tokenize(const std::string &text, bool normalize) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char ch : text) {
    if (!normalize) {
      cleaned.push_back(static_cast<char>(ch));
    } else if (std::isalnum(ch) || ch == '\'' || ch >= 0x80) {
      cleaned.push_back(static_cast<char>(std::tolower(ch)));
    } else {
      cleaned.push_back(' ');
    }
  }
  std::istringstream is(cleaned);
  std::vector<std::string> words;
  for (std::string w; is >> w;) words.push_back(w);
  return words;
}

WerReport ComputeWer(const std::vector<std::string> &ref,
                     const std::vector<std::string> &hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  // d[i][j]: edits to turn ref[0, i) into hyp[0, j).
  std::vector<std::int64_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t & {
    return d[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] != hyp[j - 1]),
                           at(i - 1, j) + 1, at(i, j - 1) + 1});

  WerReport rep;
  rep.n_ref_words = static_cast<std::int64_t>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (ref[i - 1] != hyp[j - 1])) {
      rep.substitutions += ref[i - 1] != hyp[j - 1];
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++rep.deletions;
      --i;
    } else {
      ++rep.insertions;
      --j;
    }
  }
  return rep;
}

std::int64_t EditDistance(const std::vector<std::string> &ref,
                          const std::vector<std::string> &hyp) {
  std::vector<std::int64_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= hyp.size(); ++j)
      cur[j] = std::min({prev[j - 1] + (ref[i - 1] != hyp[j - 1]), prev[j] + 1,
                         cur[j - 1] + 1});
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

CpwerResult ComputeCpwer(const std::vector<SpeakerWords> &ref,
                         const std::vector<SpeakerWords> &hyp,
                         CpwerMethod method) {
  std::int64_t total_words = 0;
  for (const auto &r : ref) total_words += static_cast<std::int64_t>(r.words.size());
  if (total_words == 0) throw InvalidArgument("cpWER reference has no words");

  const std::size_t K = std::max(ref.size(), hyp.size());
  if (method == CpwerMethod::kBruteForce && K > 8)
    throw InvalidArgument("brute-force cpWER is limited to 8 speakers");
  static const std::vector<std::string> kEmpty;
  auto ref_words = [&](std::size_t i) -> const std::vector<std::string> & {
    return i < ref.size() ? ref[i].words : kEmpty;
  };
  auto hyp_words = [&](std::size_t j) -> const std::vector<std::string> & {
    return j < hyp.size() ? hyp[j].words : kEmpty;
  };

  Matrix<double> cost(K, K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j)
      cost(i, j) = static_cast<double>(EditDistance(ref_words(i), hyp_words(j)));

  std::vector<std::size_t> match(K);
  std::iota(match.begin(), match.end(), 0);
  if (method == CpwerMethod::kBruteForce) {
    std::vector<std::size_t> perm = match;
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (std::size_t i = 0; i < K; ++i) total += cost(i, perm[i]);
      if (total < best) {
        best = total;
        match = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else if (K > 0) {
    auto a = Hungarian(cost);
    for (std::size_t i = 0; i < K; ++i) match[i] = a.row_to_col[i];
  }

  CpwerResult out;
  for (std::size_t i = 0; i < K; ++i) {
    out.report += ComputeWer(ref_words(i), hyp_words(match[i]));
    out.mapping.emplace_back(i < ref.size() ? ref[i].speaker : "",
                             match[i] < hyp.size() ? hyp[match[i]].speaker : "");
  }
  out.cpwer = out.report.wer();
  return out;
}

std::vector<SpeakerWords> ConcatenateBySpeaker(
    const std::vector<TranscriptRecord> &records, bool normalize) {
  std::vector<TranscriptRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TranscriptRecord &a, const TranscriptRecord &b) {
                     return a.start_ms < b.start_ms;
                   });
  std::vector<SpeakerWords> out;
  for (const auto &r : sorted) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SpeakerWords &s) {
      return s.speaker == r.speaker;
    });
    if (it == out.end()) {
      out.push_back({r.speaker, {}});
      it = out.end() - 1;
    }
    auto words = Tokenize(r.text, normalize);
    it->words.insert(it->words.end(), words.begin(), words.end());
  }
  return out;
}

}  // namespace ssnd
