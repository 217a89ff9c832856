// tests/test-util.h

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

#ifndef SSND_TESTS_TEST_UTIL_H_
#define SSND_TESTS_TEST_UTIL_H_

// Helpers and brute-force oracles shared by the unit and acceptance suites.
// Nothing here calls into the code paths the oracles check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ssnd/core/types.h"

namespace testutil {

using ssnd::ActivityMatrix;
using ssnd::FrameGrid;
using ssnd::Matrix;
using ssnd::PosteriorMatrix;

inline ActivityMatrix MakeActivity(const std::vector<std::vector<int>> &rows,
                                   std::vector<double> azimuths,
                                   ssnd::Millis shift_ms = 10) {
  ActivityMatrix a;
  const std::size_t T = rows.size(), C = T ? rows[0].size() : 0;
  a.grid = FrameGrid(shift_ms, shift_ms, static_cast<std::int64_t>(T));
  a.values = Matrix<std::uint8_t>(T, C);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < C; ++c) a.values(t, c) = rows[t][c] ? 1 : 0;
  for (std::size_t c = 0; c < C; ++c) a.speakers.push_back("s" + std::to_string(c));
  if (!azimuths.empty()) a.azimuths = std::move(azimuths);
  return a;
}

inline PosteriorMatrix MakePosterior(const std::vector<std::vector<double>> &rows,
                                     ssnd::Millis shift_ms = 10) {
  PosteriorMatrix p;
  const std::size_t T = rows.size(), C = T ? rows[0].size() : 0;
  p.grid = FrameGrid(shift_ms, shift_ms, static_cast<std::int64_t>(T));
  p.values = Matrix<double>(T, C);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < C; ++c) p.values(t, c) = rows[t][c];
  return p;
}

/// Minimum total over all matchings of the smaller side into the larger.
inline double BruteForceAssignment(const Matrix<double> &cost) {
  const bool wide = cost.rows() <= cost.cols();
  const std::size_t n = wide ? cost.rows() : cost.cols();
  const std::size_t m = wide ? cost.cols() : cost.rows();
  auto at = [&](std::size_t i, std::size_t j) {
    return wide ? cost(i, j) : cost(j, i);
  };
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(m, 0);
  std::function<void(std::size_t, double)> go = [&](std::size_t i, double acc) {
    if (i == n) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      go(i + 1, acc + at(i, j));
      used[j] = 0;
    }
  };
  go(0, 0.0);
  return n == 0 ? 0.0 : best;
}

struct PitInstance {
  PosteriorMatrix p;
  ActivityMatrix y;
};

/// Random labels (with azimuths) and posteriors, T <= max_t, C in
/// [min_c, max_c].
inline PitInstance RandomPitInstance(std::mt19937 &rng, std::size_t max_t,
                                     std::size_t max_c, std::size_t min_c = 1) {
  const std::size_t T = 1 + rng() % max_t;
  const std::size_t C = min_c + rng() % (max_c - min_c + 1);
  std::uniform_real_distribution<double> prob(0.0, 1.0), az(0.0, 360.0);
  std::vector<std::vector<int>> labels(T, std::vector<int>(C));
  std::vector<std::vector<double>> probs(T, std::vector<double>(C));
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < C; ++c) {
      labels[t][c] = rng() % 2;
      probs[t][c] = prob(rng);
    }
  std::vector<double> azimuths(C);
  for (auto &a : azimuths) a = az(rng);
  return {MakePosterior(probs), MakeActivity(labels, azimuths)};
}


/// Intervals laid on two independent lanes, each a sequence of
/// non-overlapping (possibly abutting) intervals, then shuffled. No instant
/// is covered more than twice. Small integer ranges make equal onsets and
/// ends common.
inline std::vector<ssnd::SpeakerInterval> RandomTwoLaneIntervals(
    std::mt19937 &rng, std::size_t max_per_lane, int n_speakers = 4) {
  std::vector<ssnd::SpeakerInterval> out;
  for (int lane = 0; lane < 2; ++lane) {
    const std::size_t n = rng() % (max_per_lane + 1);
    ssnd::Millis t = static_cast<ssnd::Millis>(rng() % 5);
    for (std::size_t k = 0; k < n; ++k) {
      const ssnd::Millis len = 1 + static_cast<ssnd::Millis>(rng() % 8);
      out.push_back({"s" + std::to_string(rng() % n_speakers), t, t + len});
      t += len + static_cast<ssnd::Millis>(rng() % 4);  // gap may be zero
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

/// Number of intervals containing instant `ms`.
inline int CoverCount(const std::vector<ssnd::SpeakerInterval> &intervals,
                      ssnd::Millis ms) {
  int n = 0;
  for (const auto &iv : intervals) n += iv.start_ms <= ms && ms < iv.end_ms;
  return n;
}

// Independent DER oracle for intervals on a 10 ms grid: count per 10 ms slot,
// try every injective mapping, keep the minimum error.
inline double OracleDer(const std::vector<ssnd::SpeakerInterval> &ref,
                 const std::vector<ssnd::SpeakerInterval> &hyp) {
  std::vector<std::string> rs, hs;
  ssnd::Millis end = 0;
  for (const auto &iv : ref) {
    if (std::find(rs.begin(), rs.end(), iv.speaker) == rs.end()) rs.push_back(iv.speaker);
    end = std::max(end, iv.end_ms);
  }
  for (const auto &iv : hyp) {
    if (std::find(hs.begin(), hs.end(), iv.speaker) == hs.end()) hs.push_back(iv.speaker);
    end = std::max(end, iv.end_ms);
  }
  const std::size_t T = end / 10;
  auto active = [&](const std::vector<ssnd::SpeakerInterval> &ivs, const std::string &s,
                    std::size_t t) {
    for (const auto &iv : ivs)
      if (iv.speaker == s && iv.start_ms <= ssnd::Millis(t * 10) && ssnd::Millis(t * 10) < iv.end_ms)
        return true;
    return false;
  };
  std::vector<std::vector<char>> R(T, std::vector<char>(rs.size())),
      H(T, std::vector<char>(hs.size()));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < rs.size(); ++i) R[t][i] = active(ref, rs[i], t);
    for (std::size_t j = 0; j < hs.size(); ++j) H[t][j] = active(hyp, hs[j], t);
  }
  double best = 1e300;
  std::vector<int> map(rs.size(), -1);
  std::vector<char> used(hs.size(), 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == rs.size()) {
      double total = 0, err = 0;
      for (std::size_t t = 0; t < T; ++t) {
        int nr = 0, nh = 0, nc = 0;
        for (std::size_t a = 0; a < rs.size(); ++a) nr += R[t][a];
        for (std::size_t b = 0; b < hs.size(); ++b) nh += H[t][b];
        for (std::size_t a = 0; a < rs.size(); ++a)
          if (map[a] >= 0 && R[t][a] && H[t][map[a]]) ++nc;
        total += nr;
        err += std::max(nr, nh) - nc;
      }
      best = std::min(best, err / total);
      return;
    }
    map[i] = -1;
    go(i + 1);
    for (std::size_t j = 0; j < hs.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      map[i] = static_cast<int>(j);
      go(i + 1);
      used[j] = 0;
    }
    map[i] = -1;
  };
  go(0);
  return best;
}

}  // namespace testutil

#endif  // SSND_TESTS_TEST_UTIL_H_
