// src/metrics/der.cc

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

#include "ssnd/metrics/der.h"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "ssnd/core/activity.h"
#include "ssnd/criteria/hungarian.h"

namespace ssnd {

namespace {

struct Rasters {
  ActivityMatrix ref, hyp;
  std::vector<char> scored;  // frame is outside every collar
};

Rasters Rasterize(const std::vector<SpeakerInterval> &ref,
                  const std::vector<SpeakerInterval> &hyp,
                  const DerOptions &options) {
  if (options.resolution_ms <= 0)
    throw InvalidArgument("DER resolution must be positive");
  if (options.collar_ms < 0) throw InvalidArgument("negative collar");
  Millis end = 0;
  for (const auto &iv : ref) end = std::max(end, iv.end_ms);
  for (const auto &iv : hyp) end = std::max(end, iv.end_ms);
  FrameGrid grid = FrameGrid::Covering(end, options.resolution_ms);

  Rasters r;
  r.ref = IntervalsToActivity(ref, grid, SpeakersOf(ref));
  r.hyp = IntervalsToActivity(hyp, grid, SpeakersOf(hyp));
  r.scored.assign(grid.n_frames(), 1);
  if (options.collar_ms > 0) {
    for (const auto &iv : ref) {
      for (Millis b : {iv.start_ms, iv.end_ms}) {
        // Centers in [b - collar, b + collar) are skipped.
        std::int64_t lo = std::max<std::int64_t>(
            0, (b - options.collar_ms) / grid.shift_ms() - 1);
        std::int64_t hi = std::min<std::int64_t>(
            grid.n_frames(), (b + options.collar_ms) / grid.shift_ms() + 1);
        for (std::int64_t t = lo; t < hi; ++t) {
          Millis c2 = grid.TwiceCenter(t);
          if (c2 >= 2 * (b - options.collar_ms) && c2 < 2 * (b + options.collar_ms))
            r.scored[t] = 0;
        }
      }
    }
  }
  return r;
}

DerReport Score(const Rasters &r, const std::vector<int> &ref_to_hyp,
                const DerOptions &options) {
  const std::size_t T = r.ref.n_frames();
  const std::size_t R = r.ref.n_speakers(), H = r.hyp.n_speakers();
  std::int64_t total = 0, missed = 0, fa = 0, conf = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (!r.scored[t]) continue;
    std::int64_t n_ref = 0, n_hyp = 0, n_correct = 0;
    for (std::size_t i = 0; i < R; ++i) n_ref += r.ref.values(t, i);
    for (std::size_t j = 0; j < H; ++j) n_hyp += r.hyp.values(t, j);
    for (std::size_t i = 0; i < R; ++i) {
      int j = ref_to_hyp[i];
      if (j >= 0 && r.ref.values(t, i) && r.hyp.values(t, j)) ++n_correct;
    }
    total += n_ref;
    missed += std::max<std::int64_t>(0, n_ref - n_hyp);
    fa += std::max<std::int64_t>(0, n_hyp - n_ref);
    conf += std::min(n_ref, n_hyp) - n_correct;
  }
  const double res = options.resolution_ms / 1000.0;
  DerReport rep;
  rep.collar_s = options.collar_ms / 1000.0;
  rep.reference_s = total * res;
  rep.missed_s = missed * res;
  rep.false_alarm_s = fa * res;
  rep.confusion_s = conf * res;
  if (total > 0) {
    rep.missed = static_cast<double>(missed) / total;
    rep.false_alarm = static_cast<double>(fa) / total;
    rep.confusion = static_cast<double>(conf) / total;
  } else if (fa > 0) {
    rep.false_alarm = std::numeric_limits<double>::infinity();
  }
  rep.der = rep.missed + rep.false_alarm + rep.confusion;
  return rep;
}

void FillMapping(const Rasters &r, const std::vector<int> &ref_to_hyp,
                 DerReport *rep) {
  for (std::size_t i = 0; i < ref_to_hyp.size(); ++i) {
    int j = ref_to_hyp[i];
    if (j < 0) continue;
    bool overlap = false;
    for (std::size_t t = 0; t < r.ref.n_frames() && !overlap; ++t)
      overlap = r.scored[t] && r.ref.values(t, i) && r.hyp.values(t, j);
    if (overlap) rep->mapping.emplace_back(r.ref.speakers[i], r.hyp.speakers[j]);
  }
}

}  // namespace

DerReport ComputeDer(const std::vector<SpeakerInterval> &ref,
                     const std::vector<SpeakerInterval> &hyp,
                     const DerOptions &options) {
  Rasters r = Rasterize(ref, hyp, options);
  const std::size_t R = r.ref.n_speakers(), H = r.hyp.n_speakers();
  Matrix<double> cost(R, H, 0.0);
  for (std::size_t t = 0; t < r.ref.n_frames(); ++t) {
    if (!r.scored[t]) continue;
    for (std::size_t i = 0; i < R; ++i) {
      if (!r.ref.values(t, i)) continue;
      for (std::size_t j = 0; j < H; ++j)
        if (r.hyp.values(t, j)) cost(i, j) -= 1.0;
    }
  }
  std::vector<int> ref_to_hyp(R, -1);
  if (R > 0 && H > 0) ref_to_hyp = Hungarian(cost).row_to_col;
  DerReport rep = Score(r, ref_to_hyp, options);
  FillMapping(r, ref_to_hyp, &rep);
  return rep;
}

DerReport DerWithMapping(
    const std::vector<SpeakerInterval> &ref,
    const std::vector<SpeakerInterval> &hyp,
    const std::vector<std::pair<std::string, std::string>> &mapping,
    const DerOptions &options) {
  Rasters r = Rasterize(ref, hyp, options);
  std::unordered_map<std::string, int> ref_index, hyp_index;
  for (std::size_t i = 0; i < r.ref.speakers.size(); ++i)
    ref_index[r.ref.speakers[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < r.hyp.speakers.size(); ++j)
    hyp_index[r.hyp.speakers[j]] = static_cast<int>(j);
  std::vector<int> ref_to_hyp(r.ref.n_speakers(), -1);
  std::vector<char> hyp_used(r.hyp.n_speakers(), 0);
  for (const auto &[rs, hs] : mapping) {
    auto ri = ref_index.find(rs);
    auto hi = hyp_index.find(hs);
    if (ri == ref_index.end() || hi == hyp_index.end()) continue;
    if (ref_to_hyp[ri->second] >= 0 || hyp_used[hi->second])
      throw InvalidArgument("speaker mapping is not one-to-one");
    ref_to_hyp[ri->second] = hi->second;
    hyp_used[hi->second] = 1;
  }
  DerReport rep = Score(r, ref_to_hyp, options);
  FillMapping(r, ref_to_hyp, &rep);
  return rep;
}

}  // namespace ssnd
