// src/diarpost/postprocess.cc

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

#include "ssnd/diarpost/postprocess.h"

#include <algorithm>
#include <cstdio>

#include "ssnd/core/activity.h"

namespace ssnd {

void PostProcessConfig::Validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InvalidArgument("threshold must lie in (0, 1)");
  if (median_len < 1 || median_len % 2 == 0)
    throw InvalidArgument("median filter length must be odd and positive");
  if (frame_shift_ms < 0) throw InvalidArgument("negative frame shift");
}

ActivityMatrix Threshold(const PosteriorMatrix &p, double tau) {
  ActivityMatrix y;
  y.grid = p.grid;
  y.values = Matrix<std::uint8_t>(p.n_frames(), p.n_speakers());
  for (std::size_t c = 0; c < p.n_speakers(); ++c)
    y.speakers.push_back(p.SpeakerLabel(c));
  auto in = p.values.data();
  auto out = y.values.data();
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] >= tau ? 1 : 0;
  return y;
}

ActivityMatrix MedianFilter(const ActivityMatrix &y, int len) {
  if (len < 1 || len % 2 == 0)
    throw InvalidArgument("median filter length must be odd, got " +
                          std::to_string(len));
  const std::int64_t T = y.n_frames(), half = len / 2;
  ActivityMatrix out = y;
  std::vector<std::int64_t> prefix(T + 1);
  for (std::size_t c = 0; c < y.n_speakers(); ++c) {
    for (std::int64_t t = 0; t < T; ++t) prefix[t + 1] = prefix[t] + y.values(t, c);
    for (std::int64_t t = 0; t < T; ++t) {
      std::int64_t r = std::min({half, t, T - 1 - t});
      std::int64_t ones = prefix[t + r + 1] - prefix[t - r];
      out.values(t, c) = 2 * ones > 2 * r + 1 ? 1 : 0;
    }
  }
  return out;
}

std::vector<SpeakerInterval> Decide(const PosteriorMatrix &p,
                                    const PostProcessConfig &cfg) {
  cfg.Validate();
  if (cfg.frame_shift_ms != 0 && cfg.frame_shift_ms != p.grid.shift_ms())
    throw InvalidArgument("posterior frame shift " +
                          std::to_string(p.grid.shift_ms()) +
                          " ms does not match configured " +
                          std::to_string(cfg.frame_shift_ms) + " ms");
  return ActivityToIntervals(MedianFilter(Threshold(p, cfg.threshold), cfg.median_len));
}

std::vector<SweepRow> TuningSweep(const std::vector<PosteriorMatrix> &posteriors,
                                  const std::vector<SpeakerInterval> &reference,
                                  const std::vector<double> &taus,
                                  int median_len, const DerOptions &der_options) {
  std::vector<SweepRow> rows;
  for (const auto &p : posteriors) {
    for (double tau : taus) {
      PostProcessConfig cfg;
      cfg.threshold = tau;
      cfg.median_len = median_len;
      SweepRow row;
      row.shift_ms = p.grid.shift_ms();
      row.tau = tau;
      row.der = ComputeDer(reference, Decide(p, cfg), der_options);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow> &rows, std::ostream &os) {
  os << "shift_ms,tau,der,mi,fa,cf\n";
  char buf[160];
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%.3f,%.6f,%.6f,%.6f,%.6f\n",
                  static_cast<long long>(r.shift_ms), r.tau, r.der.der,
                  r.der.missed, r.der.false_alarm, r.der.confusion);
    os << buf;
  }
}

}  // namespace ssnd
