// include/ssnd/diarpost/postprocess.h

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

#ifndef SSND_DIARPOST_POSTPROCESS_H_
#define SSND_DIARPOST_POSTPROCESS_H_

#include <ostream>
#include <vector>

#include "ssnd/core/types.h"
#include "ssnd/metrics/der.h"

namespace ssnd {

struct PostProcessConfig {
  double threshold = 0.5;
  int median_len = 31;  // frames, odd
  /// Expected posterior frame shift; 0 accepts whatever grid is given.
  Millis frame_shift_ms = 0;

  /// Throws InvalidArgument unless 0 < threshold < 1, median_len is odd and
  /// positive and frame_shift_ms >= 0.
  void Validate() const;
};

/// y = 1 iff p >= tau.
ActivityMatrix Threshold(const PosteriorMatrix &p, double tau);

/// Per-speaker majority vote over a centered window of `len` frames. Near
/// the ends the window shrinks symmetrically (radius min(len/2, t, T-1-t)),
/// so no activity is invented or shifted at session boundaries. Throws
/// InvalidArgument on an even or non-positive length.
ActivityMatrix MedianFilter(const ActivityMatrix &y, int len = 31);

/// Threshold, median filter, then run extraction. Speaker names come from
/// the posterior column labels.
std::vector<SpeakerInterval> Decide(const PosteriorMatrix &p,
                                    const PostProcessConfig &cfg);

struct SweepRow {
  Millis shift_ms = 0;
  double tau = 0.0;
  DerReport der;
};

/// One row per (posterior grid, tau), scoring Decide() against `reference`.
/// Rows are ordered by input posterior, then by tau.
std::vector<SweepRow> TuningSweep(const std::vector<PosteriorMatrix> &posteriors,
                                  const std::vector<SpeakerInterval> &reference,
                                  const std::vector<double> &taus,
                                  int median_len = 31,
                                  const DerOptions &der_options = {});

/// shift_ms,tau,der,mi,fa,cf
void WriteSweepCsv(const std::vector<SweepRow> &rows, std::ostream &os);

}  // namespace ssnd

#endif  // SSND_DIARPOST_POSTPROCESS_H_
