// include/ssnd/metrics/der.h

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

#ifndef SSND_METRICS_DER_H_
#define SSND_METRICS_DER_H_

#include <string>
#include <utility>
#include <vector>

#include "ssnd/core/types.h"

namespace ssnd {

struct DerOptions {
  Millis collar_ms = 0;
  Millis resolution_ms = 10;
};

/// Error fractions are relative to total reference speaker time. When the
/// reference is empty they are 0 if the hypothesis is empty too, and the
/// false-alarm fraction is +inf otherwise.
struct DerReport {
  double der = 0.0;
  double missed = 0.0;
  double false_alarm = 0.0;
  double confusion = 0.0;
  double collar_s = 0.0;

  // Absolute seconds, for pooling across sessions.
  double reference_s = 0.0;
  double missed_s = 0.0;
  double false_alarm_s = 0.0;
  double confusion_s = 0.0;

  /// (reference speaker, hypothesis speaker) pairs with nonzero overlap.
  std::vector<std::pair<std::string, std::string>> mapping;
};

/// Frame-based DER. Both sides are rasterized at `resolution_ms` using frame
/// centers; frames whose center lies within the collar of a reference
/// boundary are skipped. Reference and hypothesis speakers are matched
/// one-to-one to maximize jointly active time.
DerReport ComputeDer(const std::vector<SpeakerInterval> &ref,
                     const std::vector<SpeakerInterval> &hyp,
                     const DerOptions &options = {});

/// DER under a fixed speaker mapping; speakers absent from `mapping` are
/// unmatched.
DerReport DerWithMapping(
    const std::vector<SpeakerInterval> &ref,
    const std::vector<SpeakerInterval> &hyp,
    const std::vector<std::pair<std::string, std::string>> &mapping,
    const DerOptions &options = {});

}  // namespace ssnd

#endif  // SSND_METRICS_DER_H_
