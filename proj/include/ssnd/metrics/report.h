// include/ssnd/metrics/report.h

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

#ifndef SSND_METRICS_REPORT_H_
#define SSND_METRICS_REPORT_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ssnd/metrics/der.h"
#include "ssnd/metrics/wer.h"

namespace ssnd {

/// Scores for one session, tagged with its evaluation condition
/// (for example "0S", "0L", "10%").
struct SessionScore {
  std::string session;
  std::string condition;
  std::optional<DerReport> der;
  std::optional<WerReport> cpwer;
};

/// Pooled scores: DER terms weighted by reference time, cpWER by
/// reference words.
struct ConditionRow {
  std::string condition;
  int n_sessions = 0;
  std::optional<DerReport> der;
  std::optional<WerReport> cpwer;
};

/// One row per condition, in order of first appearance.
std::vector<ConditionRow> AggregateByCondition(
    const std::vector<SessionScore> &scores);

/// All sessions pooled into one row labelled "all".
ConditionRow AggregateAll(const std::vector<SessionScore> &scores);

// CSV headers: session,condition,der,mi,fa,cf and
// session,condition,cpwer,S,D,I
void WriteDerCsv(const std::vector<SessionScore> &scores, std::ostream &os);
void WriteCpwerCsv(const std::vector<SessionScore> &scores, std::ostream &os);
/// condition,sessions,der,mi,fa,cf,cpwer
void WriteConditionCsv(const std::vector<ConditionRow> &rows, std::ostream &os);

}  // namespace ssnd

#endif  // SSND_METRICS_REPORT_H_
