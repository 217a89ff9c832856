// src/metrics/report.cc

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

#include "ssnd/metrics/report.h"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace ssnd {

namespace {

void Pool(const SessionScore &s, ConditionRow *row) {
  ++row->n_sessions;
  if (s.der) {
    if (!row->der) row->der = DerReport{};
    DerReport &d = *row->der;
    d.collar_s = s.der->collar_s;
    d.reference_s += s.der->reference_s;
    d.missed_s += s.der->missed_s;
    d.false_alarm_s += s.der->false_alarm_s;
    d.confusion_s += s.der->confusion_s;
  }
  if (s.cpwer) {
    if (!row->cpwer) row->cpwer = WerReport{};
    *row->cpwer += *s.cpwer;
  }
}

void Finish(ConditionRow *row) {
  if (!row->der) return;
  DerReport &d = *row->der;
  if (d.reference_s > 0) {
    d.missed = d.missed_s / d.reference_s;
    d.false_alarm = d.false_alarm_s / d.reference_s;
    d.confusion = d.confusion_s / d.reference_s;
  } else {
    d.missed = d.confusion = 0.0;
    d.false_alarm =
        d.false_alarm_s > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  d.der = d.missed + d.false_alarm + d.confusion;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::vector<ConditionRow> AggregateByCondition(
    const std::vector<SessionScore> &scores) {
  std::vector<ConditionRow> rows;
  for (const auto &s : scores) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ConditionRow &r) {
      return r.condition == s.condition;
    });
    if (it == rows.end()) {
      rows.push_back({s.condition, 0, std::nullopt, std::nullopt});
      it = rows.end() - 1;
    }
    Pool(s, &*it);
  }
  for (auto &r : rows) Finish(&r);
  return rows;
}

ConditionRow AggregateAll(const std::vector<SessionScore> &scores) {
  ConditionRow row{"all", 0, std::nullopt, std::nullopt};
  for (const auto &s : scores) Pool(s, &row);
  Finish(&row);
  return row;
}

void WriteDerCsv(const std::vector<SessionScore> &scores, std::ostream &os) {
  os << "session,condition,der,mi,fa,cf\n";
  for (const auto &s : scores) {
    if (!s.der) continue;
    os << s.session << ',' << s.condition << ',' << Num(s.der->der) << ','
       << Num(s.der->missed) << ',' << Num(s.der->false_alarm) << ','
       << Num(s.der->confusion) << '\n';
  }
}

void WriteCpwerCsv(const std::vector<SessionScore> &scores, std::ostream &os) {
  os << "session,condition,cpwer,S,D,I\n";
  for (const auto &s : scores) {
    if (!s.cpwer) continue;
    os << s.session << ',' << s.condition << ',' << Num(s.cpwer->wer()) << ','
       << s.cpwer->substitutions << ',' << s.cpwer->deletions << ','
       << s.cpwer->insertions << '\n';
  }
}

void WriteConditionCsv(const std::vector<ConditionRow> &rows, std::ostream &os) {
  os << "condition,sessions,der,mi,fa,cf,cpwer\n";
  for (const auto &r : rows) {
    os << r.condition << ',' << r.n_sessions << ',';
    if (r.der)
      os << Num(r.der->der) << ',' << Num(r.der->missed) << ','
         << Num(r.der->false_alarm) << ',' << Num(r.der->confusion);
    else
      os << ",,,";
    os << ',';
    if (r.cpwer) os << Num(r.cpwer->wer());
    os << '\n';
  }
}

}  // namespace ssnd
