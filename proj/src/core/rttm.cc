// src/core/rttm.cc

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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssnd/core/io.h"

namespace ssnd {

namespace {

double ParseNumber(const std::string &token, const std::string &source,
                   int line, const char *field) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(source, line,
                     std::string("bad ") + field + " '" + token + "'");
  return value;
}

// Seconds with exactly three decimals from integer milliseconds.
std::string FormatMillis(Millis ms) {
  std::string sign = ms < 0 ? "-" : "";
  Millis a = ms < 0 ? -ms : ms;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", sign.c_str(),
                static_cast<long long>(a / 1000),
                static_cast<long long>(a % 1000));
  return buf;
}

}  // namespace

std::vector<SpeakerInterval> ParseRttm(std::istream &is,
                                       const std::string &source) {
  std::vector<SpeakerInterval> out;
  std::string text;
  int line_no = 0;
  while (std::getline(is, text)) {
    ++line_no;
    std::istringstream ls(text);
    std::vector<std::string> fields;
    for (std::string tok; ls >> tok;) fields.push_back(tok);
    if (fields.empty() || fields[0].rfind(";;", 0) == 0) continue;
    if (fields[0] != "SPEAKER") continue;
    if (fields.size() < 8)
      throw ParseError(source, line_no,
                       "SPEAKER record needs at least 8 fields");
    double onset = ParseNumber(fields[3], source, line_no, "onset");
    double dur = ParseNumber(fields[4], source, line_no, "duration");
    if (onset < 0.0) throw ParseError(source, line_no, "negative onset");
    if (dur <= 0.0) throw ParseError(source, line_no, "non-positive duration");
    Millis start = SecondsToMillis(onset);
    Millis length = SecondsToMillis(dur);
    if (length <= 0)
      throw ParseError(source, line_no, "duration rounds to zero ms");
    out.push_back({fields[7], start, start + length});
  }
  return out;
}

std::vector<SpeakerInterval> ReadRttm(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return ParseRttm(is, path);
}

void FormatRttm(const std::vector<SpeakerInterval> &intervals, std::ostream &os,
                const std::string &file_id) {
  for (const auto &iv : intervals) {
    os << "SPEAKER " << file_id << " 1 " << FormatMillis(iv.start_ms) << ' '
       << FormatMillis(iv.duration_ms()) << " <NA> <NA> " << iv.speaker
       << " <NA> <NA>\n";
  }
}

void WriteRttm(const std::vector<SpeakerInterval> &intervals,
               const std::string &path, const std::string &file_id) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  FormatRttm(intervals, os, file_id);
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace ssnd
