// src/core/transcripts.cc

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

#include "ssnd/core/io.h"

namespace ssnd {

namespace {

std::vector<std::string> SplitTabs(const std::string &line, std::size_t max) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (out.size() + 1 < max) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) break;
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  out.push_back(line.substr(pos));
  return out;
}

Millis ParseSeconds(const std::string &tok, const std::string &source,
                    int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(source, line, "bad time '" + tok + "'");
  return SecondsToMillis(v);
}

}  // namespace

std::vector<TranscriptRecord> ParseTranscripts(std::istream &is,
                                               const std::string &source) {
  std::vector<TranscriptRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto f = SplitTabs(line, 5);
    if (f.size() != 5)
      throw ParseError(source, line_no,
                       "expected 5 tab-separated fields "
                       "(session, speaker, start, end, text)");
    TranscriptRecord r{f[0], f[1], ParseSeconds(f[2], source, line_no),
                       ParseSeconds(f[3], source, line_no), f[4]};
    if (r.end_ms < r.start_ms)
      throw ParseError(source, line_no, "end before start");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TranscriptRecord> ReadTranscripts(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return ParseTranscripts(is, path);
}

void WriteTranscripts(const std::vector<TranscriptRecord> &records,
                      const std::string &path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  for (const auto &r : records) {
    char times[64];
    std::snprintf(times, sizeof(times), "%lld.%03lld\t%lld.%03lld",
                  static_cast<long long>(r.start_ms / 1000),
                  static_cast<long long>(r.start_ms % 1000),
                  static_cast<long long>(r.end_ms / 1000),
                  static_cast<long long>(r.end_ms % 1000));
    os << r.session << '\t' << r.speaker << '\t' << times << '\t' << r.text
       << '\n';
  }
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace ssnd
