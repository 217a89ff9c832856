// src/simulate/session-io.cc

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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssnd/simulate/session.h"

namespace ssnd {

namespace {

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseNum(const std::string &tok, const std::string &source, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw ParseError(source, line, "bad number '" + tok + "'");
  }
}

const char *NoiseName(NoiseKind k) {
  return k == NoiseKind::kDiffuse ? "diffuse" : "uncorrelated";
}

}  // namespace

void WriteManifest(const Session &session, std::ostream &os) {
  const SessionSpec &sp = session.spec;
  os << "session " << session.id << '\n'
     << "sample_rate " << session.mixture.sample_rate << '\n'
     << "n_channels " << session.mixture.n_channels() << '\n'
     << "n_samples " << session.mixture.n_samples() << '\n'
     << "snr_db " << Num(session.snr_db) << '\n'
     << "overlap_ratio " << Num(session.overlap_ratio) << '\n';
  for (std::size_t k = 0; k < session.speakers.size(); ++k)
    os << "speaker " << session.speakers[k] << ' ' << Num(session.azimuths[k])
       << ' ' << Num(session.levels_db[k]) << '\n';
  os << "spec.seed " << sp.seed << '\n'
     << "spec.n_speakers " << sp.n_speakers << '\n'
     << "spec.utterances_per_speaker " << sp.min_utterances_per_speaker << ' '
     << sp.max_utterances_per_speaker << '\n'
     << "spec.overlap_range " << Num(sp.overlap_range.first) << ' '
     << Num(sp.overlap_range.second) << '\n'
     << "spec.silence_range_s " << Num(sp.silence_range_s.first) << ' '
     << Num(sp.silence_range_s.second) << '\n'
     << "spec.silence_prob " << Num(sp.silence_prob) << '\n'
     << "spec.level_range_db " << Num(sp.level_range_db.first) << ' '
     << Num(sp.level_range_db.second) << '\n'
     << "spec.snr_range_db " << Num(sp.snr_range_db.first) << ' '
     << Num(sp.snr_range_db.second) << '\n'
     << "spec.noise_kind " << NoiseName(sp.noise_kind) << '\n'
     << "spec.min_azimuth_sep_deg " << Num(sp.min_azimuth_sep_deg) << '\n'
     << "spec.min_solo_s " << Num(sp.min_solo_s) << '\n'
     << "spec.tail_s " << Num(sp.tail_s) << '\n'
     << "spec.sample_rate " << sp.sample_rate << '\n';
}

void WriteSession(const Session &session, const std::string &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "sources", ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  WriteWav(session.mixture, (fs::path(dir) / "mixture.wav").string());
  MultichannelAudio noise;
  noise.sample_rate = session.mixture.sample_rate;
  noise.samples = session.noise;
  if (!noise.samples.empty())
    WriteWav(noise, (fs::path(dir) / "noise.wav").string());
  for (std::size_t k = 0; k < session.speakers.size(); ++k) {
    MultichannelAudio src;
    src.sample_rate = session.mixture.sample_rate;
    src.samples = Matrix<double>(1, session.sources.cols());
    std::copy_n(session.sources.Row(k).begin(), session.sources.cols(),
                src.samples.Row(0).begin());
    WriteWav(src, (fs::path(dir) / "sources" / (session.speakers[k] + ".wav")).string());
  }
  WriteRttm(session.intervals, (fs::path(dir) / "ref.rttm").string(), session.id);
  WriteTranscripts(session.transcripts, (fs::path(dir) / "transcripts.tsv").string());
  std::ofstream os(fs::path(dir) / "manifest.txt");
  if (!os) throw IoError("cannot write manifest in " + dir);
  WriteManifest(session, os);
  if (!os) throw IoError("error writing manifest in " + dir);
}

Session ReadSession(const std::string &dir) {
  namespace fs = std::filesystem;
  const std::string manifest = (fs::path(dir) / "manifest.txt").string();
  std::ifstream is(manifest);
  if (!is) throw IoError("cannot open " + manifest);
  Session s;
  std::string text;
  int line_no = 0;
  auto pair_of = [&](std::istringstream &ls) {
    std::string a, b;
    ls >> a >> b;
    return Range{ParseNum(a, manifest, line_no), ParseNum(b, manifest, line_no)};
  };
  while (std::getline(is, text)) {
    ++line_no;
    std::istringstream ls(text);
    std::string key;
    if (!(ls >> key)) continue;
    std::string v;
    if (key == "session") {
      ls >> s.id;
    } else if (key == "snr_db") {
      ls >> v;
      s.snr_db = ParseNum(v, manifest, line_no);
    } else if (key == "overlap_ratio") {
      ls >> v;
      s.overlap_ratio = ParseNum(v, manifest, line_no);
    } else if (key == "speaker") {
      std::string name, az, lv;
      if (!(ls >> name >> az >> lv)) throw ParseError(manifest, line_no, "short speaker record");
      s.speakers.push_back(name);
      s.azimuths.push_back(ParseNum(az, manifest, line_no));
      s.levels_db.push_back(ParseNum(lv, manifest, line_no));
    } else if (key == "spec.seed") {
      ls >> s.spec.seed;
    } else if (key == "spec.n_speakers") {
      ls >> s.spec.n_speakers;
    } else if (key == "spec.utterances_per_speaker") {
      ls >> s.spec.min_utterances_per_speaker >> s.spec.max_utterances_per_speaker;
    } else if (key == "spec.overlap_range") {
      s.spec.overlap_range = pair_of(ls);
    } else if (key == "spec.silence_range_s") {
      s.spec.silence_range_s = pair_of(ls);
    } else if (key == "spec.silence_prob") {
      ls >> v;
      s.spec.silence_prob = ParseNum(v, manifest, line_no);
    } else if (key == "spec.level_range_db") {
      s.spec.level_range_db = pair_of(ls);
    } else if (key == "spec.snr_range_db") {
      s.spec.snr_range_db = pair_of(ls);
    } else if (key == "spec.noise_kind") {
      ls >> v;
      s.spec.noise_kind = v == "diffuse" ? NoiseKind::kDiffuse : NoiseKind::kUncorrelated;
    } else if (key == "spec.min_azimuth_sep_deg") {
      ls >> v;
      s.spec.min_azimuth_sep_deg = ParseNum(v, manifest, line_no);
    } else if (key == "spec.min_solo_s") {
      ls >> v;
      s.spec.min_solo_s = ParseNum(v, manifest, line_no);
    } else if (key == "spec.tail_s") {
      ls >> v;
      s.spec.tail_s = ParseNum(v, manifest, line_no);
    } else if (key == "spec.sample_rate") {
      ls >> s.spec.sample_rate;
    }
    // sample_rate, n_channels and n_samples are implied by mixture.wav.
  }
  s.mixture = ReadWav((fs::path(dir) / "mixture.wav").string());
  s.mixture.geometry = CircularArrayGeometry();
  if (s.mixture.geometry->size() != s.mixture.n_channels()) s.mixture.geometry.reset();
  const auto noise_path = fs::path(dir) / "noise.wav";
  if (fs::exists(noise_path))
    s.noise = ReadWav(noise_path.string()).samples;
  else
    s.noise = Matrix<double>(s.mixture.n_channels(), s.mixture.n_samples());
  s.sources = Matrix<double>(s.speakers.size(), s.mixture.n_samples());
  for (std::size_t k = 0; k < s.speakers.size(); ++k) {
    auto src = ReadWav((fs::path(dir) / "sources" / (s.speakers[k] + ".wav")).string());
    if (src.n_samples() != s.mixture.n_samples())
      throw ShapeMismatch("source " + s.speakers[k] + " length differs from mixture");
    std::copy_n(src.Channel(0).begin(), src.n_samples(), s.sources.Row(k).begin());
  }
  s.intervals = ReadRttm((fs::path(dir) / "ref.rttm").string());
  SortIntervals(&s.intervals);
  s.transcripts = ReadTranscripts((fs::path(dir) / "transcripts.tsv").string());
  return s;
}

}  // namespace ssnd
