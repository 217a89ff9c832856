// include/ssnd/core/io.h

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

#ifndef SSND_CORE_IO_H_
#define SSND_CORE_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssnd/core/types.h"

namespace ssnd {

// RTTM SPEAKER records:
//   SPEAKER <file> <chnl> <onset> <dur> <NA> <NA> <speaker> <NA> <NA>
// Onset and duration are written with millisecond precision. Lines that are
// empty, comments (";;"), or other record types are skipped on read.
std::vector<SpeakerInterval> ReadRttm(const std::string &path);
std::vector<SpeakerInterval> ParseRttm(std::istream &is,
                                       const std::string &source = "<rttm>");
void WriteRttm(const std::vector<SpeakerInterval> &intervals,
               const std::string &path, const std::string &file_id = "session");
void FormatRttm(const std::vector<SpeakerInterval> &intervals, std::ostream &os,
                const std::string &file_id = "session");

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads PCM16 or IEEE float32 RIFF/WAVE; samples are scaled to [-1, 1].
/// Throws IoError for other encodings and for files with no samples.
MultichannelAudio ReadWav(const std::string &path);
void WriteWav(const MultichannelAudio &audio, const std::string &path,
              WavEncoding encoding = WavEncoding::kFloat32);

/// One utterance of a transcript manifest. On disk each record is a
/// tab-separated line: session, speaker, start, end, text.
struct TranscriptRecord {
  std::string session;
  std::string speaker;
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::string text;

  friend bool operator==(const TranscriptRecord &,
                         const TranscriptRecord &) = default;
};

std::vector<TranscriptRecord> ReadTranscripts(const std::string &path);
std::vector<TranscriptRecord> ParseTranscripts(std::istream &is,
                                               const std::string &source);
void WriteTranscripts(const std::vector<TranscriptRecord> &records,
                      const std::string &path);

// Binary matrix file, little-endian:
//   bytes 0-7   magic "SSNDMAT1"
//   bytes 8-11  uint32 kind (MatrixKind)
//   bytes 12-15 uint32 reserved, zero
//   bytes 16-23 uint64 rows
//   bytes 24-31 uint64 cols
//   bytes 32-39 int64 grid shift in ms (0 if no grid)
//   bytes 40-47 int64 grid window in ms (0 if no grid)
//   then rows*cols float64 values, row-major.
enum class MatrixKind : std::uint32_t {
  kGeneric = 0,
  kLogMel = 1,
  kSpliced = 2,
  kIpd = 3,
  kFused = 4,
  kPosterior = 5,
  kEmbedding = 6,
};

struct MatrixFile {
  MatrixKind kind = MatrixKind::kGeneric;
  Millis shift_ms = 0;
  Millis window_ms = 0;
  Matrix<double> values;
};

void WriteMatrixFile(const MatrixFile &file, const std::string &path);
MatrixFile ReadMatrixFile(const std::string &path);

}  // namespace ssnd

#endif  // SSND_CORE_IO_H_
