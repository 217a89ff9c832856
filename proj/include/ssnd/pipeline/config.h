// include/ssnd/pipeline/config.h

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

#ifndef SSND_PIPELINE_CONFIG_H_
#define SSND_PIPELINE_CONFIG_H_

#include <cstdint>
#include <string>

#include "ssnd/diarpost/postprocess.h"
#include "ssnd/dsp/stft.h"
#include "ssnd/metrics/der.h"
#include "ssnd/streams/embedding.h"

namespace ssnd {

/// Environment variable naming the default config file.
inline constexpr const char *kConfigEnvVar = "SSND_CONFIG";

struct PipelineConfig {
  /// Diarization frontend; its shift is also the decision frame grid.
  StftConfig stft = StftConfig::Diarization();
  PostProcessConfig postprocess;
  std::size_t embedding_dim = 256;
  EmbeddingFallback fallback = EmbeddingFallback::kNone;
  Millis segment_size_ms = 30000;
  Millis segment_shift_ms = 27000;
  std::string diarizer = "oracle";   // "oracle" or "external"
  std::string separator = "oracle";  // "oracle" or "external"
  std::string recognizer = "oracle";  // "oracle" or "none"
  std::string diarizer_command;
  std::string separator_command;
  DerOptions der;
  std::uint64_t seed = 0;
  std::string output_dir;  // where `ssnd pipeline` writes artifacts; empty for none

  /// Throws InvalidArgument on inconsistent settings: bad STFT or
  /// post-processing values, size < shift, segment bounds off the frame
  /// grid, unknown model names or external models without a command.
  void Validate() const;
};

/// JSON object mirroring PipelineConfig; missing keys keep their defaults
/// and unknown keys are an error:
///   {"stft": {"window_ms", "shift_ms", "dft_size", "window"},
///    "postprocess": {"threshold", "median_len"},
///    "embedding_dim", "embedding_fallback",
///    "segment": {"size_s", "shift_s"},
///    "diarizer", "separator", "recognizer",
///    "diarizer_command", "separator_command",
///    "der": {"collar_ms", "resolution_ms"},
///    "seed", "output_dir"}
PipelineConfig ParseConfig(const std::string &json_text,
                           const std::string &source = "<config>");
PipelineConfig LoadConfig(const std::string &path);
std::string ConfigToJson(const PipelineConfig &cfg);

/// `path` if nonempty, else $SSND_CONFIG if set, else the defaults.
PipelineConfig ResolveConfig(const std::string &path = "");

}  // namespace ssnd

#endif  // SSND_PIPELINE_CONFIG_H_
