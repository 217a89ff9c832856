// src/pipeline/config.cc

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

#include "ssnd/pipeline/config.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ssnd {

using json = nlohmann::json;

void PipelineConfig::Validate() const {
  stft.Validate();
  postprocess.Validate();
  if (postprocess.frame_shift_ms != 0 && postprocess.frame_shift_ms != stft.shift_ms)
    throw InvalidArgument("post-processing frame shift differs from the STFT shift");
  if (embedding_dim == 0) throw InvalidArgument("embedding_dim must be positive");
  if (segment_shift_ms <= 0 || segment_size_ms < segment_shift_ms)
    throw InvalidArgument("segment size must be >= shift > 0");
  if (segment_size_ms % stft.shift_ms || segment_shift_ms % stft.shift_ms)
    throw InvalidArgument("segment size and shift must be multiples of the frame shift");
  if (stft.shift_ms * stft.sample_rate % 1000)
    throw InvalidArgument("frame shift must be a whole number of samples");
  if (diarizer != "oracle" && diarizer != "external")
    throw InvalidArgument("unknown diarizer '" + diarizer + "'");
  if (separator != "oracle" && separator != "external")
    throw InvalidArgument("unknown separator '" + separator + "'");
  if (recognizer != "oracle" && recognizer != "none")
    throw InvalidArgument("unknown recognizer '" + recognizer + "'");
  if (diarizer == "external" && diarizer_command.empty())
    throw InvalidArgument("external diarizer needs diarizer_command");
  if (separator == "external" && separator_command.empty())
    throw InvalidArgument("external separator needs separator_command");
  if (der.collar_ms < 0 || der.resolution_ms <= 0)
    throw InvalidArgument("bad DER options");
}

namespace {

void CheckKeys(const json &j, const std::set<std::string> &allowed,
               const std::string &where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw InvalidArgument("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void Get(const json &j, const char *key, T *out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

Millis SecondsKey(const json &j, const char *key, Millis fallback) {
  if (!j.contains(key)) return fallback;
  return SecondsToMillis(j.at(key).get<double>());
}

}  // namespace

PipelineConfig ParseConfig(const std::string &json_text, const std::string &source) {
  PipelineConfig cfg;
  try {
    json j = json::parse(json_text);
    CheckKeys(j,
              {"stft", "postprocess", "embedding_dim", "embedding_fallback", "segment",
               "diarizer", "separator", "recognizer", "diarizer_command",
               "separator_command", "der", "seed", "output_dir"},
              "config");
    if (j.contains("stft")) {
      const auto &s = j["stft"];
      CheckKeys(s, {"window_ms", "shift_ms", "dft_size", "window", "sample_rate"}, "stft");
      Get(s, "window_ms", &cfg.stft.window_ms);
      Get(s, "shift_ms", &cfg.stft.shift_ms);
      Get(s, "dft_size", &cfg.stft.dft_size);
      Get(s, "sample_rate", &cfg.stft.sample_rate);
      if (s.contains("window")) {
        auto w = s["window"].get<std::string>();
        if (w == "sqrt-hann")
          cfg.stft.window_kind = WindowKind::kSqrtHann;
        else if (w == "rectangular")
          cfg.stft.window_kind = WindowKind::kRectangular;
        else
          throw InvalidArgument("unknown window '" + w + "'");
      }
    }
    if (j.contains("postprocess")) {
      const auto &p = j["postprocess"];
      CheckKeys(p, {"threshold", "median_len"}, "postprocess");
      Get(p, "threshold", &cfg.postprocess.threshold);
      Get(p, "median_len", &cfg.postprocess.median_len);
    }
    Get(j, "embedding_dim", &cfg.embedding_dim);
    if (j.contains("embedding_fallback"))
      cfg.fallback = j["embedding_fallback"].get<bool>()
                         ? EmbeddingFallback::kAllActiveFrames
                         : EmbeddingFallback::kNone;
    if (j.contains("segment")) {
      const auto &s = j["segment"];
      CheckKeys(s, {"size_s", "shift_s"}, "segment");
      cfg.segment_size_ms = SecondsKey(s, "size_s", cfg.segment_size_ms);
      cfg.segment_shift_ms = SecondsKey(s, "shift_s", cfg.segment_shift_ms);
    }
    Get(j, "diarizer", &cfg.diarizer);
    Get(j, "separator", &cfg.separator);
    Get(j, "recognizer", &cfg.recognizer);
    Get(j, "diarizer_command", &cfg.diarizer_command);
    Get(j, "separator_command", &cfg.separator_command);
    if (j.contains("der")) {
      const auto &d = j["der"];
      CheckKeys(d, {"collar_ms", "resolution_ms"}, "der");
      Get(d, "collar_ms", &cfg.der.collar_ms);
      Get(d, "resolution_ms", &cfg.der.resolution_ms);
    }
    Get(j, "seed", &cfg.seed);
    Get(j, "output_dir", &cfg.output_dir);
  } catch (const json::exception &e) {
    throw ParseError(source, 0, e.what());
  } catch (const InvalidArgument &e) {
    throw ParseError(source, 0, e.what());
  }
  cfg.postprocess.frame_shift_ms = cfg.stft.shift_ms;
  cfg.Validate();
  return cfg;
}

PipelineConfig LoadConfig(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ParseConfig(ss.str(), path);
}

std::string ConfigToJson(const PipelineConfig &cfg) {
  json j = {
      {"stft",
       {{"window_ms", cfg.stft.window_ms},
        {"shift_ms", cfg.stft.shift_ms},
        {"dft_size", cfg.stft.dft_size},
        {"sample_rate", cfg.stft.sample_rate},
        {"window",
         cfg.stft.window_kind == WindowKind::kSqrtHann ? "sqrt-hann" : "rectangular"}}},
      {"postprocess",
       {{"threshold", cfg.postprocess.threshold},
        {"median_len", cfg.postprocess.median_len}}},
      {"embedding_dim", cfg.embedding_dim},
      {"embedding_fallback", cfg.fallback == EmbeddingFallback::kAllActiveFrames},
      {"segment",
       {{"size_s", MillisToSeconds(cfg.segment_size_ms)},
        {"shift_s", MillisToSeconds(cfg.segment_shift_ms)}}},
      {"diarizer", cfg.diarizer},
      {"separator", cfg.separator},
      {"recognizer", cfg.recognizer},
      {"diarizer_command", cfg.diarizer_command},
      {"separator_command", cfg.separator_command},
      {"der", {{"collar_ms", cfg.der.collar_ms}, {"resolution_ms", cfg.der.resolution_ms}}},
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
  };
  return j.dump(2);
}

PipelineConfig ResolveConfig(const std::string &path) {
  if (!path.empty()) return LoadConfig(path);
  if (const char *env = std::getenv(kConfigEnvVar); env && *env) return LoadConfig(env);
  PipelineConfig cfg;
  cfg.postprocess.frame_shift_ms = cfg.stft.shift_ms;
  cfg.Validate();
  return cfg;
}

}  // namespace ssnd
