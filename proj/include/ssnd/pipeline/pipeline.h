// include/ssnd/pipeline/pipeline.h

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

#ifndef SSND_PIPELINE_PIPELINE_H_
#define SSND_PIPELINE_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "ssnd/metrics/der.h"
#include "ssnd/metrics/wer.h"
#include "ssnd/pipeline/config.h"
#include "ssnd/pipeline/models.h"
#include "ssnd/streams/assign.h"
#include "ssnd/streams/segment.h"

namespace ssnd {

/// An error raised inside one pipeline stage, tagged with the stage name.
class PipelineError : public Error {
 public:
  PipelineError(const std::string &stage, const std::string &what)
      : Error(stage + ": " + what), stage_(stage) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

struct StageTime {
  std::string stage;
  double ms = 0.0;
};

struct PipelineResult {
  std::string session;
  FrameGrid grid;
  std::vector<SpeakerInterval> decided;
  std::vector<SpeakerEmbedding> embeddings;
  StreamAssignment assignment;
  SegmentPlan plan;
  Matrix<double> streams;  // 2 x N, concatenated emit regions
  /// 2 x N, from the decided intervals; each decided speaker takes the
  /// source of the reference speaker the DER mapping pairs it with.
  Matrix<double> targets;
  double max_abs_error = 0.0;      // streams against targets
  double sum_max_abs_error = 0.0;  // stream sum against the sum of sources
  DerReport der;
  std::vector<TranscriptRecord> hypothesis;
  std::optional<CpwerResult> cpwer;  // unset without a recognizer or words
  std::vector<StageTime> timing;
};

struct PipelineModels {
  DiarizerInterface *diarizer = nullptr;
  SeparatorInterface *separator = nullptr;
  RecognizerInterface *recognizer = nullptr;  // optional
};

/// diarize -> post-process -> embeddings -> assign -> sequences -> plan ->
/// separate per segment (keeping each emit region) -> score -> targets.
/// Every error is rethrown as PipelineError naming the stage.
PipelineResult RunPipeline(const PipelineConfig &cfg, const Session &session,
                           const PipelineModels &models);

/// Builds the models named in `cfg` (oracles bound to `session`).
PipelineResult RunPipeline(const PipelineConfig &cfg, const Session &session);

/// JSON report; stage timings are included only when `with_timing`.
std::string ReportJson(const PipelineResult &result, bool with_timing = false);

/// streams.wav, hyp.rttm, assignment.txt, hyp-transcripts.tsv and
/// report.json (without timings) under `dir`.
void WritePipelineArtifacts(const PipelineResult &result, const std::string &dir,
                            int sample_rate = 16000);

}  // namespace ssnd

#endif  // SSND_PIPELINE_PIPELINE_H_
