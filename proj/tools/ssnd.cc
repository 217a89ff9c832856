// tools/ssnd.cc

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

// ssnd: command-line front end.
//
//   ssnd simulate    --seed N --out DIR          session files
//   ssnd featurize   --wav IN --out OUT.mat      log-Mel / spliced / IPD
//   ssnd decide      --posteriors P.mat --out H.rttm
//   ssnd assign      --rttm H.rttm [--embeddings E.mat] [--out-dir DIR]
//   ssnd plan        --length S --size S --shift S
//   ssnd score-der   REF.rttm HYP.rttm
//   ssnd score-cpwer REF.tsv HYP.tsv
//   ssnd sweep       --ref REF.rttm --posteriors P.mat... [--tau T...]
//   ssnd pipeline    (--session DIR | --seed N) [--config C.json]
//
// Every subcommand accepts --json for machine-readable output on stdout.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssnd/core/io.h"
#include "ssnd/diarpost/postprocess.h"
#include "ssnd/dsp/features.h"
#include "ssnd/metrics/der.h"
#include "ssnd/metrics/wer.h"
#include "ssnd/pipeline/pipeline.h"
#include "ssnd/simulate/session.h"
#include "ssnd/streams/assemble.h"
#include "ssnd/streams/segment.h"

namespace {

using namespace ssnd;
using json = nlohmann::json;
namespace fs = std::filesystem;

json Num(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

json DerJson(const DerReport &d) {
  json mapping = json::array();
  for (const auto &[r, h] : d.mapping) mapping.push_back({r, h});
  return {{"der", Num(d.der)},         {"missed", Num(d.missed)},
          {"false_alarm", Num(d.false_alarm)}, {"confusion", Num(d.confusion)},
          {"reference_s", d.reference_s}, {"mapping", mapping}};
}

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Session options shared by `simulate` and `pipeline --seed`.
struct SimulateArgs {
  std::uint64_t seed = 0;
  int speakers = 8;
  std::string recipe = "diarization";
  bool no_noise = false;
  double min_len_s = 2.0;
  double max_len_s = 6.0;

  void Add(CLI::App *app) {
    app->add_option("--seed", seed, "Session seed");
    app->add_option("--speakers", speakers, "Number of speakers")->check(CLI::PositiveNumber);
    app->add_option("--recipe", recipe, "diarization or separation")
        ->check(CLI::IsMember({"diarization", "separation"}));
    app->add_flag("--no-noise", no_noise, "Skip the additive noise");
    app->add_option("--min-len", min_len_s, "Shortest synthetic utterance (s)");
    app->add_option("--max-len", max_len_s, "Longest synthetic utterance (s)");
  }

  Session Generate() const {
    SessionSpec spec = recipe == "separation" ? SessionSpec::Separation()
                                              : SessionSpec::Diarization();
    spec.n_speakers = speakers;
    spec.seed = seed;
    if (no_noise) spec.snr_range_db = {INFINITY, INFINITY};
    SyntheticPoolOptions pool;
    pool.n_speakers = speakers;
    pool.utterances_per_speaker = spec.max_utterances_per_speaker;
    pool.min_len_s = min_len_s;
    pool.max_len_s = max_len_s;
    pool.seed = seed ^ 0x5eed5eed5eedULL;
    return GenerateSession(spec, MakeSyntheticPool(pool), "seed" + std::to_string(seed));
  }
};

int Simulate(const SimulateArgs &args, const std::string &out, bool as_json) {
  auto s = args.Generate();
  WriteSession(s, out);
  if (as_json) {
    json j = {{"session", s.id},
              {"dir", out},
              {"n_channels", s.mixture.n_channels()},
              {"n_samples", s.mixture.n_samples()},
              {"n_intervals", s.intervals.size()},
              {"overlap_ratio", s.overlap_ratio},
              {"snr_db", Num(s.snr_db)}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << s.id << ": " << s.intervals.size() << " utterances, "
              << Fixed(MillisToSeconds(s.DurationMs()), 2) << " s, overlap "
              << Fixed(s.overlap_ratio, 3) << " -> " << out << '\n';
  }
  return 0;
}

int Featurize(const std::string &wav, const std::string &out, const std::string &kind,
              bool normalize, std::size_t subsample, bool as_json) {
  auto audio = ReadWav(wav);
  auto cfg = StftConfig::Diarization();
  cfg.sample_rate = audio.sample_rate;
  FeatureMatrix f;
  MatrixKind mk;
  if (kind == "ipd") {
    std::vector<Spectrogram> specs;
    for (std::size_t m = 0; m < audio.n_channels(); ++m)
      specs.push_back(Stft(audio.Channel(m), cfg, m));
    f = Ipd(specs, audio.reference);
    mk = MatrixKind::kIpd;
  } else {
    f = LogMel(Stft(audio.Channel(audio.reference), cfg, audio.reference));
    mk = MatrixKind::kLogMel;
    if (kind == "spliced") {
      f = Splice(f);
      mk = MatrixKind::kSpliced;
    }
  }
  if (normalize) f = Normalize(f).features;
  if (subsample > 1) f = Subsample(f, subsample);
  WriteMatrixFile({mk, f.grid.shift_ms(), f.grid.window_ms(), f.values}, out);
  if (as_json)
    std::cout << json{{"frames", f.n_frames()}, {"dim", f.dim()},
                      {"shift_ms", f.grid.shift_ms()}, {"out", out}}.dump(2)
              << '\n';
  else
    std::cout << f.n_frames() << " x " << f.dim() << " -> " << out << '\n';
  return 0;
}

PosteriorMatrix LoadPosteriors(const std::string &path) {
  auto m = ReadMatrixFile(path);
  if (m.shift_ms <= 0) throw InvalidArgument(path + ": posterior file has no frame grid");
  PosteriorMatrix p;
  p.grid = FrameGrid(m.shift_ms, std::max(m.window_ms, m.shift_ms),
                     static_cast<std::int64_t>(m.values.rows()));
  p.values = std::move(m.values);
  p.Validate();
  return p;
}

int Decide(const std::string &posteriors, const std::string &out, double tau, int median,
           const std::string &file_id, bool as_json) {
  PostProcessConfig cfg{tau, median, 0};
  auto intervals = ssnd::Decide(LoadPosteriors(posteriors), cfg);
  WriteRttm(intervals, out, file_id);
  if (as_json)
    std::cout << json{{"intervals", intervals.size()}, {"out", out}}.dump(2) << '\n';
  else
    std::cout << intervals.size() << " intervals -> " << out << '\n';
  return 0;
}

int Assign(const std::string &rttm, const std::string &embeddings, const std::string &out_dir,
           bool fallback, bool as_json) {
  auto intervals = ReadRttm(rttm);
  StreamAssignment assignment;
  if (!embeddings.empty()) {
    auto frames = ReadMatrixFile(embeddings);
    if (frames.shift_ms <= 0) throw InvalidArgument(embeddings + ": no frame grid");
    FrameGrid grid(frames.shift_ms, std::max(frames.window_ms, frames.shift_ms),
                   static_cast<std::int64_t>(frames.values.rows()));
    AssemblyOptions opt;
    if (fallback) opt.fallback = EmbeddingFallback::kAllActiveFrames;
    auto a = Assemble(intervals, frames.values, grid, opt);
    assignment = a.assignment;
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      for (int s = 0; s < 2; ++s)
        WriteMatrixFile({MatrixKind::kEmbedding, grid.shift_ms(), grid.window_ms(),
                         a.sequences[s].values},
                        (fs::path(out_dir) / ("seq" + std::to_string(s) + ".mat")).string());
    }
  } else {
    assignment = AssignStreams(intervals);
  }
  std::ostringstream dump;
  WriteAssignment(intervals, assignment, dump);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "assignment.txt");
    os << dump.str();
    if (!os) throw IoError("cannot write " + out_dir + "/assignment.txt");
  }
  if (as_json) {
    json arr = json::array();
    for (std::size_t i = 0; i < intervals.size(); ++i)
      arr.push_back({{"id", i},
                     {"speaker", intervals[i].speaker},
                     {"start", intervals[i].start()},
                     {"end", intervals[i].end()},
                     {"stream", assignment.stream[i]}});
    std::cout << json{{"assignment", arr}}.dump(2) << '\n';
  } else if (out_dir.empty()) {
    std::cout << dump.str();
  }
  return 0;
}

int Plan(double length, double size, double shift, bool as_json) {
  auto plan = PlanSegments(length, size, shift);
  if (as_json) {
    json arr = json::array();
    for (const auto &w : plan.windows)
      arr.push_back({{"start", MillisToSeconds(w.start_ms)},
                     {"end", MillisToSeconds(w.end_ms)},
                     {"emit_start", MillisToSeconds(w.emit_start_ms)}});
    std::cout << json{{"size", size}, {"shift", shift}, {"windows", arr}}.dump(2) << '\n';
  } else {
    for (const auto &w : plan.windows)
      std::cout << Fixed(MillisToSeconds(w.start_ms), 3) << ' '
                << Fixed(MillisToSeconds(w.end_ms), 3) << ' '
                << Fixed(MillisToSeconds(w.emit_start_ms), 3) << '\n';
  }
  return 0;
}

int ScoreDer(const std::string &ref, const std::string &hyp, Millis collar, bool as_json) {
  auto d = ComputeDer(ReadRttm(ref), ReadRttm(hyp), {collar, 10});
  if (as_json)
    std::cout << DerJson(d).dump(2) << '\n';
  else
    std::cout << "DER " << Fixed(d.der) << " (MI " << Fixed(d.missed) << ", FA "
              << Fixed(d.false_alarm) << ", CF " << Fixed(d.confusion) << ")\n";
  return 0;
}

int ScoreCpwer(const std::string &ref, const std::string &hyp, bool raw, bool as_json) {
  auto r = ComputeCpwer(ConcatenateBySpeaker(ReadTranscripts(ref), !raw),
                        ConcatenateBySpeaker(ReadTranscripts(hyp), !raw));
  if (as_json) {
    json mapping = json::array();
    for (const auto &[a, b] : r.mapping) mapping.push_back({a, b});
    std::cout << json{{"cpwer", Num(r.cpwer)},
                      {"substitutions", r.report.substitutions},
                      {"deletions", r.report.deletions},
                      {"insertions", r.report.insertions},
                      {"ref_words", r.report.n_ref_words},
                      {"mapping", mapping}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "cpWER " << Fixed(r.cpwer) << " (S " << r.report.substitutions << ", D "
              << r.report.deletions << ", I " << r.report.insertions << ", N "
              << r.report.n_ref_words << ")\n";
  }
  return 0;
}

int Sweep(const std::string &ref, const std::vector<std::string> &posteriors,
          const std::vector<double> &taus, int median, const std::string &csv,
          bool as_json) {
  std::vector<PosteriorMatrix> p;
  for (const auto &path : posteriors) p.push_back(LoadPosteriors(path));
  auto rows = TuningSweep(p, ReadRttm(ref), taus, median);
  if (!csv.empty()) {
    std::ofstream os(csv);
    WriteSweepCsv(rows, os);
    if (!os) throw IoError("cannot write " + csv);
  }
  if (as_json) {
    json arr = json::array();
    for (const auto &r : rows)
      arr.push_back({{"shift_ms", r.shift_ms}, {"tau", r.tau}, {"der", DerJson(r.der)}});
    std::cout << json{{"rows", arr}}.dump(2) << '\n';
  } else if (csv.empty()) {
    WriteSweepCsv(rows, std::cout);
  }
  return 0;
}

struct PipelineArgs {
  std::string session_dir;
  std::string config;
  std::string out;
  bool oracle = false;
  bool timing = false;
};

int Pipeline(const PipelineArgs &args, const SimulateArgs &sim, bool have_seed, bool as_json) {
  PipelineConfig cfg = ResolveConfig(args.config);
  if (args.oracle) {
    cfg.diarizer = cfg.separator = cfg.recognizer = "oracle";
    cfg.Validate();
  }
  if (!have_seed && args.session_dir.empty())
    throw InvalidArgument("pipeline needs --session or --seed");
  Session session = args.session_dir.empty() ? sim.Generate() : ReadSession(args.session_dir);
  auto result = RunPipeline(cfg, session);
  const std::string out = args.out.empty() ? cfg.output_dir : args.out;
  if (!out.empty()) WritePipelineArtifacts(result, out, session.mixture.sample_rate);
  if (as_json) {
    std::cout << ReportJson(result, args.timing) << '\n';
  } else {
    std::cout << result.session << ": DER " << Fixed(result.der.der);
    if (result.cpwer) std::cout << ", cpWER " << Fixed(result.cpwer->cpwer);
    std::cout << ", stream error " << result.max_abs_error << '\n';
    if (args.timing)
      for (const auto &t : result.timing)
        std::cout << "  " << t.stage << ' ' << Fixed(t.ms, 3) << " ms\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Speaker separation via neural diarization: simulation, assembly, scoring"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output")->configurable(false);

  SimulateArgs sim;
  std::string sim_out;
  auto *simulate = app.add_subcommand("simulate", "Generate a seeded session");
  sim.Add(simulate);
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_flag("--json", as_json);

  std::string wav, feat_out, kind = "logmel";
  bool normalize = false;
  std::size_t subsample = 1;
  auto *featurize = app.add_subcommand("featurize", "Compute frame features from a WAV file");
  featurize->add_option("--wav", wav, "Multichannel input WAV")
      ->required()
      ->check(CLI::ExistingFile);
  featurize->add_option("--out", feat_out, "Output matrix file")->required();
  featurize->add_option("--kind", kind, "Feature type (default logmel)")
      ->check(CLI::IsMember({"logmel", "spliced", "ipd"}));
  featurize->add_flag("--normalize", normalize, "Per-dimension mean/variance normalization");
  featurize->add_option("--subsample", subsample, "Keep every n-th frame")
      ->check(CLI::PositiveNumber);
  featurize->add_flag("--json", as_json);

  std::string posteriors, rttm_out, file_id = "session";
  double tau = 0.5;
  int median = 31;
  auto *decide = app.add_subcommand("decide", "Threshold and median-filter posteriors into RTTM");
  decide->add_option("--posteriors", posteriors, "T x C posterior matrix file")->required()->check(CLI::ExistingFile);
  decide->add_option("--out", rttm_out, "Output RTTM")->required();
  decide->add_option("--threshold", tau, "Activity threshold");
  decide->add_option("--median", median, "Median filter length (frames, odd)");
  decide->add_option("--file-id", file_id, "RTTM file id");
  decide->add_flag("--json", as_json);

  std::string assign_rttm, embeddings, assign_dir;
  bool fallback = false;
  auto *assign = app.add_subcommand("assign", "Two-stream assignment and embedding sequences");
  assign->add_option("--rttm", assign_rttm, "Decided speaker intervals")->required()->check(CLI::ExistingFile);
  assign->add_option("--embeddings", embeddings, "Frame embeddings (T x E matrix file)")
      ->check(CLI::ExistingFile);
  assign->add_option("--out-dir", assign_dir, "Write seq0.mat and seq1.mat here");
  assign->add_flag("--fallback", fallback, "Average all active frames if a speaker is never alone");
  assign->add_flag("--json", as_json);

  double length = 0, size = 30, shift = 27;
  auto *plan = app.add_subcommand("plan", "Segment plan for a session length");
  plan->add_option("--length", length, "Session length (s)")->required();
  plan->add_option("--size", size, "Segment size (s)");
  plan->add_option("--shift", shift, "Segment shift (s)");
  plan->add_flag("--json", as_json);

  std::string ref, hyp;
  Millis collar = 0;
  auto *score_der = app.add_subcommand("score-der", "Diarization error rate");
  score_der->add_option("ref", ref, "Reference RTTM")->required()->check(CLI::ExistingFile);
  score_der->add_option("hyp", hyp, "Hypothesis RTTM")->required()->check(CLI::ExistingFile);
  score_der->add_option("--collar-ms", collar, "Collar on each side of reference boundaries");
  score_der->add_flag("--json", as_json);

  bool raw = false;
  auto *score_cpwer = app.add_subcommand("score-cpwer", "Concatenated minimum-permutation WER");
  score_cpwer->add_option("ref", ref, "Reference transcripts (TSV)")->required()->check(CLI::ExistingFile);
  score_cpwer->add_option("hyp", hyp, "Hypothesis transcripts (TSV)")->required()->check(CLI::ExistingFile);
  score_cpwer->add_flag("--no-normalize", raw, "Compare words verbatim");
  score_cpwer->add_flag("--json", as_json);

  std::vector<std::string> sweep_post;
  std::vector<double> taus = {0.3, 0.5};
  std::string csv;
  auto *sweep = app.add_subcommand("sweep", "DER over posterior grids and thresholds");
  sweep->add_option("--ref", ref, "Reference RTTM")->required()->check(CLI::ExistingFile);
  sweep->add_option("--posteriors", sweep_post, "Posterior matrix files, one per frame shift")->required()->check(CLI::ExistingFile);
  sweep->add_option("--tau", taus, "Thresholds (default 0.3 0.5)");
  sweep->add_option("--median", median, "Median filter length (frames, odd)");
  sweep->add_option("--csv", csv, "Write the sweep table here");
  sweep->add_flag("--json", as_json);

  PipelineArgs pargs;
  SimulateArgs psim;
  auto *pipeline = app.add_subcommand("pipeline", "End-to-end run on a session");
  pipeline->add_option("--session", pargs.session_dir, "Session directory")
      ->check(CLI::ExistingDirectory);
  psim.Add(pipeline);
  pipeline->add_option("--config", pargs.config, "JSON config (default: $SSND_CONFIG)");
  pipeline->add_option("--out", pargs.out, "Artifact directory");
  pipeline->add_flag("--oracle", pargs.oracle, "Use ground-truth models");
  pipeline->add_flag("--timing", pargs.timing, "Report per-stage times");
  pipeline->add_flag("--json", as_json);

  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (*simulate) return Simulate(sim, sim_out, as_json);
    if (*featurize) return Featurize(wav, feat_out, kind, normalize, subsample, as_json);
    if (*decide) return Decide(posteriors, rttm_out, tau, median, file_id, as_json);
    if (*assign) return Assign(assign_rttm, embeddings, assign_dir, fallback, as_json);
    if (*plan) return Plan(length, size, shift, as_json);
    if (*score_der) return ScoreDer(ref, hyp, collar, as_json);
    if (*score_cpwer) return ScoreCpwer(ref, hyp, raw, as_json);
    if (*sweep) return Sweep(ref, sweep_post, taus, median, csv, as_json);
    if (*pipeline)
      return Pipeline(pargs, psim, pipeline->count("--seed") > 0, as_json);
  } catch (const PipelineError &e) {
    std::cerr << "ssnd " << cmd << ": stage " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "ssnd " << cmd << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}
