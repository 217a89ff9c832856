// src/dsp/stft.cc

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

#include "ssnd/dsp/stft.h"

#include <cmath>
#include <numbers>

#include "ssnd/dsp/fft.h"

namespace ssnd {

std::size_t StftConfig::window_samples() const {
  return static_cast<std::size_t>(window_ms * sample_rate / 1000);
}

std::size_t StftConfig::shift_samples() const {
  return static_cast<std::size_t>(shift_ms * sample_rate / 1000);
}

void StftConfig::Validate() const {
  if (sample_rate <= 0 || window_ms <= 0 || shift_ms <= 0)
    throw InvalidArgument("STFT sizes must be positive");
  if (shift_samples() == 0 || window_samples() == 0)
    throw InvalidArgument("STFT window or shift rounds to zero samples");
  if (shift_ms > window_ms) throw InvalidArgument("STFT shift exceeds window");
  if (dft_size < window_samples())
    throw InvalidArgument("DFT size smaller than the analysis window");
}

std::vector<double> AnalysisWindow(const StftConfig &cfg) {
  const std::size_t n = cfg.window_samples();
  std::vector<double> w(n, 1.0);
  if (cfg.window_kind == WindowKind::kSqrtHann) {
    for (std::size_t i = 0; i < n; ++i)
      w[i] = std::sqrt(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n));
  }
  return w;
}

Spectrogram Stft(std::span<const double> signal, const StftConfig &cfg,
                 std::size_t channel) {
  cfg.Validate();
  const std::size_t win = cfg.window_samples(), hop = cfg.shift_samples();
  if (signal.size() < win)
    throw InvalidArgument("signal shorter than one STFT window");
  const std::size_t n_frames = 1 + (signal.size() - win) / hop;
  const auto window = AnalysisWindow(cfg);

  Spectrogram spec;
  spec.config = cfg;
  spec.channel = channel;
  spec.n_samples = signal.size();
  spec.values = Matrix<std::complex<double>>(n_frames, cfg.n_bins());

  RealFft fft(cfg.dft_size);
  std::vector<double> frame(win);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const double *x = signal.data() + t * hop;
    for (std::size_t i = 0; i < win; ++i) frame[i] = x[i] * window[i];
    fft.Forward(frame, spec.values.Row(t));
  }
  return spec;
}

std::vector<double> Istft(const Spectrogram &spec) {
  const StftConfig &cfg = spec.config;
  cfg.Validate();
  const std::size_t win = cfg.window_samples(), hop = cfg.shift_samples();
  const std::size_t T = spec.n_frames();
  std::size_t length = T == 0 ? 0 : (T - 1) * hop + win;
  if (spec.n_samples != 0) length = spec.n_samples;

  std::vector<double> out(length, 0.0), norm(length, 0.0);
  const auto window = AnalysisWindow(cfg);
  RealFft fft(cfg.dft_size);
  std::vector<double> frame(win);
  for (std::size_t t = 0; t < T; ++t) {
    fft.Inverse(spec.values.Row(t), frame);
    const std::size_t base = t * hop;
    for (std::size_t i = 0; i < win && base + i < length; ++i) {
      out[base + i] += frame[i] * window[i];
      norm[base + i] += window[i] * window[i];
    }
  }
  for (std::size_t n = 0; n < length; ++n)
    out[n] = norm[n] > 0.0 ? out[n] / norm[n] : 0.0;
  return out;
}

}  // namespace ssnd
