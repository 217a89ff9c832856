// include/ssnd/dsp/stft.h

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

#ifndef SSND_DSP_STFT_H_
#define SSND_DSP_STFT_H_

#include <complex>
#include <span>
#include <vector>

#include "ssnd/core/types.h"

namespace ssnd {

enum class WindowKind {
  kSqrtHann,     // square root of the periodic Hann window
  kRectangular,  // all ones; used for exact-DFT checks
};

struct StftConfig {
  Millis window_ms = 25;
  Millis shift_ms = 10;
  std::size_t dft_size = 512;
  WindowKind window_kind = WindowKind::kSqrtHann;
  int sample_rate = 16000;

  std::size_t window_samples() const;
  std::size_t shift_samples() const;
  std::size_t n_bins() const { return dft_size / 2 + 1; }
  /// Throws InvalidArgument on non-positive sizes or dft_size < window.
  void Validate() const;
  FrameGrid Grid(std::int64_t n_frames) const {
    return FrameGrid(shift_ms, window_ms, n_frames);
  }

  /// 25 ms / 10 ms analysis used by the diarization frontend.
  static StftConfig Diarization() { return {25, 10, 512}; }
  /// 32 ms window with a 10 ms or 16 ms shift for separation.
  static StftConfig Separation(Millis shift_ms = 10) {
    return {32, shift_ms, 512};
  }
};

std::vector<double> AnalysisWindow(const StftConfig &cfg);

/// T frames by F = dft_size/2 + 1 bins.
struct Spectrogram {
  Matrix<std::complex<double>> values;
  StftConfig config;
  std::size_t channel = 0;
  std::size_t n_samples = 0;  // length of the analysed signal, if known

  std::size_t n_frames() const { return values.rows(); }
  std::size_t n_bins() const { return values.cols(); }
};

/// Frame t transforms the windowed samples [t*shift, t*shift + window),
/// zero-padded on the right to dft_size. Throws InvalidArgument if the
/// signal is shorter than one window.
Spectrogram Stft(std::span<const double> signal, const StftConfig &cfg,
                 std::size_t channel = 0);

/// Least-squares overlap-add: each output sample is the window-weighted sum
/// of frame contributions divided by the summed squared window, and zero
/// where that sum is zero. Output length is spec.n_samples when set,
/// otherwise (T - 1) * shift + window.
std::vector<double> Istft(const Spectrogram &spec);

}  // namespace ssnd

#endif  // SSND_DSP_STFT_H_
