// include/ssnd/dsp/features.h

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

#ifndef SSND_DSP_FEATURES_H_
#define SSND_DSP_FEATURES_H_

#include <cmath>
#include <span>
#include <vector>

#include "ssnd/core/types.h"
#include "ssnd/dsp/stft.h"

namespace ssnd {

enum class FeatureKind { kLogMel, kSpliced, kIpd, kFused };

/// T frames by D dims on a frame grid.
struct FeatureMatrix {
  Matrix<double> values;
  FeatureKind kind = FeatureKind::kLogMel;
  FrameGrid grid;

  std::size_t n_frames() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

constexpr double kMelFloor = 1e-10;

inline double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

/// n_mels x (dft_size/2 + 1) triangular filters, HTK mel scale, spanning
/// [low_hz, high_hz]. Filter i rises from edge i to edge i+1 and falls to
/// edge i+2, where edges are equally spaced in mel.
Matrix<double> MelFilterbank(std::size_t n_mels, std::size_t dft_size,
                             int sample_rate, double low_hz, double high_hz);

/// log(mel_filterbank * |X|^2 + kMelFloor) with filters spanning 0 to
/// sample_rate / 2.
FeatureMatrix LogMel(const Spectrogram &spec, std::size_t n_mels = 23);

/// Stacks frames t-left .. t+right; edge frames repeat the boundary frame.
FeatureMatrix Splice(const FeatureMatrix &f, std::size_t left = 7,
                     std::size_t right = 7);

/// Cosine and sine of the phase of X_ref relative to each non-reference
/// mic. Column layout, for the p-th non-reference mic in channel order:
/// [2pF, 2pF+F) holds cos, [2pF+F, 2pF+2F) holds sin.
FeatureMatrix Ipd(std::span<const Spectrogram> specs, std::size_t ref);

struct NormalizedFeatures {
  FeatureMatrix features;
  std::vector<double> mean;
  std::vector<double> stddev;  // population standard deviation
};

/// Per-dimension zero mean, unit variance. Constant columns map to zero.
NormalizedFeatures Normalize(const FeatureMatrix &f);

/// Keeps frames 0, factor, 2*factor, ...; the grid shift is multiplied by
/// factor and the window widened to at least the new shift.
FeatureMatrix Subsample(const FeatureMatrix &f, std::size_t factor = 5);
PosteriorMatrix Subsample(const PosteriorMatrix &p, std::size_t factor = 5);

}  // namespace ssnd

#endif  // SSND_DSP_FEATURES_H_
