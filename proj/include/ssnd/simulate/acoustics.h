// include/ssnd/simulate/acoustics.h

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

#ifndef SSND_SIMULATE_ACOUSTICS_H_
#define SSND_SIMULATE_ACOUSTICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssnd/core/types.h"

namespace ssnd {

constexpr double kSpeedOfSound = 343.0;  // m/s

/// Far-field delay, in seconds, of each microphone relative to `ref` for a
/// plane wave arriving from `azimuth_deg` (counter-clockwise from +x in the
/// array plane). Microphones nearer the source get negative delays: for a
/// mic at radius r and angle phi around a reference at the origin the delay
/// is -(r / c) cos(azimuth - phi).
std::vector<double> FarFieldDelays(double azimuth_deg,
                                   const std::vector<MicPosition> &geometry,
                                   std::size_t ref);

/// Anechoic far-field image of `source` on every microphone. Each channel is
/// the source delayed by its FarFieldDelays() value, applied as a linear
/// phase ramp on a zero-padded FFT (so fractional delays are band-limited
/// interpolations and nothing wraps around). Output length equals the input
/// length; content delayed past either end is dropped. Channels with zero
/// delay, including the reference, are exact copies.
MultichannelAudio Spatialize(std::span<const double> source, double azimuth_deg,
                             const std::vector<MicPosition> &geometry,
                             std::size_t ref = 0, int sample_rate = 16000);

/// Reads a multichannel impulse response from a WAV file.
MultichannelAudio ReadRir(const std::string &path);
std::vector<MultichannelAudio> ImportRirs(const std::vector<std::string> &paths);

/// Linear convolution of `source` with each RIR channel; output length is
/// source + rir - 1. Throws ShapeMismatch if `expected_channels` is nonzero
/// and differs from the RIR channel count, InvalidArgument on an empty RIR
/// or source.
MultichannelAudio Convolve(std::span<const double> source,
                           const MultichannelAudio &rir,
                           std::size_t expected_channels = 0);

enum class NoiseKind {
  kUncorrelated,  // independent white noise per channel
  kDiffuse,       // superposition of plane waves from random azimuths
};

/// Number of plane waves in diffuse noise.
constexpr int kDiffusePlaneWaves = 36;

/// Unscaled noise with the mixture's shape. Diffuse noise needs geometry.
Matrix<double> MakeNoise(const MultichannelAudio &like, NoiseKind kind,
                         std::uint64_t seed);

/// Mean square over all channels and samples.
double MeanPower(const Matrix<double> &x);

/// Adds noise scaled so that 10 log10(P_signal / P_noise) equals `snr_db`,
/// with both powers measured as MeanPower over all channels. `mixture` is
/// the signal. snr_db = +inf returns the mixture unchanged (and a zero
/// noise matrix). Throws InvalidArgument for NaN or -inf and for a
/// zero-power signal.
MultichannelAudio AddNoise(const MultichannelAudio &mixture, double snr_db,
                           NoiseKind kind, std::uint64_t seed,
                           Matrix<double> *noise_out = nullptr);

}  // namespace ssnd

#endif  // SSND_SIMULATE_ACOUSTICS_H_
