// src/simulate/acoustics.cc

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

#include "ssnd/simulate/acoustics.h"

#include <cmath>
#include <cstdint>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "ssnd/core/io.h"
#include "ssnd/dsp/fft.h"

namespace ssnd {

namespace {

using Complex = std::complex<double>;

double Radians(double deg) { return deg * std::numbers::pi / 180.0; }

// Accumulates bins[k] * exp(i step k) into out[k]. The phasor is advanced
// by rotation and re-anchored every 512 bins to bound rounding drift.
// Products are spelled out: std::complex multiplication carries NaN/inf
// recovery that dominates the cost here.
void AddRotated(std::span<const Complex> bins, double step, std::span<Complex> out,
                std::size_t begin = 0, std::size_t end = SIZE_MAX) {
  const double rc = std::cos(step), rs = std::sin(step);
  double wr = 1.0, wi = 0.0;
  end = std::min(end, bins.size());
  for (std::size_t k = begin; k < end; ++k) {
    if (k == begin || k % 512 == 0) {
      wr = std::cos(step * static_cast<double>(k));
      wi = std::sin(step * static_cast<double>(k));
    } else {
      const double t = wr * rc - wi * rs;
      wi = wr * rs + wi * rc;
      wr = t;
    }
    const double br = bins[k].real(), bi = bins[k].imag();
    out[k] += Complex(br * wr - bi * wi, br * wi + bi * wr);
  }
}

// Zero-mean, unit-variance approximate Gaussian: the sum of four 16-bit
// uniforms taken from one 64-bit draw. Plenty for white-noise spectra and
// several times cheaper than std::normal_distribution.
double FastGaussian(std::mt19937_64 &rng) {
  std::uint64_t r = rng();
  double sum = 0.0;
  for (int i = 0; i < 4; ++i, r >>= 16) sum += static_cast<double>(r & 0xffff);
  // Each term is uniform on {0..65535}: mean 32767.5, variance (65536^2-1)/12.
  constexpr double kMean = 4.0 * 32767.5;
  constexpr double kStd = 37837.22723720648;  // sqrt(4 * (65536^2 - 1) / 12)
  return (sum - kMean) / kStd;
}

}  // namespace

std::vector<double> FarFieldDelays(double azimuth_deg,
                                   const std::vector<MicPosition> &geometry,
                                   std::size_t ref) {
  if (geometry.empty()) throw InvalidArgument("geometry has no microphones");
  if (ref >= geometry.size()) throw InvalidArgument("reference mic out of range");
  const double ux = std::cos(Radians(azimuth_deg));
  const double uy = std::sin(Radians(azimuth_deg));
  std::vector<double> delays(geometry.size());
  for (std::size_t m = 0; m < geometry.size(); ++m) {
    double dx = geometry[m][0] - geometry[ref][0];
    double dy = geometry[m][1] - geometry[ref][1];
    delays[m] = -(dx * ux + dy * uy) / kSpeedOfSound;
  }
  return delays;
}

MultichannelAudio Spatialize(std::span<const double> source, double azimuth_deg,
                             const std::vector<MicPosition> &geometry,
                             std::size_t ref, int sample_rate) {
  auto delays = FarFieldDelays(azimuth_deg, geometry, ref);
  const std::size_t n = source.size();
  MultichannelAudio out;
  out.sample_rate = sample_rate;
  out.geometry = geometry;
  out.reference = ref;
  out.samples = Matrix<double>(geometry.size(), n);
  if (n == 0) return out;

  double max_delay = 0.0;
  for (double d : delays) max_delay = std::max(max_delay, std::abs(d) * sample_rate);
  // The source sits after `pad` zeros so negative delays do not wrap.
  const std::size_t pad = static_cast<std::size_t>(std::ceil(max_delay)) + 256;
  RealFft fft(GoodFftSize(n + 2 * pad));
  std::vector<double> buffer(fft.size(), 0.0);
  std::copy(source.begin(), source.end(), buffer.begin() + pad);
  std::vector<Complex> spectrum(fft.n_bins()), shifted(fft.n_bins());
  fft.Forward(buffer, spectrum);
  for (std::size_t m = 0; m < geometry.size(); ++m) {
    auto channel = out.samples.Row(m);
    if (delays[m] == 0.0) {
      std::copy(source.begin(), source.end(), channel.begin());
      continue;
    }
    std::fill(shifted.begin(), shifted.end(), Complex());
    AddRotated(spectrum,
               -2.0 * std::numbers::pi * delays[m] * sample_rate / fft.size(),
               shifted);
    fft.Inverse(shifted, buffer);
    std::copy(buffer.begin() + pad, buffer.begin() + pad + n, channel.begin());
  }
  return out;
}

MultichannelAudio ReadRir(const std::string &path) { return ReadWav(path); }

std::vector<MultichannelAudio> ImportRirs(const std::vector<std::string> &paths) {
  std::vector<MultichannelAudio> out;
  for (const auto &p : paths) out.push_back(ReadRir(p));
  return out;
}

MultichannelAudio Convolve(std::span<const double> source,
                           const MultichannelAudio &rir,
                           std::size_t expected_channels) {
  if (source.empty()) throw InvalidArgument("empty source");
  if (rir.n_channels() == 0 || rir.n_samples() == 0)
    throw InvalidArgument("empty impulse response");
  if (expected_channels != 0 && rir.n_channels() != expected_channels)
    throw ShapeMismatch("impulse response has " + std::to_string(rir.n_channels()) +
                        " channels, geometry has " +
                        std::to_string(expected_channels));
  const std::size_t n = source.size() + rir.n_samples() - 1;
  RealFft fft(GoodFftSize(n));
  std::vector<Complex> src_bins(fft.n_bins()), rir_bins(fft.n_bins());
  fft.Forward(source, src_bins);
  MultichannelAudio out;
  out.sample_rate = rir.sample_rate;
  out.geometry = rir.geometry;
  out.samples = Matrix<double>(rir.n_channels(), n);
  for (std::size_t m = 0; m < rir.n_channels(); ++m) {
    fft.Forward(rir.Channel(m), rir_bins);
    for (std::size_t k = 0; k < rir_bins.size(); ++k) rir_bins[k] *= src_bins[k];
    fft.Inverse(rir_bins, out.samples.Row(m));
  }
  return out;
}

Matrix<double> MakeNoise(const MultichannelAudio &like, NoiseKind kind,
                         std::uint64_t seed) {
  const std::size_t M = like.n_channels(), N = like.n_samples();
  Matrix<double> noise(M, N);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (kind == NoiseKind::kUncorrelated) {
    for (auto &v : noise.data()) v = gauss(rng);
    return noise;
  }
  if (!like.geometry || like.geometry->size() != M)
    throw InvalidArgument("diffuse noise needs one mic position per channel");
  if (N == 0) return noise;

  RealFft fft(GoodFftSize(N));
  const std::size_t K = fft.n_bins();
  std::uniform_real_distribution<double> azimuth(0.0, 360.0);
  std::vector<std::vector<Complex>> mics(M, std::vector<Complex>(K));
  std::vector<Complex> wave(K);
  for (int j = 0; j < kDiffusePlaneWaves; ++j) {
    // White noise drawn directly in the frequency domain.
    for (std::size_t k = 0; k < K; ++k) {
      const double re = FastGaussian(rng);
      wave[k] = {re, FastGaussian(rng)};
    }
    wave[0] = wave[0].real();
    if (fft.size() % 2 == 0) wave[K - 1] = wave[K - 1].real();
    auto delays = FarFieldDelays(azimuth(rng), *like.geometry, like.reference);
    // Blocked over bins so the wave and all mic accumulators stay in cache.
    constexpr std::size_t kBlock = 4096;
    for (std::size_t b = 0; b < K; b += kBlock) {
      for (std::size_t m = 0; m < M; ++m) {
        const double step =
            -2.0 * std::numbers::pi * delays[m] * like.sample_rate / fft.size();
        AddRotated(wave, step, mics[m], b, b + kBlock);
      }
    }
  }
  std::vector<double> buffer(fft.size());
  for (std::size_t m = 0; m < M; ++m) {
    fft.Inverse(mics[m], buffer);
    std::copy(buffer.begin(), buffer.begin() + N, noise.Row(m).begin());
  }
  return noise;
}

double MeanPower(const Matrix<double> &x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x.data()) acc += v * v;
  return acc / static_cast<double>(x.data().size());
}

MultichannelAudio AddNoise(const MultichannelAudio &mixture, double snr_db,
                           NoiseKind kind, std::uint64_t seed,
                           Matrix<double> *noise_out) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw InvalidArgument("SNR must be finite or +inf");
  if (snr_db == std::numeric_limits<double>::infinity()) {
    if (noise_out) *noise_out = Matrix<double>(mixture.n_channels(), mixture.n_samples());
    return mixture;
  }
  const double signal_power = MeanPower(mixture.samples);
  if (!(signal_power > 0.0)) throw InvalidArgument("signal has zero power");
  Matrix<double> noise = MakeNoise(mixture, kind, seed);
  const double noise_power = MeanPower(noise);
  if (!(noise_power > 0.0)) throw InvalidArgument("generated noise has zero power");
  const double gain =
      std::sqrt(signal_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  for (auto &v : noise.data()) v *= gain;
  MultichannelAudio out;
  out.sample_rate = mixture.sample_rate;
  out.reference = mixture.reference;
  if (mixture.geometry) out.geometry.emplace(*mixture.geometry);
  out.samples = mixture.samples;
  auto o = out.samples.data();
  auto z = noise.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += z[i];
  if (noise_out) *noise_out = std::move(noise);
  return out;
}

}  // namespace ssnd
