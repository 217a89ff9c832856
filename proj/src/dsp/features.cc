// src/dsp/features.cc

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

#include "ssnd/dsp/features.h"

#include <algorithm>
#include <cmath>

namespace ssnd {

Matrix<double> MelFilterbank(std::size_t n_mels, std::size_t dft_size,
                             int sample_rate, double low_hz, double high_hz) {
  if (n_mels == 0) throw InvalidArgument("need at least one mel band");
  if (!(high_hz > low_hz)) throw InvalidArgument("empty mel frequency range");
  const std::size_t n_bins = dft_size / 2 + 1;
  const double mel_lo = HzToMel(low_hz), mel_hi = HzToMel(high_hz);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));

  Matrix<double> fb(n_mels, n_bins, 0.0);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / dft_size;
      const double rise = (f - lo) / (center - lo);
      const double fall = (hi - f) / (hi - center);
      fb(m, k) = std::max(0.0, std::min(rise, fall));
    }
  }
  return fb;
}

FeatureMatrix LogMel(const Spectrogram &spec, std::size_t n_mels) {
  const auto &cfg = spec.config;
  const auto fb = MelFilterbank(n_mels, cfg.dft_size, cfg.sample_rate, 0.0,
                                cfg.sample_rate / 2.0);
  FeatureMatrix out;
  out.kind = FeatureKind::kLogMel;
  out.grid = cfg.Grid(static_cast<std::int64_t>(spec.n_frames()));
  out.values = Matrix<double>(spec.n_frames(), n_mels);
  std::vector<double> power(spec.n_bins());
  for (std::size_t t = 0; t < spec.n_frames(); ++t) {
    auto row = spec.values.Row(t);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(row[k]);
    for (std::size_t m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) acc += fb(m, k) * power[k];
      out.values(t, m) = std::log(acc + kMelFloor);
    }
  }
  return out;
}

FeatureMatrix Splice(const FeatureMatrix &f, std::size_t left,
                     std::size_t right) {
  const std::size_t T = f.n_frames(), D = f.dim(), span = left + right + 1;
  FeatureMatrix out;
  out.kind = FeatureKind::kSpliced;
  out.grid = f.grid;
  out.values = Matrix<double>(T, D * span);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < span; ++j) {
      std::int64_t src = static_cast<std::int64_t>(t + j) -
                         static_cast<std::int64_t>(left);
      src = std::clamp<std::int64_t>(src, 0, static_cast<std::int64_t>(T) - 1);
      auto in = f.values.Row(src);
      std::copy(in.begin(), in.end(), out.values.Row(t).begin() + j * D);
    }
  }
  return out;
}

FeatureMatrix Ipd(std::span<const Spectrogram> specs, std::size_t ref) {
  if (specs.size() < 2) throw InvalidArgument("IPD needs at least two channels");
  if (ref >= specs.size()) throw InvalidArgument("reference channel out of range");
  const std::size_t T = specs[0].n_frames(), F = specs[0].n_bins();
  for (const auto &s : specs)
    if (s.n_frames() != T || s.n_bins() != F)
      throw ShapeMismatch("IPD spectrogram shapes differ");

  FeatureMatrix out;
  out.kind = FeatureKind::kIpd;
  out.grid = specs[ref].config.Grid(static_cast<std::int64_t>(T));
  out.values = Matrix<double>(T, 2 * (specs.size() - 1) * F);
  std::size_t pair = 0;
  for (std::size_t m = 0; m < specs.size(); ++m) {
    if (m == ref) continue;
    const std::size_t cos_col = 2 * pair * F, sin_col = cos_col + F;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t k = 0; k < F; ++k) {
        // arg(X_ref * conj(X_m)) = arg X_ref - arg X_m
        std::complex<double> z =
            specs[ref].values(t, k) * std::conj(specs[m].values(t, k));
        double mag = std::abs(z);
        out.values(t, cos_col + k) = mag > 0.0 ? z.real() / mag : 1.0;
        out.values(t, sin_col + k) = mag > 0.0 ? z.imag() / mag : 0.0;
      }
    }
    ++pair;
  }
  return out;
}

NormalizedFeatures Normalize(const FeatureMatrix &f) {
  const std::size_t T = f.n_frames(), D = f.dim();
  if (T < 2) throw InvalidArgument("normalization needs at least two frames");
  NormalizedFeatures out{f, std::vector<double>(D, 0.0),
                         std::vector<double>(D, 0.0)};
  for (std::size_t d = 0; d < D; ++d) {
    double mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) mean += f.values(t, d);
    mean /= T;
    double var = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      double e = f.values(t, d) - mean;
      var += e * e;
    }
    double sd = std::sqrt(var / T);
    out.mean[d] = mean;
    out.stddev[d] = sd;
    // Columns whose spread is at rounding level are treated as constant.
    bool constant = sd <= 1e-12 * std::max(1.0, std::abs(mean));
    for (std::size_t t = 0; t < T; ++t)
      out.features.values(t, d) =
          constant ? 0.0 : (f.values(t, d) - mean) / sd;
  }
  return out;
}

namespace {

FrameGrid SubsampledGrid(const FrameGrid &g, std::size_t factor,
                         std::int64_t n_frames) {
  Millis shift = g.shift_ms() * static_cast<Millis>(factor);
  return FrameGrid(shift, std::max(g.window_ms(), shift), n_frames);
}

template <typename T>
Matrix<T> KeepEvery(const Matrix<T> &m, std::size_t factor) {
  const std::size_t n = (m.rows() + factor - 1) / factor;
  Matrix<T> out(n, m.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto src = m.Row(i * factor);
    std::copy(src.begin(), src.end(), out.Row(i).begin());
  }
  return out;
}

}  // namespace

FeatureMatrix Subsample(const FeatureMatrix &f, std::size_t factor) {
  if (factor == 0) throw InvalidArgument("subsampling factor must be >= 1");
  FeatureMatrix out;
  out.kind = f.kind;
  out.values = KeepEvery(f.values, factor);
  out.grid = SubsampledGrid(f.grid, factor, out.values.rows());
  return out;
}

PosteriorMatrix Subsample(const PosteriorMatrix &p, std::size_t factor) {
  if (factor == 0) throw InvalidArgument("subsampling factor must be >= 1");
  PosteriorMatrix out;
  out.speakers = p.speakers;
  out.values = KeepEvery(p.values, factor);
  out.grid = SubsampledGrid(p.grid, factor, out.values.rows());
  return out;
}

}  // namespace ssnd
