// include/ssnd/dsp/fft.h

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

#ifndef SSND_DSP_FFT_H_
#define SSND_DSP_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace ssnd {

/// Real-input DFT of a fixed length backed by FFTW. Not thread-safe per
/// instance; construct one per thread.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  std::size_t size() const { return size_; }
  std::size_t n_bins() const { return size_ / 2 + 1; }

  /// `input` is zero-padded (or must not exceed) size(). Output has n_bins().
  void Forward(std::span<const double> input,
               std::span<std::complex<double>> output);
  /// Inverse including the 1/N factor, so Inverse(Forward(x)) == x.
  void Inverse(std::span<const std::complex<double>> input,
               std::span<double> output);

 private:
  std::size_t size_;
  double *time_;
  void *freq_;  // fftw_complex*
  void *forward_plan_;
  void *inverse_plan_;
};

/// Smallest size >= n whose only prime factors are 2, 3 and 5.
std::size_t GoodFftSize(std::size_t n);

}  // namespace ssnd

#endif  // SSND_DSP_FFT_H_
