// src/dsp/fft.cc

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

#include "ssnd/dsp/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "ssnd/core/error.h"

namespace ssnd {

namespace {
// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex &PlannerMutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

RealFft::RealFft(std::size_t size) : size_(size) {
  if (size == 0) throw InvalidArgument("FFT size must be positive");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  time_ = fftw_alloc_real(size_);
  auto *freq = fftw_alloc_complex(n_bins());
  freq_ = freq;
  int n = static_cast<int>(size_);
  forward_plan_ = fftw_plan_dft_r2c_1d(n, time_, freq, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, freq, time_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(time_);
  fftw_free(freq_);
}

void RealFft::Forward(std::span<const double> input,
                      std::span<std::complex<double>> output) {
  if (input.size() > size_) throw InvalidArgument("FFT input too long");
  if (output.size() != n_bins()) throw ShapeMismatch("FFT output size");
  std::copy(input.begin(), input.end(), time_);
  std::fill(time_ + input.size(), time_ + size_, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::memcpy(output.data(), freq_, n_bins() * sizeof(fftw_complex));
}

void RealFft::Inverse(std::span<const std::complex<double>> input,
                      std::span<double> output) {
  if (input.size() != n_bins()) throw ShapeMismatch("IFFT input size");
  if (output.size() > size_) throw InvalidArgument("IFFT output too long");
  // c2r overwrites its input, so work on the owned buffer.
  std::memcpy(freq_, input.data(), n_bins() * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < output.size(); ++i) output[i] = time_[i] * scale;
}

std::size_t GoodFftSize(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace ssnd
