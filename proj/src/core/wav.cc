// src/core/wav.cc

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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ssnd/core/io.h"

namespace ssnd {

static_assert(std::endian::native == std::endian::little,
              "WAV and matrix I/O assume a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T Load(const std::vector<char> &buf, std::size_t pos) {
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  return v;
}

template <typename T>
void Put(std::ostream &os, T v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

}  // namespace

MultichannelAudio ReadWav(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::vector<char> buf((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw IoError(path + ": not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_pos = 0, data_len = 0;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    std::uint32_t len = Load<std::uint32_t>(buf, pos + 4);
    std::size_t body = pos + 8;
    if (std::memcmp(buf.data() + pos, "fmt ", 4) == 0) {
      if (len < 16 || body + len > buf.size())
        throw IoError(path + ": truncated fmt chunk");
      format = Load<std::uint16_t>(buf, body);
      channels = Load<std::uint16_t>(buf, body + 2);
      rate = Load<std::uint32_t>(buf, body + 4);
      bits = Load<std::uint16_t>(buf, body + 14);
      if (format == kFormatExtensible && len >= 26)
        format = Load<std::uint16_t>(buf, body + 24);
      have_fmt = true;
    } else if (std::memcmp(buf.data() + pos, "data", 4) == 0) {
      data_pos = body;
      data_len = std::min<std::size_t>(len, buf.size() - body);
      have_data = true;
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt || !have_data) throw IoError(path + ": missing fmt or data");
  if (channels == 0) throw IoError(path + ": zero channels");

  bool pcm16 = format == kFormatPcm && bits == 16;
  bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32)
    throw IoError(path + ": unsupported encoding (format " +
                  std::to_string(format) + ", " + std::to_string(bits) +
                  " bits)");

  std::size_t width = bits / 8;
  std::size_t frames = data_len / (width * channels);
  if (frames == 0) throw IoError(path + ": no samples");

  MultichannelAudio audio;
  audio.sample_rate = static_cast<int>(rate);
  audio.samples = Matrix<double>(channels, frames);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t m = 0; m < channels; ++m) {
      std::size_t at = data_pos + (n * channels + m) * width;
      audio.samples(m, n) =
          pcm16 ? Load<std::int16_t>(buf, at) / 32768.0
                : static_cast<double>(Load<float>(buf, at));
    }
  }
  return audio;
}

void WriteWav(const MultichannelAudio &audio, const std::string &path,
              WavEncoding encoding) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  const std::uint16_t channels = static_cast<std::uint16_t>(audio.n_channels());
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint32_t block = channels * bits / 8;
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(audio.n_samples() * block);

  os.write("RIFF", 4);
  Put<std::uint32_t>(os, 36 + data_len);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  Put<std::uint32_t>(os, 16);
  Put<std::uint16_t>(os, encoding == WavEncoding::kPcm16 ? kFormatPcm
                                                         : kFormatFloat);
  Put<std::uint16_t>(os, channels);
  Put<std::uint32_t>(os, static_cast<std::uint32_t>(audio.sample_rate));
  Put<std::uint32_t>(os, static_cast<std::uint32_t>(audio.sample_rate) * block);
  Put<std::uint16_t>(os, static_cast<std::uint16_t>(block));
  Put<std::uint16_t>(os, bits);
  os.write("data", 4);
  Put<std::uint32_t>(os, data_len);
  for (std::size_t n = 0; n < audio.n_samples(); ++n) {
    for (std::size_t m = 0; m < channels; ++m) {
      double v = audio.samples(m, n);
      if (encoding == WavEncoding::kPcm16) {
        double scaled = std::round(std::clamp(v, -1.0, 1.0) * 32768.0);
        Put<std::int16_t>(os, static_cast<std::int16_t>(
                                  std::clamp(scaled, -32768.0, 32767.0)));
      } else {
        Put<float>(os, static_cast<float>(v));
      }
    }
  }
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace ssnd
