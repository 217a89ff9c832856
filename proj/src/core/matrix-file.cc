// src/core/matrix-file.cc

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

#include <cstring>
#include <fstream>

#include "ssnd/core/io.h"

namespace ssnd {

namespace {
constexpr char kMagic[8] = {'S', 'S', 'N', 'D', 'M', 'A', 'T', '1'};
}

void WriteMatrixFile(const MatrixFile &file, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  auto put = [&os](auto v) {
    os.write(reinterpret_cast<const char *>(&v), sizeof(v));
  };
  os.write(kMagic, 8);
  put(static_cast<std::uint32_t>(file.kind));
  put(std::uint32_t{0});
  put(static_cast<std::uint64_t>(file.values.rows()));
  put(static_cast<std::uint64_t>(file.values.cols()));
  put(static_cast<std::int64_t>(file.shift_ms));
  put(static_cast<std::int64_t>(file.window_ms));
  auto data = file.values.data();
  os.write(reinterpret_cast<const char *>(data.data()),
           static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!os) throw IoError("write failed for " + path);
}

MatrixFile ReadMatrixFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char magic[8];
  std::uint32_t kind = 0, reserved = 0;
  std::uint64_t rows = 0, cols = 0;
  std::int64_t shift = 0, window = 0;
  is.read(magic, 8);
  auto get = [&is](auto &v) {
    is.read(reinterpret_cast<char *>(&v), sizeof(v));
  };
  get(kind);
  get(reserved);
  get(rows);
  get(cols);
  get(shift);
  get(window);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError(path + ": not an SSND matrix file");
  if (kind > static_cast<std::uint32_t>(MatrixKind::kEmbedding))
    throw IoError(path + ": unknown matrix kind " + std::to_string(kind));
  if (reserved != 0) throw IoError(path + ": reserved header field is not zero");
  if (shift < 0 || window < 0) throw IoError(path + ": negative frame grid");
  // The payload must match the header exactly.
  const auto header_end = is.tellg();
  is.seekg(0, std::ios::end);
  const auto payload = static_cast<std::uint64_t>(is.tellg() - header_end);
  is.seekg(header_end);
  if (cols != 0 && rows > payload / sizeof(double) / cols)
    throw IoError(path + ": truncated matrix data");
  if (rows * cols * sizeof(double) != payload)
    throw IoError(path + ": trailing bytes after matrix data");
  MatrixFile file;
  file.kind = static_cast<MatrixKind>(kind);
  file.shift_ms = shift;
  file.window_ms = window;
  file.values = Matrix<double>(rows, cols);
  auto data = file.values.data();
  is.read(reinterpret_cast<char *>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!is) throw IoError(path + ": truncated matrix data");
  return file;
}

}  // namespace ssnd
