// Copyright 2026 The voxsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "voxsel/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "voxsel/error.hpp"

namespace voxsel::io {
namespace {

std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

float load_f32(const std::uint8_t* p) { return std::bit_cast<float>(load_u32(p)); }
void store_f32(std::uint8_t* p, float v) { store_u32(p, std::bit_cast<std::uint32_t>(v)); }

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<Point> decode_points(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 16 != 0) {
    throw FormatError("scan size " + std::to_string(bytes.size()) +
                      " is not a multiple of 16 bytes");
  }
  std::vector<Point> points(bytes.size() / 16);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const std::uint8_t* p = bytes.data() + 16 * k;
    points[k] = {load_f32(p), load_f32(p + 4), load_f32(p + 8), load_f32(p + 12)};
    if (!points[k].finite()) {
      throw DataError("non-finite value in point " + std::to_string(k));
    }
  }
  return points;
}

std::vector<std::uint8_t> encode_points(std::span<const Point> points) {
  std::vector<std::uint8_t> bytes(points.size() * 16);
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::uint8_t* p = bytes.data() + 16 * k;
    store_f32(p, points[k].x);
    store_f32(p + 4, points[k].y);
    store_f32(p + 8, points[k].z);
    store_f32(p + 12, points[k].r);
  }
  return bytes;
}

PointCloud read_cloud_bin(const std::filesystem::path& path) {
  PointCloud cloud;
  cloud.cloud_id = path.stem().string();
  try {
    cloud.points = decode_points(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return cloud;
}

void write_cloud_bin(const std::filesystem::path& path, std::span<const Point> points) {
  write_file(path, encode_points(points));
}

std::vector<ClassId> decode_labels(std::span<const std::uint8_t> bytes, bool mask_low16) {
  if (bytes.size() % 4 != 0) {
    throw FormatError("label size " + std::to_string(bytes.size()) +
                      " is not a multiple of 4 bytes");
  }
  std::vector<ClassId> labels(bytes.size() / 4);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const std::uint32_t v = load_u32(bytes.data() + 4 * k);
    labels[k] = mask_low16 ? (v & 0xFFFFu) : v;
  }
  return labels;
}

std::vector<ClassId> read_labels(const std::filesystem::path& path, bool mask_low16) {
  try {
    return decode_labels(read_file(path), mask_low16);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_labels(const std::filesystem::path& path, std::span<const std::uint32_t> labels) {
  std::vector<std::uint8_t> bytes(labels.size() * 4);
  for (std::size_t k = 0; k < labels.size(); ++k) store_u32(bytes.data() + 4 * k, labels[k]);
  write_file(path, bytes);
}

void attach_labels(PointCloud& cloud, std::vector<ClassId> labels) {
  if (labels.size() != cloud.points.size()) {
    throw ConsistencyError("cloud '" + cloud.cloud_id + "' has " +
                           std::to_string(cloud.points.size()) + " points but " +
                           std::to_string(labels.size()) + " labels");
  }
  cloud.labels = std::move(labels);
}

Matrix decode_matrix(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMatrixMagic, 8) != 0) {
    throw FormatError("missing SELMATv1 header");
  }
  const std::uint32_t rows = load_u32(bytes.data() + 8);
  const std::uint32_t cols = load_u32(bytes.data() + 12);
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  if (bytes.size() - 16 != count * 4) {
    throw FormatError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " needs " + std::to_string(count * 4) + " payload bytes, found " +
                      std::to_string(bytes.size() - 16));
  }
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = load_f32(bytes.data() + 16 + 4 * i);
  return Matrix(rows, cols, std::move(values));
}

std::vector<std::uint8_t> encode_matrix(const Matrix& m) {
  std::vector<std::uint8_t> bytes(16 + m.values().size() * 4);
  std::memcpy(bytes.data(), kMatrixMagic, 8);
  store_u32(bytes.data() + 8, static_cast<std::uint32_t>(m.rows()));
  store_u32(bytes.data() + 12, static_cast<std::uint32_t>(m.cols()));
  for (std::size_t i = 0; i < m.values().size(); ++i) {
    store_f32(bytes.data() + 16 + 4 * i, m.values()[i]);
  }
  return bytes;
}

Matrix read_matrix(const std::filesystem::path& path) {
  try {
    return decode_matrix(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  write_file(path, encode_matrix(m));
}

}  // namespace voxsel::io
