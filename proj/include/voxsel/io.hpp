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

#pragma once

// Binary interchange formats. All values are little-endian 32-bit.
//
//   scan    : consecutive (x, y, z, r) float quadruples, 16 bytes per point
//   labels  : one uint32 per point; semantic class in the low 16 bits
//   SELMATv1: "SELMATv1" magic, uint32 rows, uint32 cols, rows*cols floats
//             in row-major order

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "voxsel/types.hpp"

namespace voxsel::io {

inline constexpr char kMatrixMagic[8] = {'S', 'E', 'L', 'M', 'A', 'T', 'v', '1'};

std::vector<Point> decode_points(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_points(std::span<const Point> points);

PointCloud read_cloud_bin(const std::filesystem::path& path);
void write_cloud_bin(const std::filesystem::path& path, std::span<const Point> points);

std::vector<ClassId> decode_labels(std::span<const std::uint8_t> bytes,
                                   bool mask_low16);
std::vector<ClassId> read_labels(const std::filesystem::path& path, bool mask_low16);
void write_labels(const std::filesystem::path& path, std::span<const std::uint32_t> labels);

// Reads labels and attaches them to `cloud`, checking the point count.
void attach_labels(PointCloud& cloud, std::vector<ClassId> labels);

Matrix decode_matrix(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_matrix(const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace voxsel::io
