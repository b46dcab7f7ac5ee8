// Copyright 2026 The Rastile Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RASTILE_RASTER_IO_HPP
#define RASTILE_RASTER_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "rastile/pyramid.hpp"

namespace rastile {

// Raster file format (.rsr): ten 32-byte text header fields followed by the
// raw band-sequential payload (band 0 plane row-major, then band 1, ...).
// Fields in order: magic "RASTILE1", name, width, height, band_count,
// sample_type ("u8"), west, east, south, north. Each field is left-justified
// ASCII padded with NUL bytes to 32 bytes.

struct RasterFileHeader {
  std::string name;
  uint32_t width = 0;
  uint32_t height = 0;
  uint32_t band_count = 0;
  GeoExtent extent;
};

inline constexpr std::size_t kRasterHeaderBytes = 10 * 32;

void write_raster(const std::filesystem::path& path, const std::string& name,
                  const RasterImage& img);

RasterFileHeader read_raster_header(const std::filesystem::path& path);

/// Header plus full pixel payload.
std::pair<RasterFileHeader, RasterImage> read_raster(
    const std::filesystem::path& path);

/// Deterministic pseudorandom image: the same seed always yields the same
/// bytes. The extent is anchored at (0, 0) and spans up to 10 degrees,
/// proportional to the aspect ratio.
RasterImage gen_synthetic(uint32_t width, uint32_t height, uint32_t bands,
                          uint64_t seed);

/// Geographic extent assigned by gen_synthetic for the given dimensions.
GeoExtent synthetic_extent(uint32_t width, uint32_t height);

}  // namespace rastile

#endif  // RASTILE_RASTER_IO_HPP
