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

#ifndef RASTILE_PYRAMID_HPP
#define RASTILE_PYRAMID_HPP

#include <cstdint>
#include <vector>

#include "rastile/errors.hpp"
#include "rastile/geo.hpp"

namespace rastile {

/// A mosaic or reassembly was attempted with tiles missing from the grid.
class IncompleteMosaicError : public Error {
 public:
  IncompleteMosaicError(const std::string& msg, std::vector<TileAddress> missing)
      : Error(msg), missing_(std::move(missing)) {}
  const std::vector<TileAddress>& missing() const { return missing_; }

 private:
  std::vector<TileAddress> missing_;
};

/// One image band: width x height 8-bit samples, row-major, row 0 on top.
struct RasterBand {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> samples;

  bool operator==(const RasterBand&) const = default;
};

/// A georeferenced multi-band raster; all bands share dimensions.
struct RasterImage {
  uint32_t width = 0;
  uint32_t height = 0;
  GeoExtent extent;
  std::vector<RasterBand> bands;

  uint32_t band_count() const { return static_cast<uint32_t>(bands.size()); }
};

/// Tiling parameters. Tile edges are powers of two between 128 and 1024;
/// the default matches common spatial database block sizes.
struct PyramidSpec {
  uint32_t tile_size = 256;
  uint32_t level_count = 1;
};

bool valid_tile_size(uint32_t tile_size);

/// A fixed-size square block of one band at one pyramid level. Edge tiles are
/// zero-padded; valid_width/valid_height record the real content.
struct Tile {
  TileAddress address;
  uint32_t band = 0;
  uint32_t tile_size = 0;
  uint32_t valid_width = 0;
  uint32_t valid_height = 0;
  std::vector<uint8_t> pixels;  // tile_size * tile_size
};

struct BandPyramid {
  uint32_t band = 0;
  std::vector<std::vector<Tile>> levels;  // levels[p] row-major
};

struct Pyramid {
  PyramidSpec spec;
  std::vector<BandPyramid> bands;

  std::size_t tile_count() const;
};

/// Number of pyramid levels needed so the coarsest level fits a single tile
/// along the larger dimension: 1 + ceil(log2(max(w,h)/tile_size)), at least 1.
uint32_t level_count_for(uint32_t width, uint32_t height, uint32_t tile_size);

/// Band dimension after p ceil-halvings: ceil(d / 2^p).
uint32_t level_dim(uint32_t native_dim, uint32_t level);

/// Tiles along one axis: ceil(dim / tile_size).
uint32_t grid_len(uint32_t dim, uint32_t tile_size);

/// 2x2 box-mean reduction with half-up rounding; edge blocks average the one
/// or two samples that exist. Output is ceil(w/2) x ceil(h/2).
RasterBand downsample(const RasterBand& b);

/// Cut a band into a row-major grid of tiles.
std::vector<Tile> slice_level(const RasterBand& b, uint32_t tile_size,
                              uint32_t level, uint32_t band);

/// Full per-band pyramid: level 0 is the native band, each next level is a
/// further downsample.
Pyramid build_pyramid(const RasterImage& img, const PyramidSpec& spec);

/// Inverse of slice_level; requires a complete grid for the level and discards
/// padding via the recorded valid regions.
RasterBand reassemble(const std::vector<Tile>& tiles, uint32_t level);

}  // namespace rastile

#endif  // RASTILE_PYRAMID_HPP
