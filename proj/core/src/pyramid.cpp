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

#include "rastile/pyramid.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <string>

#include "rastile/errors.hpp"

namespace rastile {

bool valid_tile_size(uint32_t tile_size) {
  return tile_size == 128 || tile_size == 256 || tile_size == 512 ||
         tile_size == 1024;
}

std::size_t Pyramid::tile_count() const {
  std::size_t n = 0;
  for (const auto& b : bands) {
    for (const auto& lvl : b.levels) n += lvl.size();
  }
  return n;
}

uint32_t level_count_for(uint32_t width, uint32_t height, uint32_t tile_size) {
  if (width == 0 || height == 0 || tile_size == 0) {
    throw DomainError("level_count_for requires positive dimensions");
  }
  const uint32_t max_dim = std::max(width, height);
  const uint32_t tiles = (max_dim + tile_size - 1) / tile_size;
  uint32_t levels = 1;
  while ((uint32_t{1} << (levels - 1)) < tiles) ++levels;
  return levels;
}

uint32_t level_dim(uint32_t native_dim, uint32_t level) {
  // ceil(d / 2^p); iterated ceil-halving gives the same value.
  const uint64_t div = uint64_t{1} << level;
  return static_cast<uint32_t>((native_dim + div - 1) / div);
}

uint32_t grid_len(uint32_t dim, uint32_t tile_size) {
  return (dim + tile_size - 1) / tile_size;
}

RasterBand downsample(const RasterBand& b) {
  if (b.width < 2 && b.height < 2) {
    throw DomainError("cannot downsample a 1x1 band");
  }
  if (b.samples.size() != std::size_t{b.width} * b.height) {
    throw DomainError("band sample count does not match dimensions");
  }
  RasterBand out;
  out.width = (b.width + 1) / 2;
  out.height = (b.height + 1) / 2;
  out.samples.resize(std::size_t{out.width} * out.height);
  for (uint32_t oy = 0; oy < out.height; ++oy) {
    const uint32_t y0 = oy * 2;
    const uint32_t y1 = std::min(y0 + 1, b.height - 1);
    for (uint32_t ox = 0; ox < out.width; ++ox) {
      const uint32_t x0 = ox * 2;
      const uint32_t x1 = std::min(x0 + 1, b.width - 1);
      uint32_t sum = 0;
      uint32_t cnt = 0;
      sum += b.samples[std::size_t{y0} * b.width + x0];
      ++cnt;
      if (x1 != x0) {
        sum += b.samples[std::size_t{y0} * b.width + x1];
        ++cnt;
      }
      if (y1 != y0) {
        sum += b.samples[std::size_t{y1} * b.width + x0];
        ++cnt;
        if (x1 != x0) {
          sum += b.samples[std::size_t{y1} * b.width + x1];
          ++cnt;
        }
      }
      // mean rounded half-up
      out.samples[std::size_t{oy} * out.width + ox] =
          static_cast<uint8_t>((2 * sum + cnt) / (2 * cnt));
    }
  }
  return out;
}

std::vector<Tile> slice_level(const RasterBand& b, uint32_t tile_size,
                              uint32_t level, uint32_t band) {
  if (b.width == 0 || b.height == 0) {
    throw DomainError("cannot slice an empty band");
  }
  if (!valid_tile_size(tile_size)) {
    throw DomainError("tile size must be one of 128/256/512/1024");
  }
  const uint32_t rows = grid_len(b.height, tile_size);
  const uint32_t cols = grid_len(b.width, tile_size);
  std::vector<Tile> tiles;
  tiles.reserve(std::size_t{rows} * cols);
  for (uint32_t r = 0; r < rows; ++r) {
    const uint32_t y0 = r * tile_size;
    const uint32_t vh = std::min(tile_size, b.height - y0);
    for (uint32_t c = 0; c < cols; ++c) {
      const uint32_t x0 = c * tile_size;
      const uint32_t vw = std::min(tile_size, b.width - x0);
      Tile t;
      t.address = TileAddress{level, r, c};
      t.band = band;
      t.tile_size = tile_size;
      t.valid_width = vw;
      t.valid_height = vh;
      t.pixels.assign(std::size_t{tile_size} * tile_size, 0);
      for (uint32_t y = 0; y < vh; ++y) {
        std::memcpy(&t.pixels[std::size_t{y} * tile_size],
                    &b.samples[std::size_t{y0 + y} * b.width + x0], vw);
      }
      tiles.push_back(std::move(t));
    }
  }
  return tiles;
}

Pyramid build_pyramid(const RasterImage& img, const PyramidSpec& spec) {
  if (img.bands.empty()) throw DomainError("image has no bands");
  for (const auto& b : img.bands) {
    if (b.width != img.width || b.height != img.height ||
        b.samples.size() != std::size_t{b.width} * b.height) {
      throw DomainError("inconsistent band dimensions");
    }
  }
  if (spec.level_count < 1 ||
      spec.level_count > level_count_for(img.width, img.height, spec.tile_size)) {
    throw DomainError("level_count out of range for image dimensions");
  }
  Pyramid pyr;
  pyr.spec = spec;
  pyr.bands.resize(img.bands.size());
  for (uint32_t bi = 0; bi < img.band_count(); ++bi) {
    BandPyramid& bp = pyr.bands[bi];
    bp.band = bi;
    RasterBand current = img.bands[bi];
    for (uint32_t p = 0; p < spec.level_count; ++p) {
      if (p > 0) current = downsample(current);
      bp.levels.push_back(slice_level(current, spec.tile_size, p, bi));
    }
  }
  return pyr;
}

RasterBand reassemble(const std::vector<Tile>& tiles, uint32_t level) {
  if (tiles.empty()) throw DomainError("no tiles to reassemble");
  const uint32_t tile_size = tiles.front().tile_size;
  const uint32_t band = tiles.front().band;
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::map<std::pair<uint32_t, uint32_t>, const Tile*> grid;
  for (const auto& t : tiles) {
    if (t.address.level != level) continue;
    if (t.tile_size != tile_size || t.band != band) {
      throw DomainError("mixed tile sizes or bands in reassemble");
    }
    grid[{t.address.row, t.address.col}] = &t;
    rows = std::max(rows, t.address.row + 1);
    cols = std::max(cols, t.address.col + 1);
  }
  if (grid.empty()) throw DomainError("no tiles at requested level");

  std::vector<TileAddress> missing;
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      if (!grid.count({r, c})) missing.push_back(TileAddress{level, r, c});
    }
  }
  if (!missing.empty()) {
    std::string msg = "incomplete mosaic, missing tiles:";
    for (const auto& a : missing) msg += " " + a.to_string();
    throw IncompleteMosaicError(msg, std::move(missing));
  }

  const uint32_t width =
      (cols - 1) * tile_size + grid.at({0, cols - 1})->valid_width;
  const uint32_t height =
      (rows - 1) * tile_size + grid.at({rows - 1, 0})->valid_height;

  RasterBand out;
  out.width = width;
  out.height = height;
  out.samples.assign(std::size_t{width} * height, 0);
  for (const auto& [rc, t] : grid) {
    const uint32_t y0 = rc.first * tile_size;
    const uint32_t x0 = rc.second * tile_size;
    for (uint32_t y = 0; y < t->valid_height; ++y) {
      std::memcpy(&out.samples[std::size_t{y0 + y} * width + x0],
                  &t->pixels[std::size_t{y} * tile_size], t->valid_width);
    }
  }
  return out;
}

}  // namespace rastile
