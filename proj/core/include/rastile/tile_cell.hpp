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

#ifndef RASTILE_TILE_CELL_HPP
#define RASTILE_TILE_CELL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rastile/pyramid.hpp"

namespace rastile {

// Packed tile cell value, band-sequential, all integers big-endian:
//   u8 version (1), u8 band_count, u16 tile_size, u16 valid_width,
//   u16 valid_height, then band_count * tile_size^2 pixel bytes.
// One cell holds every band of one tile address so co-located band data
// travels together.

struct TileCellInfo {
  uint32_t band_count = 0;
  uint32_t tile_size = 0;
  uint32_t valid_width = 0;
  uint32_t valid_height = 0;
};

/// Pack the per-band tiles of one address (same address, size and valid
/// region across bands, in band order).
std::string pack_tile_cell(const std::vector<const Tile*>& band_tiles);

TileCellInfo tile_cell_info(std::string_view value);

/// Extract one band's pixels from a packed cell.
std::vector<uint8_t> tile_cell_band(std::string_view value, uint32_t band);

}  // namespace rastile

#endif  // RASTILE_TILE_CELL_HPP
