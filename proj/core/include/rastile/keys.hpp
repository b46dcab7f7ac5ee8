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

#ifndef RASTILE_KEYS_HPP
#define RASTILE_KEYS_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace rastile {

/// The marker stored in the band field of packed cells that hold every band
/// of a tile in band-sequential order.
inline constexpr uint8_t kPackedBandMarker = 255;

/// Identity of a stored tile cell. Encodes to the 64-bit big-endian row key
/// raster_id(16) | level(8) | band(8) | hilbert(32); byte-lexicographic order
/// of encoded keys equals numeric order of the packed value.
struct TileKey {
  uint16_t raster_id = 0;
  uint8_t level = 0;
  uint8_t band = 0;
  uint32_t hilbert = 0;

  uint64_t packed() const {
    return (uint64_t{raster_id} << 48) | (uint64_t{level} << 40) |
           (uint64_t{band} << 32) | uint64_t{hilbert};
  }
  auto operator<=>(const TileKey& o) const { return packed() <=> o.packed(); }
  bool operator==(const TileKey& o) const { return packed() == o.packed(); }
};

/// 8 big-endian bytes of the row key.
std::string encode_tile_key(const TileKey& k);

/// Inverse of encode_tile_key; input must be exactly 8 bytes.
TileKey decode_tile_key(const std::string& bytes);

/// An inclusive run of row keys sharing the raster/level/band prefix.
struct KeyRange {
  TileKey start;
  TileKey end;

  std::string start_bytes() const { return encode_tile_key(start); }
  std::string end_bytes() const { return encode_tile_key(end); }
  bool operator==(const KeyRange&) const = default;
};

/// Inclusive integer interval of grid rows or columns.
struct IndexRange {
  uint32_t lo = 0;
  uint32_t hi = 0;
  bool operator==(const IndexRange&) const = default;
};

/// Decompose a rectangle of grid cells into the minimal sorted list of
/// contiguous Hilbert code ranges, by recursive quadrant pruning over the
/// order-`order` curve for that grid. Rows map to y, columns to x. An empty
/// intersection yields an empty list.
std::vector<KeyRange> bbox_to_ranges(uint16_t raster_id, uint8_t band,
                                     uint8_t level, uint32_t order,
                                     const IndexRange& rows,
                                     const IndexRange& cols);

/// Row key of an image's archival metadata row: 2 big-endian bytes.
std::string metadata_row_key(uint16_t raster_id);
uint16_t parse_metadata_row_key(const std::string& bytes);

}  // namespace rastile

#endif  // RASTILE_KEYS_HPP
