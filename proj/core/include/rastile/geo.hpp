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

#ifndef RASTILE_GEO_HPP
#define RASTILE_GEO_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace rastile {

/// A WGS84 position in degrees. Valid longitudes lie in [-180, 180] and
/// latitudes in [-90, 90]; the grid math treats the upper edges as closed
/// and clamps them into the last cell.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

/// Axis-aligned bounding box in degrees, west < east and south < north.
/// Membership is half-open: west/south edges inclusive, east/north exclusive.
struct GeoExtent {
  double west = 0.0;
  double east = 0.0;
  double south = 0.0;
  double north = 0.0;

  bool valid() const;
  double width() const { return east - west; }
  double height() const { return north - south; }

  /// Half-open containment (west/south in, east/north out).
  bool contains(const GeoPoint& p) const {
    return p.lon >= west && p.lon < east && p.lat >= south && p.lat < north;
  }
  /// Containment with all four edges closed.
  bool contains_closed(const GeoPoint& p) const {
    return p.lon >= west && p.lon <= east && p.lat >= south && p.lat <= north;
  }
  /// Strict interior overlap; rectangles that merely touch do not intersect.
  bool intersects(const GeoExtent& o) const {
    return west < o.east && o.west < east && south < o.north && o.south < north;
  }

  bool operator==(const GeoExtent&) const = default;
};

/// World bounds of the plate-carree grid.
GeoExtent world_extent();

/// Tile identity within a grid: pyramid/grid level plus row and column.
struct TileAddress {
  uint32_t level = 0;
  uint32_t row = 0;
  uint32_t col = 0;

  auto operator<=>(const TileAddress&) const = default;
  std::string to_string() const;
};

/// Rows in the global grid at level k: 2^k.
uint64_t global_grid_rows(uint32_t level);
/// Columns in the global grid at level k: 2^(k+1).
uint64_t global_grid_cols(uint32_t level);

/// Global-grid address of the tile containing p at level k. Row 0 sits at the
/// south edge and column 0 at the west edge; lon = 180 and lat = 90 clamp into
/// the last column/row.
TileAddress tile_address_of(const GeoPoint& p, uint32_t level);

/// Geographic area of a global-grid tile. Tiles are square in degrees with
/// edge 180/2^k.
GeoExtent extent_of(const TileAddress& a);

}  // namespace rastile

#endif  // RASTILE_GEO_HPP
