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

#ifndef RASTILE_QUERY_HPP
#define RASTILE_QUERY_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "rastile/cluster.hpp"
#include "rastile/geo.hpp"
#include "rastile/keys.hpp"
#include "rastile/pyramid.hpp"

namespace rastile {

/// Geo-registration of a stored image, read from its archival row.
struct ImageRegistration {
  uint16_t raster_id = 0;
  std::string name;
  GeoExtent extent;
  uint32_t width = 0;
  uint32_t height = 0;
  uint32_t band_count = 0;
  uint32_t tile_size = 0;
  uint32_t level_count = 0;

  uint32_t level_width(uint32_t level) const { return level_dim(width, level); }
  uint32_t level_height(uint32_t level) const { return level_dim(height, level); }
  uint32_t grid_rows(uint32_t level) const {
    return grid_len(level_height(level), tile_size);
  }
  uint32_t grid_cols(uint32_t level) const {
    return grid_len(level_width(level), tile_size);
  }

  /// Geographic extent of an image-local tile, trimmed to the valid region of
  /// edge tiles. Pixel row 0 sits at the north edge.
  GeoExtent tile_extent(const TileAddress& a) const;
};

/// Write the registration's system qualifiers (reserved "x_" prefix) into the
/// image's archival row.
void store_registration(Table& metadata_table, const ImageRegistration& reg);

ImageRegistration load_registration(Table& metadata_table, uint16_t raster_id);

/// A georeferenced tile request at one image-local pyramid level.
struct TileQuery {
  uint16_t raster_id = 0;
  uint32_t band = 0;
  uint32_t level = 0;
  GeoExtent extent;
};

/// Inclusive tile row/col rectangle, or empty.
struct GridRect {
  bool empty = true;
  IndexRange rows;
  IndexRange cols;
};

/// Map the query extent through the image registration to tile row/col ranges
/// at the query level. Tile membership is west/south-inclusive with the image
/// east/north edges closed.
GridRect resolve_query(const TileQuery& q, const ImageRegistration& reg);

struct QueryResult {
  std::vector<Tile> tiles;
  std::size_t ranges_scanned = 0;
  std::size_t nodes_touched = 0;
  std::chrono::duration<double, std::milli> elapsed{0};
  std::vector<TileAddress> missing;
  TileQuery query;
  ImageRegistration registration;
};

/// Resolve, decompose into Hilbert ranges, scatter-scan and decode the
/// requested band's tiles. Addresses the store never received are reported in
/// `missing`, not raised.
QueryResult query_bbox(const TileQuery& q, Cluster& cluster);

/// The single tile whose extent contains p.
Tile query_point(uint16_t raster_id, uint32_t band, uint32_t level,
                 const GeoPoint& p, Cluster& cluster);

/// Pixel-exact crop of the level image over the bbox, assembled from a
/// complete query result.
RasterBand mosaic(const QueryResult& result, const GeoExtent& bbox);

}  // namespace rastile

#endif  // RASTILE_QUERY_HPP
