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

#include "rastile/query.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include "rastile/errors.hpp"
#include "rastile/hilbert.hpp"
#include "rastile/metadata.hpp"
#include "rastile/tile_cell.hpp"

namespace rastile {

namespace {

// Tolerant rounding for pixel positions computed from degree ratios; the
// slack is far above double rounding noise and far below one pixel.
constexpr double kPixelEps = 1e-7;

int64_t floor_tol(double x) { return static_cast<int64_t>(std::floor(x + kPixelEps)); }
int64_t ceil_tol(double x) { return static_cast<int64_t>(std::ceil(x - kPixelEps)); }

struct PixelRect {
  int64_t x0, x1, y0, y1;  // inclusive, y 0 at the north edge
};

// Pixel rectangle of `bbox` at `level`, half-open membership with the image
// east/north edges closed. Returns nullopt when the clipped area is empty.
std::optional<PixelRect> pixel_rect(const ImageRegistration& reg, uint32_t level,
                                    const GeoExtent& bbox) {
  const GeoExtent& e = reg.extent;
  const double qw = std::max(bbox.west, e.west);
  const double qe = std::min(bbox.east, e.east);
  const double qs = std::max(bbox.south, e.south);
  const double qn = std::min(bbox.north, e.north);
  if (!(qw < qe) || !(qs < qn)) return std::nullopt;

  const uint32_t w = reg.level_width(level);
  const uint32_t h = reg.level_height(level);
  const double resx = e.width() / static_cast<double>(w);
  const double resy = e.height() / static_cast<double>(h);

  PixelRect r;
  r.x0 = floor_tol((qw - e.west) / resx);
  r.x1 = ceil_tol((qe - e.west) / resx) - 1;
  r.y0 = static_cast<int64_t>(h) - ceil_tol((qn - e.south) / resy);
  r.y1 = static_cast<int64_t>(h) - 1 - floor_tol((qs - e.south) / resy);
  r.x0 = std::clamp<int64_t>(r.x0, 0, w - 1);
  r.x1 = std::clamp<int64_t>(r.x1, 0, w - 1);
  r.y0 = std::clamp<int64_t>(r.y0, 0, h - 1);
  r.y1 = std::clamp<int64_t>(r.y1, 0, h - 1);
  if (r.x1 < r.x0 || r.y1 < r.y0) return std::nullopt;
  return r;
}

constexpr char kRegName[] = "x_name";
constexpr char kRegWidth[] = "x_width";
constexpr char kRegHeight[] = "x_height";
constexpr char kRegBands[] = "x_bands";
constexpr char kRegTileSize[] = "x_tile_size";
constexpr char kRegLevels[] = "x_levels";
constexpr char kRegWest[] = "x_west";
constexpr char kRegEast[] = "x_east";
constexpr char kRegSouth[] = "x_south";
constexpr char kRegNorth[] = "x_north";

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_real(const std::string& s, const char* what) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw FormatError(std::string("bad registration value for ") + what);
  }
  return v;
}

uint64_t to_uint(const std::string& s, const char* what) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw FormatError(std::string("bad registration value for ") + what);
  }
  return v;
}

}  // namespace

GeoExtent ImageRegistration::tile_extent(const TileAddress& a) const {
  const uint32_t w = level_width(a.level);
  const uint32_t h = level_height(a.level);
  const double resx = extent.width() / static_cast<double>(w);
  const double resy = extent.height() / static_cast<double>(h);
  const uint32_t px0 = a.col * tile_size;
  const uint32_t px1 = std::min((a.col + 1) * tile_size, w);
  const uint32_t py0 = a.row * tile_size;
  const uint32_t py1 = std::min((a.row + 1) * tile_size, h);
  GeoExtent e;
  e.west = extent.west + px0 * resx;
  e.east = extent.west + px1 * resx;
  e.north = extent.north - py0 * resy;
  e.south = extent.north - py1 * resy;
  return e;
}

void store_registration(Table& metadata_table, const ImageRegistration& reg) {
  const std::string row = metadata_row_key(reg.raster_id);
  auto put = [&](const char* qual, const std::string& value) {
    metadata_table.put(row, kMetadataFamily, qual, value);
  };
  put(kRegName, reg.name);
  put(kRegWidth, std::to_string(reg.width));
  put(kRegHeight, std::to_string(reg.height));
  put(kRegBands, std::to_string(reg.band_count));
  put(kRegTileSize, std::to_string(reg.tile_size));
  put(kRegLevels, std::to_string(reg.level_count));
  put(kRegWest, format_real(reg.extent.west));
  put(kRegEast, format_real(reg.extent.east));
  put(kRegSouth, format_real(reg.extent.south));
  put(kRegNorth, format_real(reg.extent.north));
}

ImageRegistration load_registration(Table& metadata_table, uint16_t raster_id) {
  const auto cells = metadata_table.get(metadata_row_key(raster_id));
  if (cells.empty()) {
    throw NotFoundError("no image with raster id " + std::to_string(raster_id));
  }
  std::map<std::string, std::string> kv;
  for (const auto& c : cells) kv[c.qualifier] = c.value;
  auto need = [&](const char* qual) -> const std::string& {
    auto it = kv.find(qual);
    if (it == kv.end()) {
      throw FormatError(std::string("archival row missing qualifier ") + qual);
    }
    return it->second;
  };
  ImageRegistration reg;
  reg.raster_id = raster_id;
  reg.name = need(kRegName);
  reg.width = static_cast<uint32_t>(to_uint(need(kRegWidth), kRegWidth));
  reg.height = static_cast<uint32_t>(to_uint(need(kRegHeight), kRegHeight));
  reg.band_count = static_cast<uint32_t>(to_uint(need(kRegBands), kRegBands));
  reg.tile_size = static_cast<uint32_t>(to_uint(need(kRegTileSize), kRegTileSize));
  reg.level_count = static_cast<uint32_t>(to_uint(need(kRegLevels), kRegLevels));
  reg.extent.west = to_real(need(kRegWest), kRegWest);
  reg.extent.east = to_real(need(kRegEast), kRegEast);
  reg.extent.south = to_real(need(kRegSouth), kRegSouth);
  reg.extent.north = to_real(need(kRegNorth), kRegNorth);
  return reg;
}

GridRect resolve_query(const TileQuery& q, const ImageRegistration& reg) {
  if (q.level >= reg.level_count) {
    throw DomainError("level " + std::to_string(q.level) +
                      " out of range, image has " +
                      std::to_string(reg.level_count) + " levels");
  }
  if (!q.extent.valid()) throw DomainError("invalid query extent");
  GridRect rect;
  const auto px = pixel_rect(reg, q.level, q.extent);
  if (!px) return rect;
  rect.empty = false;
  rect.rows = IndexRange{static_cast<uint32_t>(px->y0 / reg.tile_size),
                         static_cast<uint32_t>(px->y1 / reg.tile_size)};
  rect.cols = IndexRange{static_cast<uint32_t>(px->x0 / reg.tile_size),
                         static_cast<uint32_t>(px->x1 / reg.tile_size)};
  return rect;
}

QueryResult query_bbox(const TileQuery& q, Cluster& cluster) {
  const auto t0 = std::chrono::steady_clock::now();
  QueryResult result;
  result.query = q;
  result.registration = load_registration(cluster.metadata_table(), q.raster_id);
  const ImageRegistration& reg = result.registration;
  if (q.band >= reg.band_count) {
    throw DomainError("band " + std::to_string(q.band) + " out of range");
  }

  const GridRect rect = resolve_query(q, reg);
  if (rect.empty) {
    result.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }

  const uint32_t order =
      order_for_level(reg.grid_rows(q.level), reg.grid_cols(q.level));
  const auto ranges = bbox_to_ranges(q.raster_id, kPackedBandMarker,
                                     static_cast<uint8_t>(q.level), order,
                                     rect.rows, rect.cols);
  result.ranges_scanned = ranges.size();

  auto scatter = cluster.scatter_scan(tile_table_name(q.raster_id), ranges);
  result.nodes_touched = scatter.nodes_touched;

  std::set<TileAddress> expected;
  for (uint32_t r = rect.rows.lo; r <= rect.rows.hi; ++r) {
    for (uint32_t c = rect.cols.lo; c <= rect.cols.hi; ++c) {
      expected.insert(TileAddress{q.level, r, c});
    }
  }

  for (const auto& cell : scatter.cells) {
    const TileKey key = decode_tile_key(cell.row_key);
    const auto [x, y] = hilbert_decode(order, key.hilbert);
    const TileAddress addr{q.level, y, x};
    if (!expected.erase(addr)) continue;  // outside the rectangle or duplicate
    const TileCellInfo info = tile_cell_info(cell.value);
    Tile tile;
    tile.address = addr;
    tile.band = q.band;
    tile.tile_size = info.tile_size;
    tile.valid_width = info.valid_width;
    tile.valid_height = info.valid_height;
    tile.pixels = tile_cell_band(cell.value, q.band);
    result.tiles.push_back(std::move(tile));
  }
  result.missing.assign(expected.begin(), expected.end());
  result.elapsed = std::chrono::steady_clock::now() - t0;
  return result;
}

Tile query_point(uint16_t raster_id, uint32_t band, uint32_t level,
                 const GeoPoint& p, Cluster& cluster) {
  ImageRegistration reg = load_registration(cluster.metadata_table(), raster_id);
  if (level >= reg.level_count) {
    throw DomainError("level " + std::to_string(level) + " out of range");
  }
  if (band >= reg.band_count) {
    throw DomainError("band " + std::to_string(band) + " out of range");
  }
  if (!reg.extent.contains_closed(p)) {
    throw NotFoundError("point outside image extent");
  }
  const uint32_t w = reg.level_width(level);
  const uint32_t h = reg.level_height(level);
  const double resx = reg.extent.width() / static_cast<double>(w);
  const double resy = reg.extent.height() / static_cast<double>(h);
  int64_t px = floor_tol((p.lon - reg.extent.west) / resx);
  int64_t py = static_cast<int64_t>(h) - 1 -
               floor_tol((p.lat - reg.extent.south) / resy);
  px = std::clamp<int64_t>(px, 0, w - 1);
  py = std::clamp<int64_t>(py, 0, h - 1);

  TileQuery q;
  q.raster_id = raster_id;
  q.band = band;
  q.level = level;
  q.extent = reg.tile_extent(TileAddress{
      level, static_cast<uint32_t>(py / reg.tile_size),
      static_cast<uint32_t>(px / reg.tile_size)});
  QueryResult r = query_bbox(q, cluster);
  for (auto& t : r.tiles) {
    if (t.address.row == py / reg.tile_size && t.address.col == px / reg.tile_size) {
      return std::move(t);
    }
  }
  throw NotFoundError("tile for point not present in store");
}

RasterBand mosaic(const QueryResult& result, const GeoExtent& bbox) {
  const ImageRegistration& reg = result.registration;
  const uint32_t level = result.query.level;
  if (!result.missing.empty()) {
    std::string msg = "query result incomplete, missing tiles:";
    for (const auto& a : result.missing) msg += " " + a.to_string();
    throw IncompleteMosaicError(msg, result.missing);
  }
  const auto px = pixel_rect(reg, level, bbox);
  if (!px) throw DomainError("mosaic bbox does not intersect the image");

  std::map<std::pair<uint32_t, uint32_t>, const Tile*> by_addr;
  for (const auto& t : result.tiles) {
    by_addr[{t.address.row, t.address.col}] = &t;
  }

  const uint32_t ts = reg.tile_size;
  RasterBand out;
  out.width = static_cast<uint32_t>(px->x1 - px->x0 + 1);
  out.height = static_cast<uint32_t>(px->y1 - px->y0 + 1);
  out.samples.assign(std::size_t{out.width} * out.height, 0);

  std::vector<TileAddress> missing;
  const uint32_t r0 = static_cast<uint32_t>(px->y0) / ts;
  const uint32_t r1 = static_cast<uint32_t>(px->y1) / ts;
  const uint32_t c0 = static_cast<uint32_t>(px->x0) / ts;
  const uint32_t c1 = static_cast<uint32_t>(px->x1) / ts;
  for (uint32_t r = r0; r <= r1; ++r) {
    for (uint32_t c = c0; c <= c1; ++c) {
      auto it = by_addr.find({r, c});
      if (it == by_addr.end()) {
        missing.push_back(TileAddress{level, r, c});
        continue;
      }
      const Tile& t = *it->second;
      // Intersection of the tile's valid pixels with the crop window.
      const int64_t tx0 = std::max<int64_t>(px->x0, int64_t{c} * ts);
      const int64_t tx1 = std::min<int64_t>(px->x1, int64_t{c} * ts + t.valid_width - 1);
      const int64_t ty0 = std::max<int64_t>(px->y0, int64_t{r} * ts);
      const int64_t ty1 = std::min<int64_t>(px->y1, int64_t{r} * ts + t.valid_height - 1);
      for (int64_t y = ty0; y <= ty1; ++y) {
        if (tx1 < tx0) break;
        const std::size_t src =
            std::size_t(y - int64_t{r} * ts) * t.tile_size + (tx0 - int64_t{c} * ts);
        const std::size_t dst =
            std::size_t(y - px->y0) * out.width + (tx0 - px->x0);
        std::memcpy(&out.samples[dst], &t.pixels[src],
                    static_cast<std::size_t>(tx1 - tx0 + 1));
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "mosaic needs tiles absent from the result:";
    for (const auto& a : missing) msg += " " + a.to_string();
    throw IncompleteMosaicError(msg, std::move(missing));
  }
  return out;
}

}  // namespace rastile
