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

#include "rastile/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rastile/errors.hpp"
#include "rastile/hilbert.hpp"
#include "rastile/tile_cell.hpp"

namespace rastile {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex_key(const TileKey& k) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(k.packed()));
  return buf;
}

// "Tilescodes" field: per level, the stored row key range lo-hi in hex,
// comma-separated.
std::string tiles_codes_string(uint16_t raster_id, uint32_t tile_size,
                               uint32_t levels, uint32_t width, uint32_t height) {
  std::string out;
  for (uint32_t p = 0; p < levels; ++p) {
    const uint32_t rows = grid_len(level_dim(height, p), tile_size);
    const uint32_t cols = grid_len(level_dim(width, p), tile_size);
    const uint32_t order = order_for_level(rows, cols);
    uint32_t lo = 0, hi = 0;
    bool first = true;
    for (uint32_t r = 0; r < rows; ++r) {
      for (uint32_t c = 0; c < cols; ++c) {
        const uint32_t code =
            static_cast<uint32_t>(hilbert_encode(order, c, r));
        if (first || code < lo) lo = code;
        if (first || code > hi) hi = code;
        first = false;
      }
    }
    const TileKey klo{raster_id, static_cast<uint8_t>(p), kPackedBandMarker, lo};
    const TileKey khi{raster_id, static_cast<uint8_t>(p), kPackedBandMarker, hi};
    if (!out.empty()) out += ",";
    out += hex_key(klo) + "-" + hex_key(khi);
  }
  return out;
}

}  // namespace

uint64_t emit_tile_cells(const RasterImage& img, uint16_t raster_id,
                         uint32_t tile_size, uint32_t levels,
                         const CellSink& sink) {
  uint64_t emitted = 0;
  // Level 0 reads the source bands in place; coarser levels own their data.
  std::vector<RasterBand> owned;
  std::vector<const RasterBand*> current;
  for (const auto& b : img.bands) current.push_back(&b);

  for (uint32_t p = 0; p < levels; ++p) {
    if (p > 0) {
      std::vector<RasterBand> next;
      next.reserve(current.size());
      for (const RasterBand* b : current) next.push_back(downsample(*b));
      owned = std::move(next);
      current.clear();
      for (const auto& b : owned) current.push_back(&b);
    }
    const uint32_t rows = grid_len(current[0]->height, tile_size);
    const uint32_t cols = grid_len(current[0]->width, tile_size);
    const uint32_t order = order_for_level(rows, cols);

    // Emit in ascending code order so placement sees the curve order.
    std::vector<std::pair<uint32_t, std::pair<uint32_t, uint32_t>>> cells;
    cells.reserve(std::size_t{rows} * cols);
    for (uint32_t r = 0; r < rows; ++r) {
      for (uint32_t c = 0; c < cols; ++c) {
        cells.emplace_back(static_cast<uint32_t>(hilbert_encode(order, c, r)),
                           std::make_pair(r, c));
      }
    }
    std::sort(cells.begin(), cells.end());

    for (const auto& [code, rc] : cells) {
      std::vector<Tile> band_tiles;
      band_tiles.reserve(current.size());
      std::vector<const Tile*> refs;
      for (uint32_t bi = 0; bi < current.size(); ++bi) {
        const RasterBand& band = *current[bi];
        const uint32_t y0 = rc.first * tile_size;
        const uint32_t x0 = rc.second * tile_size;
        Tile t;
        t.address = TileAddress{p, rc.first, rc.second};
        t.band = bi;
        t.tile_size = tile_size;
        t.valid_height = std::min(tile_size, band.height - y0);
        t.valid_width = std::min(tile_size, band.width - x0);
        t.pixels.assign(std::size_t{tile_size} * tile_size, 0);
        for (uint32_t y = 0; y < t.valid_height; ++y) {
          std::copy_n(&band.samples[std::size_t{y0 + y} * band.width + x0],
                      t.valid_width, &t.pixels[std::size_t{y} * tile_size]);
        }
        band_tiles.push_back(std::move(t));
      }
      for (const auto& t : band_tiles) refs.push_back(&t);
      TileKey key{raster_id, static_cast<uint8_t>(p), kPackedBandMarker, code};
      sink(key, pack_tile_cell(refs));
      ++emitted;
    }
  }
  return emitted;
}

uint16_t next_raster_id(Cluster& cluster) {
  Table& meta = cluster.metadata_table();
  const auto cells = meta.scan(std::string("\x00\x00", 2), std::string("\xff\xff", 2));
  uint16_t max_id = 0;
  for (const auto& c : cells) {
    max_id = std::max(max_id, parse_metadata_row_key(c.row_key));
  }
  if (max_id == 0xffff) throw ConflictError("raster id space exhausted");
  return static_cast<uint16_t>(max_id + 1);
}

void write_matching_metadata(const std::filesystem::path& path,
                             const RasterFileHeader& header) {
  const GeoExtent& e = header.extent;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write metadata file " + path.string());
  out << "Satellite-ID: SYNTH-1\n"
      << "Sensor-ID: RNG\n"
      << "ImageName: " << header.name << "\n"
      << "ReceiveTime: 2026-01-01T00:00:00Z\n"
      << "ProductFormat: RSR\n"
      << "ProductLevel: L0\n"
      << "CloudPercent: 0\n";
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "TopLeftLatitude: " << real(e.north) << "\n"
      << "TopLeftLongitude: " << real(e.west) << "\n"
      << "TopRightLatitude: " << real(e.north) << "\n"
      << "TopRightLongitude: " << real(e.east) << "\n"
      << "BottomRightLatitude: " << real(e.south) << "\n"
      << "BottomRightLongitude: " << real(e.east) << "\n"
      << "BottomLeftLatitude: " << real(e.south) << "\n"
      << "BottomLeftLongitude: " << real(e.west) << "\n"
      << "CenterLongitude: " << real((e.west + e.east) / 2) << "\n"
      << "CenterLatitude: " << real((e.south + e.north) / 2) << "\n";
  if (!out) throw Error("failed to write metadata file " + path.string());
}

uint16_t ingest_image(Cluster& cluster, const std::filesystem::path& raster_path,
                      const std::filesystem::path& metadata_path,
                      const IngestConfig& cfg) {
  if (!valid_tile_size(cfg.tile_size)) {
    throw DomainError("tile size must be one of 128/256/512/1024");
  }

  const auto doc = parse_source(read_text_file(metadata_path), cfg.dialect);
  UnifiedMetadata meta = normalize(doc, cfg.fixed_time);
  const auto violations = validate(meta);
  if (!violations.empty()) {
    std::string msg = "metadata validation failed:";
    for (const auto& v : violations) {
      msg += " " + v.field + " (" + v.constraint + ")";
    }
    throw DomainError(msg);
  }

  auto [header, img] = read_raster(raster_path);
  if (header.band_count > 254) {
    throw DomainError("at most 254 bands are supported");
  }
  const uint32_t max_levels =
      level_count_for(header.width, header.height, cfg.tile_size);
  const uint32_t levels = cfg.levels.value_or(max_levels);
  if (levels < 1 || levels > max_levels) {
    throw DomainError("levels must be in [1, " + std::to_string(max_levels) +
                      "] for this image");
  }

  // Name conflict check against every archival row.
  Table& meta_table = cluster.metadata_table();
  for (const auto& c :
       meta_table.scan(std::string("\x00\x00", 2), std::string("\xff\xff", 2))) {
    if (c.qualifier == "x_name" && c.value == header.name) {
      throw ConflictError("image '" + header.name + "' already ingested");
    }
  }

  const uint16_t raster_id = next_raster_id(cluster);
  cluster.create_table_all_nodes(
      TableSchema{tile_table_name(raster_id), {kTileFamily}, 1});

  auto session = cluster.begin_ingest(tile_table_name(raster_id), cfg.parallel);
  emit_tile_cells(img, raster_id, cfg.tile_size, levels,
                  [&](const TileKey& key, std::string value) {
                    session.feed(key, std::move(value));
                  });
  session.close();

  meta.image_name = meta.image_name.value_or(header.name);
  meta.file_path = meta.file_path.value_or(raster_path.string());
  meta.level = static_cast<int64_t>(levels);
  meta.tiles_codes = tiles_codes_string(raster_id, cfg.tile_size, levels,
                                        header.width, header.height);

  const std::string row = metadata_row_key(raster_id);
  for (const auto& [qualifier, value] : to_row(meta)) {
    meta_table.put(row, kMetadataFamily, qualifier, value);
  }
  ImageRegistration reg;
  reg.raster_id = raster_id;
  reg.name = header.name;
  reg.extent = header.extent;
  reg.width = header.width;
  reg.height = header.height;
  reg.band_count = header.band_count;
  reg.tile_size = cfg.tile_size;
  reg.level_count = levels;
  store_registration(meta_table, reg);
  meta_table.flush();

  return raster_id;
}

}  // namespace rastile
