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

#ifndef RASTILE_INGEST_HPP
#define RASTILE_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "rastile/cluster.hpp"
#include "rastile/metadata.hpp"
#include "rastile/query.hpp"
#include "rastile/raster_io.hpp"

namespace rastile {

struct IngestConfig {
  uint32_t tile_size = 256;
  /// Pyramid levels to build; defaults to level_count_for(image dims).
  std::optional<uint32_t> levels;
  std::string dialect = kDialectZy3Kv;
  /// Stamp for metadata creation/last_update; wall clock when absent.
  std::optional<std::string> fixed_time;
  /// One concurrent writer per node.
  bool parallel = true;
};

/// Visits every packed tile cell of an image in storage order: levels from 0
/// up, codes ascending within a level.
using CellSink = std::function<void(const TileKey&, std::string value)>;

/// Build the pyramid level by level and emit one packed BSQ cell per tile
/// address through `sink`. Returns the number of cells emitted.
uint64_t emit_tile_cells(const RasterImage& img, uint16_t raster_id,
                         uint32_t tile_size, uint32_t levels,
                         const CellSink& sink);

/// The full import pipeline: read and validate inputs, assign a fresh
/// raster id, build the per-band pyramid, pack co-located band tiles into
/// BSQ cells, place them across nodes, and record the archival row.
/// Raises ConflictError when the image name was already ingested.
uint16_t ingest_image(Cluster& cluster, const std::filesystem::path& raster_path,
                      const std::filesystem::path& metadata_path,
                      const IngestConfig& cfg = {});

/// Write a zy3-kv metadata document whose scene fields match the raster
/// header, for synthetic pipelines.
void write_matching_metadata(const std::filesystem::path& path,
                             const RasterFileHeader& header);

/// Lowest unused raster id in the cluster (ids start at 1).
uint16_t next_raster_id(Cluster& cluster);

}  // namespace rastile

#endif  // RASTILE_INGEST_HPP
