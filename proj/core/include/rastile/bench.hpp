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

#ifndef RASTILE_BENCH_HPP
#define RASTILE_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rastile {

/// One aggregated measurement row. `runs` is the repetition count the median
/// was taken over.
struct BenchRecord {
  std::string experiment;
  uint32_t tile_size = 0;
  uint64_t data_size_bytes = 0;
  uint32_t node_count = 0;
  std::string store_kind;
  std::string metric;
  double median_value_ms = 0.0;
  std::string units = "ms";
  uint32_t runs = 1;
};

struct BenchOptions {
  /// Scratch directory for generated rasters and stores.
  std::filesystem::path workdir;
  uint32_t runs = 5;
  std::vector<uint32_t> tile_sizes = {128, 256, 512, 1024};
  /// Total image bytes (all bands) per dataset.
  std::vector<uint64_t> data_sizes = {64ull << 20, 256ull << 20, 512ull << 20};
  std::vector<uint32_t> node_counts = {1, 2, 4, 8};
  std::optional<std::filesystem::path> csv_path;
  bool verbose = false;
};

/// Tile-size sweep: for every (tile_size, data_size), the median import time
/// and the median bbox/point response times over `runs` repetitions.
/// Metrics: slice_time, bbox_response, point_response.
std::vector<BenchRecord> run_bench_tile_size(const BenchOptions& opts);

/// Scaling sweep: ingestion wall time per node count for the tile store and
/// the baseline log, plus write time per data size at fixed nodes, plus the
/// bbox query latency of both stores at the largest size.
/// Metrics: ingest_time, write_time, bbox_response.
std::vector<BenchRecord> run_bench_scaling(const BenchOptions& opts);

/// CSV text with a header row; scaling rows carry node_count and store
/// columns.
std::string csv_string(const std::vector<BenchRecord>& records,
                       bool scaling_schema);
void write_csv(const std::filesystem::path& path,
               const std::vector<BenchRecord>& records, bool scaling_schema);

double median(std::vector<double> values);

/// A cached synthetic dataset: raster file, matching metadata file, actual
/// byte size (power-of-two dimensions, 4 bands).
struct BenchDataset {
  std::filesystem::path raster;
  std::filesystem::path metadata;
  uint32_t width = 0;
  uint32_t height = 0;
  uint32_t bands = 4;
  uint64_t bytes = 0;
};

/// Generate (or reuse) the synthetic dataset closest to `approx_bytes`.
BenchDataset ensure_dataset(const std::filesystem::path& workdir,
                            uint64_t approx_bytes, uint64_t seed);

}  // namespace rastile

#endif  // RASTILE_BENCH_HPP
