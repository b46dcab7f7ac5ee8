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

#include "rastile/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>

#include "rastile/baseline.hpp"
#include "rastile/errors.hpp"
#include "rastile/hilbert.hpp"
#include "rastile/ingest.hpp"
#include "rastile/query.hpp"
#include "rastile/raster_io.hpp"

namespace rastile {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Dims {
  uint32_t width;
  uint32_t height;
};

Dims dims_for_bytes(uint64_t total_bytes, uint32_t bands) {
  const uint64_t plane = std::max<uint64_t>(1, total_bytes / bands);
  uint64_t w = 1;
  while (w * w < plane) w <<= 1;
  const uint64_t h = (plane + w - 1) / w;
  return Dims{static_cast<uint32_t>(w), static_cast<uint32_t>(std::max<uint64_t>(1, h))};
}

void log_line(const BenchOptions& opts, const std::string& msg) {
  if (opts.verbose) std::fprintf(stderr, "[bench] %s\n", msg.c_str());
}

/// Deterministic query workload: n boxes of bw x bh degrees placed uniformly
/// inside the extent.
std::vector<GeoExtent> make_bboxes(const GeoExtent& e, std::size_t n,
                                   uint64_t seed, double bw, double bh) {
  std::mt19937_64 rng(seed);
  std::vector<GeoExtent> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = static_cast<double>(rng() % 10000) / 10000.0;
    const double fy = static_cast<double>(rng() % 10000) / 10000.0;
    GeoExtent b;
    b.west = e.west + fx * (e.width() - bw);
    b.south = e.south + fy * (e.height() - bh);
    b.east = b.west + bw;
    b.north = b.south + bh;
    out.push_back(b);
  }
  return out;
}

std::vector<GeoPoint> make_points(const GeoExtent& e, std::size_t n,
                                  uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GeoPoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = static_cast<double>(rng() % 10000) / 10000.0;
    const double fy = static_cast<double>(rng() % 10000) / 10000.0;
    out.push_back(GeoPoint{e.west + fx * e.width(), e.south + fy * e.height()});
  }
  return out;
}

// Enough queries that the expected tile overhang per bbox, which grows with
// tile size, dominates per-query noise. The window is a fixed pixel span so
// the overhang ratio between adjacent tile sizes stays near 2x.
constexpr std::size_t kQueriesPerRep = 32;
constexpr double kBboxPixels = 256.0;

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

BenchDataset ensure_dataset(const fs::path& workdir, uint64_t approx_bytes,
                            uint64_t seed) {
  fs::create_directories(workdir);
  const uint32_t bands = 4;
  const Dims d = dims_for_bytes(approx_bytes, bands);
  BenchDataset ds;
  ds.width = d.width;
  ds.height = d.height;
  ds.bands = bands;
  ds.bytes = uint64_t{d.width} * d.height * bands;
  char name[64];
  std::snprintf(name, sizeof(name), "synth_%llu_%llu",
                static_cast<unsigned long long>(ds.bytes),
                static_cast<unsigned long long>(seed));
  ds.raster = workdir / (std::string(name) + ".rsr");
  ds.metadata = workdir / (std::string(name) + ".meta");
  if (!fs::exists(ds.raster) || !fs::exists(ds.metadata)) {
    const RasterImage img = gen_synthetic(d.width, d.height, bands, seed);
    write_raster(ds.raster, name, img);
    write_matching_metadata(ds.metadata, read_raster_header(ds.raster));
  }
  return ds;
}

std::vector<BenchRecord> run_bench_tile_size(const BenchOptions& opts) {
  std::vector<BenchRecord> records;
  const fs::path scratch = opts.workdir / "tilesize";
  fs::create_directories(scratch);

  for (std::size_t di = 0; di < opts.data_sizes.size(); ++di) {
    const BenchDataset ds = ensure_dataset(opts.workdir, opts.data_sizes[di], 42);
    for (const uint32_t ts : opts.tile_sizes) {
      const fs::path cluster_dir = scratch / ("c" + std::to_string(ts));
      std::vector<double> slice_ms;
      for (uint32_t run = 0; run < opts.runs; ++run) {
        fs::remove_all(cluster_dir);
        Cluster cluster = Cluster::create(cluster_dir, ClusterConfig{});
        IngestConfig cfg;
        cfg.tile_size = ts;
        cfg.fixed_time = "2026-01-01T00:00:00Z";
        const auto t0 = Clock::now();
        ingest_image(cluster, ds.raster, ds.metadata, cfg);
        slice_ms.push_back(ms_since(t0));
        log_line(opts, "slice ts=" + std::to_string(ts) + " bytes=" +
                           std::to_string(ds.bytes) + " run=" +
                           std::to_string(run) + " -> " +
                           std::to_string(slice_ms.back()) + " ms");
      }
      records.push_back(BenchRecord{"tile_size", ts, ds.bytes, 0, "tile",
                                    "slice_time", median(slice_ms), "ms",
                                    opts.runs});

      // Response times against the store left by the last run. The workload
      // is seeded by data size only, so every tile size sees the same
      // geography.
      Cluster cluster = Cluster::open(cluster_dir);
      const auto reg = load_registration(cluster.metadata_table(), 1);
      const double bw = reg.extent.width() * kBboxPixels / reg.width;
      const double bh = reg.extent.height() * kBboxPixels / reg.height;
      const auto bboxes =
          make_bboxes(reg.extent, kQueriesPerRep, ds.bytes, bw, bh);
      const auto points = make_points(reg.extent, kQueriesPerRep, ds.bytes + 1);

      // Two unmeasured repetitions warm the segment cache so medians compare
      // steady-state behaviour across tile sizes.
      for (int warm = 0; warm < 2; ++warm) {
        for (const auto& b : bboxes) query_bbox(TileQuery{1, 0, 0, b}, cluster);
        for (const auto& p : points) query_point(1, 0, 0, p, cluster);
      }
      std::vector<double> bbox_ms;
      std::vector<double> point_ms;
      for (uint32_t run = 0; run < opts.runs; ++run) {
        auto t0 = Clock::now();
        for (const auto& b : bboxes) {
          TileQuery q{1, 0, 0, b};
          query_bbox(q, cluster);
        }
        bbox_ms.push_back(ms_since(t0) / kQueriesPerRep);
        t0 = Clock::now();
        for (const auto& p : points) {
          query_point(1, 0, 0, p, cluster);
        }
        point_ms.push_back(ms_since(t0) / kQueriesPerRep);
      }
      records.push_back(BenchRecord{"tile_size", ts, ds.bytes, 0, "tile",
                                    "bbox_response", median(bbox_ms), "ms",
                                    opts.runs});
      records.push_back(BenchRecord{"tile_size", ts, ds.bytes, 0, "tile",
                                    "point_response", median(point_ms), "ms",
                                    opts.runs});
      fs::remove_all(cluster_dir);
    }
  }
  fs::remove_all(scratch);
  if (opts.csv_path) write_csv(*opts.csv_path, records, false);
  return records;
}

std::vector<BenchRecord> run_bench_scaling(const BenchOptions& opts) {
  std::vector<BenchRecord> records;
  const fs::path scratch = opts.workdir / "scaling";
  fs::create_directories(scratch);
  const uint32_t ts = 256;
  const uint64_t largest =
      *std::max_element(opts.data_sizes.begin(), opts.data_sizes.end());

  // Ingestion wall time vs node count at the largest size, both stores.
  for (const uint32_t n : opts.node_counts) {
    const BenchDataset ds = ensure_dataset(opts.workdir, largest, 42);
    std::vector<double> tile_ms;
    std::vector<double> base_ms;
    for (uint32_t run = 0; run < opts.runs; ++run) {
      const fs::path cdir = scratch / ("n" + std::to_string(n));
      fs::remove_all(cdir);
      ClusterConfig cc;
      cc.node_count = n;
      Cluster cluster = Cluster::create(cdir, cc);
      IngestConfig cfg;
      cfg.tile_size = ts;
      cfg.fixed_time = "2026-01-01T00:00:00Z";
      auto t0 = Clock::now();
      ingest_image(cluster, ds.raster, ds.metadata, cfg);
      tile_ms.push_back(ms_since(t0));
      fs::remove_all(cdir);

      const fs::path blog = scratch / "baseline.log";
      fs::remove(blog);
      auto [header, img] = read_raster(ds.raster);
      BaselineStore base(blog);
      const uint32_t levels = level_count_for(header.width, header.height, ts);
      t0 = Clock::now();
      emit_tile_cells(img, 1, ts, levels,
                      [&](const TileKey& k, std::string v) { base.append(k, v); });
      base.sync();
      base_ms.push_back(ms_since(t0));
      fs::remove(blog);
      log_line(opts, "scaling n=" + std::to_string(n) + " run=" +
                         std::to_string(run) + " tile=" +
                         std::to_string(tile_ms.back()) + "ms baseline=" +
                         std::to_string(base_ms.back()) + "ms");
    }
    records.push_back(BenchRecord{"scaling", ts, largest, n, "tile",
                                  "ingest_time", median(tile_ms), "ms",
                                  opts.runs});
    records.push_back(BenchRecord{"scaling", ts, largest, n, "baseline",
                                  "ingest_time", median(base_ms), "ms",
                                  opts.runs});
  }

  // Write time vs data size at fixed default nodes, both stores.
  for (const uint64_t size : opts.data_sizes) {
    const BenchDataset ds = ensure_dataset(opts.workdir, size, 42);
    std::vector<double> tile_ms;
    std::vector<double> base_ms;
    for (uint32_t run = 0; run < opts.runs; ++run) {
      const fs::path cdir = scratch / "size_sweep";
      fs::remove_all(cdir);
      Cluster cluster = Cluster::create(cdir, ClusterConfig{});
      IngestConfig cfg;
      cfg.tile_size = ts;
      cfg.fixed_time = "2026-01-01T00:00:00Z";
      auto t0 = Clock::now();
      ingest_image(cluster, ds.raster, ds.metadata, cfg);
      tile_ms.push_back(ms_since(t0));
      fs::remove_all(cdir);

      const fs::path blog = scratch / "baseline_size.log";
      fs::remove(blog);
      auto [header, img] = read_raster(ds.raster);
      BaselineStore base(blog);
      const uint32_t levels = level_count_for(header.width, header.height, ts);
      t0 = Clock::now();
      emit_tile_cells(img, 1, ts, levels,
                      [&](const TileKey& k, std::string v) { base.append(k, v); });
      base.sync();
      base_ms.push_back(ms_since(t0));
      fs::remove(blog);
    }
    records.push_back(BenchRecord{"scaling", ts, ds.bytes, 4, "tile",
                                  "write_time", median(tile_ms), "ms", opts.runs});
    records.push_back(BenchRecord{"scaling", ts, ds.bytes, 4, "baseline",
                                  "write_time", median(base_ms), "ms", opts.runs});
  }

  // Query latency of both stores at the largest size: indexed range scans
  // against a full-log linear scan.
  {
    const BenchDataset ds = ensure_dataset(opts.workdir, largest, 42);
    const fs::path cdir = scratch / "latency";
    fs::remove_all(cdir);
    Cluster cluster = Cluster::create(cdir, ClusterConfig{});
    IngestConfig cfg;
    cfg.tile_size = ts;
    cfg.fixed_time = "2026-01-01T00:00:00Z";
    ingest_image(cluster, ds.raster, ds.metadata, cfg);

    const fs::path blog = scratch / "latency_baseline.log";
    fs::remove(blog);
    BaselineStore base(blog);
    {
      auto [header, img] = read_raster(ds.raster);
      const uint32_t levels = level_count_for(header.width, header.height, ts);
      emit_tile_cells(img, 1, ts, levels, [&](const TileKey& k, std::string v) {
        base.append(k, v);
      });
      base.sync();
    }

    const auto reg = load_registration(cluster.metadata_table(), 1);
    const auto bboxes =
        make_bboxes(reg.extent, kQueriesPerRep, ds.bytes,
                    reg.extent.width() * kBboxPixels / reg.width,
                    reg.extent.height() * kBboxPixels / reg.height);
    std::vector<double> tile_ms;
    std::vector<double> base_ms;
    for (uint32_t run = 0; run < std::max<uint32_t>(3, opts.runs); ++run) {
      auto t0 = Clock::now();
      for (const auto& b : bboxes) {
        query_bbox(TileQuery{1, 0, 0, b}, cluster);
      }
      tile_ms.push_back(ms_since(t0) / kQueriesPerRep);

      t0 = Clock::now();
      for (const auto& b : bboxes) {
        const auto rect = resolve_query(TileQuery{1, 0, 0, b}, reg);
        if (rect.empty) continue;
        const uint32_t order =
            order_for_level(reg.grid_rows(0), reg.grid_cols(0));
        base.query_rect(1, 0, kPackedBandMarker, order, rect.rows, rect.cols);
      }
      base_ms.push_back(ms_since(t0) / kQueriesPerRep);
    }
    records.push_back(BenchRecord{"scaling", ts, ds.bytes, 4, "tile",
                                  "bbox_response", median(tile_ms), "ms",
                                  opts.runs});
    records.push_back(BenchRecord{"scaling", ts, ds.bytes, 4, "baseline",
                                  "bbox_response", median(base_ms), "ms",
                                  opts.runs});
    fs::remove_all(cdir);
    fs::remove(blog);
  }

  fs::remove_all(scratch);
  if (opts.csv_path) write_csv(*opts.csv_path, records, true);
  return records;
}

std::string csv_string(const std::vector<BenchRecord>& records,
                       bool scaling_schema) {
  std::string out;
  if (scaling_schema) {
    out +=
        "experiment,tile_size,data_size_bytes,node_count,store,metric,"
        "median_value_ms,runs\n";
  } else {
    out += "experiment,tile_size,data_size_bytes,metric,median_value_ms,runs\n";
  }
  char num[40];
  for (const auto& r : records) {
    std::snprintf(num, sizeof(num), "%.3f", r.median_value_ms);
    out += r.experiment + ',' + std::to_string(r.tile_size) + ',' +
           std::to_string(r.data_size_bytes) + ',';
    if (scaling_schema) {
      out += std::to_string(r.node_count) + ',' + r.store_kind + ',';
    }
    out += r.metric + ',' + num + ',' + std::to_string(r.runs) + '\n';
  }
  return out;
}

void write_csv(const fs::path& path, const std::vector<BenchRecord>& records,
               bool scaling_schema) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write CSV " + path.string());
  out << csv_string(records, scaling_schema);
  if (!out) throw Error("failed to write CSV " + path.string());
}

}  // namespace rastile
