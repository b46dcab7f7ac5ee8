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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rastile/baseline.hpp"
#include "rastile/bench.hpp"
#include "rastile/cluster.hpp"
#include "rastile/errors.hpp"
#include "rastile/ingest.hpp"
#include "rastile/metadata.hpp"
#include "rastile/query.hpp"
#include "rastile/raster_io.hpp"

namespace fs = std::filesystem;
using namespace rastile;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

// RASTILE_DATA_DIR takes precedence over --data-dir.
fs::path resolve_data_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("RASTILE_DATA_DIR"); env && *env) {
    return fs::path(env);
  }
  if (!flag_value.empty()) return fs::path(flag_value);
  return fs::path("rastile_data");
}

Cluster open_or_create_cluster(const fs::path& dir, const ClusterConfig& cfg,
                               bool nodes_set, bool bucket_set, bool period_set) {
  if (fs::exists(dir / "cluster.json")) {
    Cluster cluster = Cluster::open(dir);
    const ClusterConfig& stored = cluster.config();
    if ((nodes_set && cfg.node_count != stored.node_count) ||
        (bucket_set && cfg.bucket_size != stored.bucket_size) ||
        (period_set && cfg.period_size != stored.period_size)) {
      throw DomainError("cluster at " + dir.string() +
                        " already initialized with nodes=" +
                        std::to_string(stored.node_count) + " bucket=" +
                        std::to_string(stored.bucket_size) + " period=" +
                        std::to_string(stored.period_size) +
                        "; omit or match the placement flags");
    }
    return cluster;
  }
  return Cluster::create(dir, cfg);
}

Cluster open_cluster(const fs::path& dir) {
  if (!fs::exists(dir / "cluster.json")) {
    throw NotFoundError("no store at " + dir.string() +
                        "; ingest an image first or set RASTILE_DATA_DIR");
  }
  return Cluster::open(dir);
}

void write_band_raster(const fs::path& out, const std::string& name,
                       const RasterBand& band, const GeoExtent& extent) {
  RasterImage img;
  img.width = band.width;
  img.height = band.height;
  img.extent = extent;
  img.bands.push_back(band);
  write_raster(out, name, img);
}

std::vector<uint64_t> parse_mb_list(const std::vector<uint32_t>& mb) {
  std::vector<uint64_t> bytes;
  for (uint32_t m : mb) bytes.push_back(uint64_t{m} << 20);
  return bytes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rastile: tiled raster storage over a simulated key-value cluster"};
  app.require_subcommand(1);

  std::string data_dir_flag;

  // --- ingest ---------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Import a raster and its metadata");
  std::string ingest_raster, ingest_meta;
  std::string ingest_dialect = kDialectZy3Kv;
  uint32_t ingest_tile_size = 256;
  std::optional<uint32_t> ingest_levels;
  ClusterConfig ingest_cfg;
  ingest->add_option("raster", ingest_raster, "Raster file (.rsr)")->required();
  ingest->add_option("metadata", ingest_meta, "Metadata text file")->required();
  ingest->add_option("--dialect", ingest_dialect, "Metadata dialect")
      ->check(CLI::IsMember({kDialectLandsatMtl, kDialectZy3Kv}));
  ingest->add_option("--tile-size", ingest_tile_size, "Tile edge in pixels")
      ->check(CLI::IsMember({128, 256, 512, 1024}));
  auto* levels_opt = ingest->add_option("--levels", "Pyramid levels to build");
  auto* nodes_opt = ingest->add_option("--nodes", ingest_cfg.node_count,
                                       "Simulated node count");
  auto* bucket_opt = ingest->add_option("--bucket", ingest_cfg.bucket_size,
                                        "BPS bucket size in tiles");
  auto* period_opt = ingest->add_option("--period", ingest_cfg.period_size,
                                        "PSS flush period in tiles");
  ingest->add_option("--data-dir", data_dir_flag, "Store directory");

  // --- query ----------------------------------------------------------
  auto* query = app.add_subcommand("query", "Retrieve tiles by geography");
  query->require_subcommand(1);
  auto* qbbox = query->add_subcommand("bbox", "Query a bounding box");
  auto* qpoint = query->add_subcommand("point", "Query a single point");
  uint16_t q_raster = 0;
  uint32_t q_band = 0, q_level = 0;
  std::vector<double> q_coords;
  std::string q_out;
  for (CLI::App* sub : {qbbox, qpoint}) {
    sub->add_option("raster-id", q_raster, "Raster id")->required();
    sub->add_option("band", q_band, "Band index")->required();
    sub->add_option("level", q_level, "Pyramid level")->required();
    sub->add_option("--data-dir", data_dir_flag, "Store directory");
  }
  qbbox->add_option("coords", q_coords, "west east south north")
      ->expected(4)
      ->required();
  qpoint->add_option("coords", q_coords, "lon lat")->expected(2)->required();
  qbbox->add_option("--out", q_out, "Write the mosaic crop to this .rsr file");
  qpoint->add_option("--out", q_out, "Write the tile to this .rsr file");

  // --- meta -----------------------------------------------------------
  auto* meta = app.add_subcommand("meta", "Metadata utilities");
  meta->require_subcommand(1);
  auto* meta_norm = meta->add_subcommand("normalize",
                                         "Normalize a metadata file to JSON");
  std::string meta_file, meta_dialect;
  meta_norm->add_option("file", meta_file, "Metadata text file")->required();
  meta_norm->add_option("--dialect", meta_dialect, "Metadata dialect")
      ->required()
      ->check(CLI::IsMember({kDialectLandsatMtl, kDialectZy3Kv}));

  // --- gen ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a synthetic raster");
  uint32_t gen_w = 0, gen_h = 0, gen_bands = 0;
  uint64_t gen_seed = 0;
  std::string gen_out, gen_meta_out;
  gen->add_option("width", gen_w, "Width in pixels")->required();
  gen->add_option("height", gen_h, "Height in pixels")->required();
  gen->add_option("bands", gen_bands, "Band count")->required();
  gen->add_option("seed", gen_seed, "PRNG seed")->required();
  gen->add_option("out", gen_out, "Output raster path")->required();
  gen->add_option("--meta", gen_meta_out,
                  "Also write a matching zy3-kv metadata file");

  // --- bench ----------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Run the benchmark experiments");
  bench->require_subcommand(1);
  auto* bench_ts = bench->add_subcommand("tilesize",
                                         "Sweep tile size and data size");
  auto* bench_sc = bench->add_subcommand("scaling",
                                         "Sweep node count and data size");
  std::string bench_csv, bench_workdir = "rastile_bench";
  uint32_t bench_runs = 5;
  std::vector<uint32_t> bench_sizes_mb = {64, 256, 512};
  std::vector<uint32_t> bench_tile_sizes = {128, 256, 512, 1024};
  std::vector<uint32_t> bench_nodes = {1, 2, 4, 8};
  bool bench_verbose = false;
  for (CLI::App* sub : {bench_ts, bench_sc}) {
    sub->add_option("--csv", bench_csv, "Write results to this CSV file");
    sub->add_option("--runs", bench_runs, "Repetitions per measurement");
    sub->add_option("--data-sizes", bench_sizes_mb, "Dataset sizes in MB");
    sub->add_option("--workdir", bench_workdir, "Scratch directory");
    sub->add_flag("--verbose", bench_verbose, "Progress to stderr");
  }
  bench_ts->add_option("--tile-sizes", bench_tile_sizes, "Tile sizes to sweep");
  bench_sc->add_option("--nodes", bench_nodes, "Node counts to sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "rastile: " << e.what() << "\n";
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*ingest) {
      if (levels_opt->count()) {
        ingest_levels = levels_opt->as<uint32_t>();
      }
      const fs::path dir = resolve_data_dir(data_dir_flag);
      Cluster cluster = open_or_create_cluster(
          dir, ingest_cfg, nodes_opt->count() > 0, bucket_opt->count() > 0,
          period_opt->count() > 0);
      IngestConfig cfg;
      cfg.tile_size = ingest_tile_size;
      cfg.levels = ingest_levels;
      cfg.dialect = ingest_dialect;
      const uint16_t id = ingest_image(cluster, ingest_raster, ingest_meta, cfg);
      std::cout << id << "\n";
      return kExitOk;
    }

    if (*query) {
      Cluster cluster = open_cluster(resolve_data_dir(data_dir_flag));
      if (*qbbox) {
        GeoExtent bbox{q_coords[0], q_coords[1], q_coords[2], q_coords[3]};
        const auto result =
            query_bbox(TileQuery{q_raster, q_band, q_level, bbox}, cluster);
        std::cout << "tiles: " << result.tiles.size()
                  << " ranges: " << result.ranges_scanned
                  << " nodes: " << result.nodes_touched
                  << " elapsed_ms: " << result.elapsed.count() << "\n";
        for (const auto& t : result.tiles) {
          std::cout << "  tile " << t.address.to_string() << "\n";
        }
        if (!result.missing.empty()) {
          std::cerr << "rastile: " << result.missing.size()
                    << " addresses missing from the store\n";
        }
        if (!q_out.empty()) {
          const RasterBand crop = mosaic(result, bbox);
          GeoExtent clipped;
          clipped.west = std::max(bbox.west, result.registration.extent.west);
          clipped.east = std::min(bbox.east, result.registration.extent.east);
          clipped.south = std::max(bbox.south, result.registration.extent.south);
          clipped.north = std::min(bbox.north, result.registration.extent.north);
          write_band_raster(q_out, "bbox_crop", crop, clipped);
          std::cout << "wrote " << q_out << "\n";
        }
      } else {
        const GeoPoint p{q_coords[0], q_coords[1]};
        const Tile t = query_point(q_raster, q_band, q_level, p, cluster);
        std::cout << "tile " << t.address.to_string() << " valid "
                  << t.valid_width << "x" << t.valid_height << "\n";
        if (!q_out.empty()) {
          const auto reg = load_registration(cluster.metadata_table(), q_raster);
          RasterBand band;
          band.width = t.tile_size;
          band.height = t.tile_size;
          band.samples = t.pixels;
          write_band_raster(q_out, "tile", band, reg.tile_extent(t.address));
          std::cout << "wrote " << q_out << "\n";
        }
      }
      return kExitOk;
    }

    if (*meta_norm) {
      std::ifstream in(meta_file);
      if (!in) throw NotFoundError("cannot open " + meta_file);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      const UnifiedMetadata m = normalize(parse_source(text, meta_dialect));
      std::cout << to_json(m) << "\n";
      for (const auto& v : validate(m)) {
        std::cerr << "rastile: warning: " << v.field << ": " << v.constraint
                  << "\n";
      }
      return kExitOk;
    }

    if (*gen) {
      const RasterImage img = gen_synthetic(gen_w, gen_h, gen_bands, gen_seed);
      write_raster(gen_out, fs::path(gen_out).stem().string(), img);
      if (!gen_meta_out.empty()) {
        write_matching_metadata(gen_meta_out, read_raster_header(gen_out));
      }
      std::cout << gen_out << "\n";
      return kExitOk;
    }

    if (*bench_ts || *bench_sc) {
      BenchOptions opts;
      opts.workdir = bench_workdir;
      opts.runs = bench_runs;
      opts.data_sizes = parse_mb_list(bench_sizes_mb);
      opts.tile_sizes = bench_tile_sizes;
      opts.node_counts = bench_nodes;
      opts.verbose = bench_verbose;
      if (!bench_csv.empty()) opts.csv_path = fs::path(bench_csv);
      const bool scaling = static_cast<bool>(*bench_sc);
      const auto records =
          scaling ? run_bench_scaling(opts) : run_bench_tile_size(opts);
      if (bench_csv.empty()) {
        std::cout << csv_string(records, scaling);
      } else {
        std::cout << "wrote " << bench_csv << "\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "rastile: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "rastile: internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
