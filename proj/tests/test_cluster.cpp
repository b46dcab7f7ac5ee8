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

#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "rastile/cluster.hpp"
#include "rastile/errors.hpp"
#include "test_util.hpp"

using namespace rastile;
using rastile::testing::TempDir;

namespace {

std::vector<KeyedCell> make_cells(const std::vector<uint32_t>& codes,
                                  uint16_t raster = 1, uint8_t level = 0) {
  std::vector<KeyedCell> cells;
  for (uint32_t h : codes) {
    cells.push_back(KeyedCell{TileKey{raster, level, 255, h},
                              "payload-" + std::to_string(h)});
  }
  return cells;
}

std::vector<Cell> full_scan(Cluster& c, const std::string& table,
                            uint16_t raster = 1, uint8_t level = 0) {
  KeyRange all;
  all.start = TileKey{raster, level, 255, 0};
  all.end = TileKey{raster, level, 255, 0xffffffff};
  return c.scatter_scan(table, {all}).cells;
}

Cluster make_cluster(const std::filesystem::path& dir, uint32_t n, uint32_t b,
                     uint32_t p) {
  ClusterConfig cfg;
  cfg.node_count = n;
  cfg.bucket_size = b;
  cfg.period_size = p;
  Cluster c = Cluster::create(dir, cfg);
  c.create_table_all_nodes(TableSchema{"tiles", {kTileFamily}, 1});
  return c;
}

}  // namespace

TEST_CASE("assign_node rotates buckets round-robin") {
  ClusterConfig cfg;
  cfg.bucket_size = 4;
  cfg.node_count = 3;
  auto node_of = [&](uint32_t h) { return assign_node(TileKey{1, 0, 255, h}, cfg); };
  for (uint32_t h = 0; h <= 3; ++h) CHECK(node_of(h) == 0);
  for (uint32_t h = 4; h <= 7; ++h) CHECK(node_of(h) == 1);
  for (uint32_t h = 8; h <= 11; ++h) CHECK(node_of(h) == 2);
  for (uint32_t h = 12; h <= 15; ++h) CHECK(node_of(h) == 0);
}

TEST_CASE("a single node owns everything") {
  ClusterConfig cfg;
  cfg.node_count = 1;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(assign_node(TileKey{1, 0, 255, static_cast<uint32_t>(rng())}, cfg) == 0);
  }
}

TEST_CASE("96 uniform codes split exactly across 3 nodes") {
  ClusterConfig cfg;
  cfg.bucket_size = 4;
  cfg.node_count = 3;
  std::array<int, 3> counts{};
  for (uint32_t h = 0; h < 96; ++h) {
    ++counts[assign_node(TileKey{1, 0, 255, h}, cfg)];
  }
  CHECK(counts[0] == 32);
  CHECK(counts[1] == 32);
  CHECK(counts[2] == 32);
}

TEST_CASE("any aligned run of k*N*B codes balances exactly") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    ClusterConfig cfg;
    cfg.node_count = 1 + static_cast<uint32_t>(rng() % 8);
    cfg.bucket_size = 1 + static_cast<uint32_t>(rng() % 32);
    const uint32_t k = 1 + static_cast<uint32_t>(rng() % 4);
    const uint32_t run = k * cfg.node_count * cfg.bucket_size;
    const uint32_t start =
        (static_cast<uint32_t>(rng() % 1000)) * cfg.node_count * cfg.bucket_size;
    std::vector<uint32_t> counts(cfg.node_count, 0);
    for (uint32_t h = start; h < start + run; ++h) {
      ++counts[assign_node(TileKey{1, 0, 255, h}, cfg)];
    }
    for (uint32_t n = 0; n < cfg.node_count; ++n) {
      CHECK(counts[n] == k * cfg.bucket_size);
    }
  }
}

TEST_CASE("in-bucket codes stay on one node") {
  ClusterConfig cfg;
  cfg.bucket_size = 64;
  cfg.node_count = 5;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const uint32_t bucket = static_cast<uint32_t>(rng() % 10000);
    const uint32_t lo = bucket * cfg.bucket_size;
    const uint32_t owner = assign_node(TileKey{1, 0, 255, lo}, cfg);
    for (uint32_t h = lo; h < lo + cfg.bucket_size; ++h) {
      CHECK(assign_node(TileKey{1, 0, 255, h}, cfg) == owner);
    }
  }
}

TEST_CASE("moved_fraction reports remapped keys") {
  std::vector<TileKey> keys;
  for (uint32_t h = 0; h < 1000; ++h) keys.push_back(TileKey{1, 0, 255, h});
  ClusterConfig a;
  a.node_count = 4;
  CHECK(moved_fraction(keys, a, a) == 0.0);
  ClusterConfig b = a;
  b.node_count = 5;
  const double f = moved_fraction(keys, a, b);
  CHECK(f > 0.0);
  CHECK(f <= 1.0);
}

TEST_CASE("cluster lifecycle and descriptor") {
  TempDir tmp("cluster");
  {
    ClusterConfig cfg;
    cfg.node_count = 3;
    cfg.bucket_size = 8;
    cfg.period_size = 16;
    Cluster c = Cluster::create(tmp.path(), cfg);
    CHECK(std::filesystem::exists(tmp / "cluster.json"));
    CHECK(std::filesystem::exists(tmp / "node_00"));
    CHECK(std::filesystem::exists(tmp / "node_02"));
    CHECK(std::filesystem::exists(tmp / "master"));
    CHECK_NOTHROW(c.metadata_table());
    CHECK_THROWS_AS(Cluster::create(tmp.path(), cfg), ConflictError);
  }
  Cluster again = Cluster::open(tmp.path());
  CHECK(again.config().node_count == 3);
  CHECK(again.config().bucket_size == 8);
  CHECK(again.config().period_size == 16);
  CHECK_NOTHROW(again.metadata_table());
}

TEST_CASE("invalid cluster config is rejected") {
  TempDir tmp("cluster");
  ClusterConfig cfg;
  cfg.node_count = 0;
  CHECK_THROWS_AS(Cluster::create(tmp.path(), cfg), DomainError);
}

TEST_CASE("PSS batching groups flushes by period") {
  SUBCASE("one flush group per touched node when P covers the batch") {
    TempDir tmp("cluster");
    Cluster c = make_cluster(tmp.path(), 3, 4, 16);
    std::vector<uint32_t> codes;
    for (uint32_t h = 0; h < 16; ++h) codes.push_back(h);
    const auto report = c.ingest_batch("tiles", make_cells(codes));
    // Codes 0..15 with B=4,N=3 touch nodes 0 (buckets 0 and 3), 1, 2.
    CHECK(report.nodes[0].flushes == 1);
    CHECK(report.nodes[1].flushes == 1);
    CHECK(report.nodes[2].flushes == 1);
    CHECK(report.total_tiles() == 16);
  }
  SUBCASE("P=1 degenerates to one flush per tile") {
    TempDir tmp("cluster");
    Cluster c = make_cluster(tmp.path(), 2, 4, 1);
    const auto report = c.ingest_batch("tiles", make_cells({0, 1, 2, 3}));
    CHECK(report.nodes[0].flushes == 4);
    CHECK(report.total_tiles() == 4);
  }
}

TEST_CASE("final contents are independent of the period") {
  std::vector<uint32_t> codes;
  std::mt19937_64 rng(5);
  for (uint32_t h = 0; h < 200; ++h) codes.push_back(h);
  std::shuffle(codes.begin(), codes.end(), rng);

  std::vector<std::vector<Cell>> contents;
  for (uint32_t period : {1u, 4u, 256u}) {
    TempDir tmp("pss");
    Cluster c = make_cluster(tmp.path(), 3, 8, period);
    c.ingest_batch("tiles", make_cells(codes));
    contents.push_back(full_scan(c, "tiles"));
  }
  REQUIRE(contents[0].size() == 200);
  for (std::size_t i = 1; i < contents.size(); ++i) {
    REQUIRE(contents[i].size() == contents[0].size());
    for (std::size_t j = 0; j < contents[0].size(); ++j) {
      CHECK(contents[i][j].row_key == contents[0][j].row_key);
      CHECK(contents[i][j].value == contents[0][j].value);
    }
  }
}

TEST_CASE("parallel and sequential ingestion agree") {
  std::vector<uint32_t> codes;
  for (uint32_t h = 0; h < 500; ++h) codes.push_back(h);

  TempDir seq_dir("seq");
  Cluster seq = make_cluster(seq_dir.path(), 4, 8, 32);
  seq.ingest_batch("tiles", make_cells(codes), /*parallel=*/false);

  TempDir par_dir("par");
  Cluster par = make_cluster(par_dir.path(), 4, 8, 32);
  par.ingest_batch("tiles", make_cells(codes), /*parallel=*/true);

  const auto a = full_scan(seq, "tiles");
  const auto b = full_scan(par, "tiles");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].row_key == b[i].row_key);
    CHECK(a[i].value == b[i].value);
  }
}

TEST_CASE("load_stats") {
  SUBCASE("balanced cluster has skew 1") {
    TempDir tmp("stats");
    Cluster c = make_cluster(tmp.path(), 3, 1, 64);
    std::vector<uint32_t> codes;
    for (uint32_t h = 0; h < 99; ++h) codes.push_back(h);
    c.ingest_batch("tiles", make_cells(codes));
    const auto stats = c.load_stats();
    CHECK(stats.total() == 99);
    CHECK(stats.skew == doctest::Approx(1.0));
  }
  SUBCASE("counts 40/40/16 give skew 1.25") {
    TempDir tmp("stats");
    Cluster c = make_cluster(tmp.path(), 3, 1, 64);
    // With B=1 the node is hilbert mod 3; craft codes per node.
    std::vector<uint32_t> codes;
    for (uint32_t i = 0; i < 40; ++i) codes.push_back(3 * i);
    for (uint32_t i = 0; i < 40; ++i) codes.push_back(3 * i + 1);
    for (uint32_t i = 0; i < 16; ++i) codes.push_back(3 * i + 2);
    c.ingest_batch("tiles", make_cells(codes));
    const auto stats = c.load_stats();
    CHECK(stats.tile_counts == std::vector<uint64_t>{40, 40, 16});
    CHECK(stats.skew == doctest::Approx(1.25));
  }
  SUBCASE("empty cluster pins skew to 1") {
    TempDir tmp("stats");
    Cluster c = make_cluster(tmp.path(), 4, 8, 8);
    const auto stats = c.load_stats();
    CHECK(stats.total() == 0);
    CHECK(stats.skew == 1.0);
  }
}

TEST_CASE("scatter_scan merges node results in key order") {
  SUBCASE("one node equals a plain scan") {
    TempDir tmp("scatter");
    Cluster c = make_cluster(tmp.path(), 1, 8, 16);
    c.ingest_batch("tiles", make_cells({5, 1, 9, 3}));
    const auto cells = full_scan(c, "tiles");
    REQUIRE(cells.size() == 4);
    CHECK(decode_tile_key(cells[0].row_key).hilbert == 1);
    CHECK(decode_tile_key(cells[3].row_key).hilbert == 9);
  }
  SUBCASE("multi-node scatter equals the single-store oracle") {
    std::mt19937_64 rng(7);
    std::set<uint32_t> code_set;
    while (code_set.size() < 300) {
      code_set.insert(static_cast<uint32_t>(rng() % 4096));
    }
    const std::vector<uint32_t> codes(code_set.begin(), code_set.end());

    TempDir multi_dir("scatter4");
    Cluster multi = make_cluster(multi_dir.path(), 4, 8, 64);
    multi.ingest_batch("tiles", make_cells(codes));

    TempDir single_dir("scatter1");
    Cluster single = make_cluster(single_dir.path(), 1, 8, 64);
    single.ingest_batch("tiles", make_cells(codes));

    for (int trial = 0; trial < 30; ++trial) {
      uint32_t lo = static_cast<uint32_t>(rng() % 4096);
      uint32_t hi = static_cast<uint32_t>(rng() % 4096);
      if (lo > hi) std::swap(lo, hi);
      KeyRange range;
      range.start = TileKey{1, 0, 255, lo};
      range.end = TileKey{1, 0, 255, hi};
      const auto got = multi.scatter_scan("tiles", {range});
      const auto want = single.scatter_scan("tiles", {range});
      REQUIRE(got.cells.size() == want.cells.size());
      for (std::size_t i = 0; i < got.cells.size(); ++i) {
        CHECK(got.cells[i].row_key == want.cells[i].row_key);
        CHECK(got.cells[i].value == want.cells[i].value);
      }
    }
  }
  SUBCASE("a range inside one bucket touches exactly one node") {
    TempDir tmp("scatter");
    Cluster c = make_cluster(tmp.path(), 4, 16, 16);
    std::vector<uint32_t> codes;
    for (uint32_t h = 0; h < 128; ++h) codes.push_back(h);
    c.ingest_batch("tiles", make_cells(codes));
    KeyRange range;
    range.start = TileKey{1, 0, 255, 16};  // bucket 1 only
    range.end = TileKey{1, 0, 255, 30};
    const auto result = c.scatter_scan("tiles", {range});
    CHECK(result.nodes_touched == 1);
    CHECK(result.cells.size() == 15);
  }
  SUBCASE("an unavailable owning node raises a partial-result error") {
    TempDir tmp("scatter");
    Cluster c = make_cluster(tmp.path(), 3, 4, 16);
    std::vector<uint32_t> codes;
    for (uint32_t h = 0; h < 24; ++h) codes.push_back(h);
    c.ingest_batch("tiles", make_cells(codes));
    c.node(1).set_available(false);
    KeyRange all;
    all.start = TileKey{1, 0, 255, 0};
    all.end = TileKey{1, 0, 255, 23};
    try {
      c.scatter_scan("tiles", {all});
      FAIL("expected PartialResultError");
    } catch (const PartialResultError& e) {
      REQUIRE(e.missing_nodes().size() == 1);
      CHECK(e.missing_nodes()[0] == 1);
    }
    // Ranges that avoid the dead node still work.
    KeyRange bucket0;
    bucket0.start = TileKey{1, 0, 255, 0};
    bucket0.end = TileKey{1, 0, 255, 3};
    CHECK(c.scatter_scan("tiles", {bucket0}).cells.size() == 4);
  }
}

TEST_CASE("a raster boundary closes the current period") {
  TempDir tmp("cluster");
  Cluster c = make_cluster(tmp.path(), 1, 64, 8);
  std::vector<KeyedCell> cells;
  for (uint32_t h = 0; h < 5; ++h) {
    cells.push_back(KeyedCell{TileKey{1, 0, 255, h}, "r1"});
  }
  for (uint32_t h = 0; h < 5; ++h) {
    cells.push_back(KeyedCell{TileKey{2, 0, 255, h}, "r2"});
  }
  const auto report = c.ingest_batch("tiles", cells);
  // The raster switch forces a flush even though P=8 was not reached.
  CHECK(report.nodes[0].flushes == 2);
  CHECK(full_scan(c, "tiles", 1).size() == 5);
  CHECK(full_scan(c, "tiles", 2).size() == 5);
}
