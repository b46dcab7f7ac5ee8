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

#ifndef RASTILE_CLUSTER_HPP
#define RASTILE_CLUSTER_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rastile/keys.hpp"
#include "rastile/table.hpp"

namespace rastile {

/// Placement parameters: node count, the BPS bucket (contiguous Hilbert run
/// kept on one node) and the PSS period (tiles per flush group).
struct ClusterConfig {
  uint32_t node_count = 4;
  uint32_t bucket_size = 64;
  uint32_t period_size = 256;

  bool valid() const { return node_count >= 1 && bucket_size >= 1 && period_size >= 1; }
  bool operator==(const ClusterConfig&) const = default;
};

/// Balanced placement: spatially contiguous buckets of bucket_size Hilbert
/// codes stay co-located and rotate round-robin across nodes.
inline uint32_t assign_node(const TileKey& key, const ClusterConfig& cfg) {
  return (key.hilbert / cfg.bucket_size) % cfg.node_count;
}

/// Fraction of keys whose owning node changes between two configurations.
double moved_fraction(const std::vector<TileKey>& keys,
                      const ClusterConfig& before, const ClusterConfig& after);

/// One simulated storage node: a directory of tables with a fault flag.
class Node {
 public:
  Node(uint32_t index, std::filesystem::path dir);

  uint32_t index() const { return index_; }
  const std::filesystem::path& dir() const { return dir_; }

  bool available() const { return available_; }
  void set_available(bool v) { available_ = v; }

  /// Create a table on this node; ConflictError if the name exists.
  Table& create_table(const TableSchema& schema);
  /// The named table, opened from disk on first use; nullptr if absent.
  Table* find_table(const std::string& name);
  /// Names of all tables present on this node.
  std::vector<std::string> table_names() const;

 private:
  uint32_t index_;
  std::filesystem::path dir_;
  bool available_ = true;
  std::map<std::string, std::unique_ptr<Table>> tables_;
};

struct LoadStats {
  std::vector<uint64_t> tile_counts;
  std::vector<uint64_t> bytes;
  double skew = 1.0;

  uint64_t total() const;
};

struct IngestReport {
  struct PerNode {
    uint64_t tiles = 0;
    uint64_t bytes = 0;
    uint64_t flushes = 0;
  };
  std::vector<PerNode> nodes;

  uint64_t total_tiles() const;
};

struct KeyedCell {
  TileKey key;
  std::string value;
};

struct ScatterResult {
  std::vector<Cell> cells;
  std::size_t nodes_touched = 0;
};

/// A simulated cluster: one directory per node plus a master directory that
/// holds the archival metadata table. The descriptor file records N, B, P.
class Cluster {
 public:
  static Cluster create(const std::filesystem::path& dir, const ClusterConfig& cfg);
  static Cluster open(const std::filesystem::path& dir);

  const ClusterConfig& config() const { return cfg_; }
  const std::filesystem::path& dir() const { return dir_; }
  uint32_t node_count() const { return cfg_.node_count; }
  Node& node(uint32_t i) { return *nodes_.at(i); }

  /// The cluster-wide archival metadata table (created with the cluster).
  Table& metadata_table();

  /// Create `name` on every node with the given schema.
  void create_table_all_nodes(const TableSchema& schema);

  /// Write keyed cells through BPS placement and PSS batching: cells group by
  /// destination node, and each run of period_size cells per node is written
  /// as one flush group. One writer per node runs concurrently when
  /// `parallel`; contents are identical either way.
  IngestReport ingest_batch(const std::string& table_name,
                            const std::vector<KeyedCell>& cells,
                            bool parallel = false);

  /// Per-node tile counts and bytes over all tile tables; skew is max/mean
  /// (1.0 for an empty cluster).
  LoadStats load_stats();

  /// Scan each range on the nodes owning part of it and merge in key order.
  /// Unavailable owning nodes raise PartialResultError listing them.
  ScatterResult scatter_scan(const std::string& table_name,
                             const std::vector<KeyRange>& ranges);

  /// Streaming ingestion session; feed() buffers per node and flushes every
  /// period_size cells, close() drains the remainder.
  class IngestSession {
   public:
    IngestSession(IngestSession&&) noexcept;
    ~IngestSession();
    void feed(const TileKey& key, std::string value);
    IngestReport close();

   private:
    friend class Cluster;
    IngestSession(Cluster& cluster, std::string table_name, bool parallel);
    struct Impl;
    std::unique_ptr<Impl> impl_;
  };

  IngestSession begin_ingest(const std::string& table_name, bool parallel = false);

 private:
  Cluster(std::filesystem::path dir, ClusterConfig cfg);

  std::filesystem::path dir_;
  ClusterConfig cfg_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::unique_ptr<Node> master_;
};

/// Table-name helpers for the two well-known table kinds.
std::string metadata_table_name();
std::string tile_table_name(uint16_t raster_id);
inline constexpr char kTileFamily[] = "t";
inline constexpr char kTileQualifier[] = "d";

}  // namespace rastile

#endif  // RASTILE_CLUSTER_HPP
