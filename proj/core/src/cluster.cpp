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

#include "rastile/cluster.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "rastile/errors.hpp"
#include "rastile/metadata.hpp"

namespace rastile {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kClusterDescriptor[] = "cluster.json";
constexpr char kMasterDir[] = "master";

std::string node_dir_name(uint32_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "node_%02u", i);
  return buf;
}

}  // namespace

std::string metadata_table_name() { return "HRasterMetaDataInfoTable"; }

std::string tile_table_name(uint16_t raster_id) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "HRasterDataTable_%04u", raster_id);
  return buf;
}

double moved_fraction(const std::vector<TileKey>& keys,
                      const ClusterConfig& before, const ClusterConfig& after) {
  if (keys.empty()) return 0.0;
  std::size_t moved = 0;
  for (const auto& k : keys) {
    if (assign_node(k, before) != assign_node(k, after)) ++moved;
  }
  return static_cast<double>(moved) / static_cast<double>(keys.size());
}

Node::Node(uint32_t index, fs::path dir) : index_(index), dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

Table& Node::create_table(const TableSchema& schema) {
  if (tables_.count(schema.name) || fs::exists(dir_ / schema.name)) {
    throw ConflictError("table '" + schema.name + "' already exists on node " +
                        std::to_string(index_));
  }
  auto t = Table::create(dir_ / schema.name, schema);
  Table& ref = *t;
  tables_[schema.name] = std::move(t);
  return ref;
}

Table* Node::find_table(const std::string& name) {
  auto it = tables_.find(name);
  if (it != tables_.end()) return it->second.get();
  if (!fs::exists(dir_ / name / "table.json")) return nullptr;
  auto t = Table::open(dir_ / name);
  Table* ptr = t.get();
  tables_[name] = std::move(t);
  return ptr;
}

std::vector<std::string> Node::table_names() const {
  std::set<std::string> names;
  for (const auto& [name, t] : tables_) names.insert(name);
  if (fs::exists(dir_)) {
    for (const auto& entry : fs::directory_iterator(dir_)) {
      if (entry.is_directory() && fs::exists(entry.path() / "table.json")) {
        names.insert(entry.path().filename().string());
      }
    }
  }
  return {names.begin(), names.end()};
}

uint64_t LoadStats::total() const {
  uint64_t n = 0;
  for (auto c : tile_counts) n += c;
  return n;
}

uint64_t IngestReport::total_tiles() const {
  uint64_t n = 0;
  for (const auto& pn : nodes) n += pn.tiles;
  return n;
}

Cluster::Cluster(fs::path dir, ClusterConfig cfg)
    : dir_(std::move(dir)), cfg_(cfg) {}

Cluster Cluster::create(const fs::path& dir, const ClusterConfig& cfg) {
  if (!cfg.valid()) throw DomainError("cluster config values must be positive");
  if (fs::exists(dir / kClusterDescriptor)) {
    throw ConflictError("cluster already initialized at " + dir.string());
  }
  fs::create_directories(dir);
  json j;
  j["node_count"] = cfg.node_count;
  j["bucket_size"] = cfg.bucket_size;
  j["period_size"] = cfg.period_size;
  {
    std::ofstream out(dir / kClusterDescriptor, std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw Error("failed to write cluster descriptor");
  }
  Cluster c(dir, cfg);
  for (uint32_t i = 0; i < cfg.node_count; ++i) {
    c.nodes_.push_back(std::make_unique<Node>(i, dir / node_dir_name(i)));
  }
  c.master_ = std::make_unique<Node>(0, dir / kMasterDir);
  c.master_->create_table(TableSchema{metadata_table_name(), {kMetadataFamily}, 1});
  return c;
}

Cluster Cluster::open(const fs::path& dir) {
  std::ifstream in(dir / kClusterDescriptor);
  if (!in) throw NotFoundError("no cluster descriptor at " + dir.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("bad cluster descriptor: " + std::string(e.what()));
  }
  ClusterConfig cfg;
  cfg.node_count = j.at("node_count").get<uint32_t>();
  cfg.bucket_size = j.at("bucket_size").get<uint32_t>();
  cfg.period_size = j.at("period_size").get<uint32_t>();
  Cluster c(dir, cfg);
  for (uint32_t i = 0; i < cfg.node_count; ++i) {
    c.nodes_.push_back(std::make_unique<Node>(i, dir / node_dir_name(i)));
  }
  c.master_ = std::make_unique<Node>(0, dir / kMasterDir);
  return c;
}

Table& Cluster::metadata_table() {
  Table* t = master_->find_table(metadata_table_name());
  if (!t) throw NotFoundError("metadata table missing in " + dir_.string());
  return *t;
}

void Cluster::create_table_all_nodes(const TableSchema& schema) {
  for (auto& n : nodes_) n->create_table(schema);
}

// ---------------------------------------------------------------------------
// Ingestion

struct Cluster::IngestSession::Impl {
  Cluster& cluster;
  std::string table_name;
  bool parallel;
  IngestReport report;

  struct NodeState {
    Table* table = nullptr;
    std::vector<KeyedCell> pending;
    // worker machinery (parallel mode)
    std::thread worker;
    std::mutex m;
    std::condition_variable cv;
    std::deque<std::vector<KeyedCell>> queue;
    bool done = false;
    std::exception_ptr error;
  };
  std::vector<std::unique_ptr<NodeState>> states;

  Impl(Cluster& c, std::string name, bool par)
      : cluster(c), table_name(std::move(name)), parallel(par) {
    report.nodes.resize(c.cfg_.node_count);
    states.reserve(c.cfg_.node_count);
    for (uint32_t i = 0; i < c.cfg_.node_count; ++i) {
      auto st = std::make_unique<NodeState>();
      st->table = c.nodes_[i]->find_table(table_name);
      if (!st->table) {
        throw NotFoundError("table '" + table_name + "' missing on node " +
                            std::to_string(i));
      }
      states.push_back(std::move(st));
    }
    if (parallel) {
      for (uint32_t i = 0; i < states.size(); ++i) {
        NodeState* st = states[i].get();
        st->worker = std::thread([st] {
          for (;;) {
            std::vector<KeyedCell> batch;
            {
              std::unique_lock lock(st->m);
              st->cv.wait(lock, [st] { return st->done || !st->queue.empty(); });
              if (st->queue.empty()) return;
              batch = std::move(st->queue.front());
              st->queue.pop_front();
            }
            try {
              for (const auto& cell : batch) {
                st->table->put(encode_tile_key(cell.key), kTileFamily,
                               kTileQualifier, cell.value);
              }
              st->table->flush();
            } catch (...) {
              std::lock_guard lock(st->m);
              if (!st->error) st->error = std::current_exception();
            }
          }
        });
      }
    }
  }

  void write_batch(uint32_t node, std::vector<KeyedCell> batch) {
    auto& st = *states[node];
    auto& rep = report.nodes[node];
    for (const auto& cell : batch) {
      rep.bytes += cell.value.size();
      ++rep.tiles;
    }
    ++rep.flushes;
    if (parallel) {
      std::lock_guard lock(st.m);
      st.queue.push_back(std::move(batch));
      st.cv.notify_one();
    } else {
      for (const auto& cell : batch) {
        st.table->put(encode_tile_key(cell.key), kTileFamily, kTileQualifier,
                      cell.value);
      }
      st.table->flush();
    }
  }

  void feed(const TileKey& key, std::string value) {
    const uint32_t node = assign_node(key, cluster.cfg_);
    auto& st = *states[node];
    if (!st.pending.empty() && st.pending.front().key.raster_id != key.raster_id) {
      // PSS periods never mix rasters; start a fresh group.
      auto batch = std::move(st.pending);
      st.pending = {};
      write_batch(node, std::move(batch));
    }
    st.pending.push_back(KeyedCell{key, std::move(value)});
    if (st.pending.size() >= cluster.cfg_.period_size) {
      auto batch = std::move(st.pending);
      st.pending = {};
      write_batch(node, std::move(batch));
    }
  }

  IngestReport close() {
    for (uint32_t i = 0; i < states.size(); ++i) {
      if (!states[i]->pending.empty()) {
        auto batch = std::move(states[i]->pending);
        states[i]->pending = {};
        write_batch(i, std::move(batch));
      }
    }
    join_workers();
    for (auto& st : states) {
      if (st->error) {
        std::rethrow_exception(st->error);
      }
    }
    return report;
  }

  void join_workers() {
    if (!parallel) return;
    for (auto& st : states) {
      {
        std::lock_guard lock(st->m);
        st->done = true;
      }
      st->cv.notify_one();
    }
    for (auto& st : states) {
      if (st->worker.joinable()) st->worker.join();
    }
    parallel = false;
  }

  ~Impl() { join_workers(); }
};

Cluster::IngestSession::IngestSession(Cluster& cluster, std::string table_name,
                                      bool parallel)
    : impl_(std::make_unique<Impl>(cluster, std::move(table_name), parallel)) {}

Cluster::IngestSession::IngestSession(IngestSession&&) noexcept = default;

Cluster::IngestSession::~IngestSession() = default;

void Cluster::IngestSession::feed(const TileKey& key, std::string value) {
  impl_->feed(key, std::move(value));
}

IngestReport Cluster::IngestSession::close() { return impl_->close(); }

Cluster::IngestSession Cluster::begin_ingest(const std::string& table_name,
                                             bool parallel) {
  return IngestSession(*this, table_name, parallel);
}

IngestReport Cluster::ingest_batch(const std::string& table_name,
                                   const std::vector<KeyedCell>& cells,
                                   bool parallel) {
  IngestSession session = begin_ingest(table_name, parallel);
  for (const auto& c : cells) session.feed(c.key, c.value);
  return session.close();
}

// ---------------------------------------------------------------------------
// Reads

LoadStats Cluster::load_stats() {
  LoadStats stats;
  stats.tile_counts.resize(cfg_.node_count, 0);
  stats.bytes.resize(cfg_.node_count, 0);
  for (uint32_t i = 0; i < cfg_.node_count; ++i) {
    for (const auto& name : nodes_[i]->table_names()) {
      Table* t = nodes_[i]->find_table(name);
      const auto s = t->stats();
      stats.tile_counts[i] += s.cells;
      stats.bytes[i] += s.bytes;
    }
  }
  const uint64_t total = stats.total();
  if (total == 0) {
    stats.skew = 1.0;
  } else {
    const uint64_t max = *std::max_element(stats.tile_counts.begin(),
                                           stats.tile_counts.end());
    const double mean =
        static_cast<double>(total) / static_cast<double>(cfg_.node_count);
    stats.skew = static_cast<double>(max) / mean;
  }
  return stats;
}

ScatterResult Cluster::scatter_scan(const std::string& table_name,
                                    const std::vector<KeyRange>& ranges) {
  // Owning nodes per range via the placement formula.
  std::vector<std::pair<uint32_t, const KeyRange*>> work;
  std::set<uint32_t> touched;
  std::vector<uint32_t> unavailable;
  for (const auto& r : ranges) {
    const uint64_t bucket_lo = r.start.hilbert / cfg_.bucket_size;
    const uint64_t bucket_hi = r.end.hilbert / cfg_.bucket_size;
    std::set<uint32_t> owners;
    if (bucket_hi - bucket_lo + 1 >= cfg_.node_count) {
      for (uint32_t n = 0; n < cfg_.node_count; ++n) owners.insert(n);
    } else {
      for (uint64_t b = bucket_lo; b <= bucket_hi; ++b) {
        owners.insert(static_cast<uint32_t>(b % cfg_.node_count));
      }
    }
    for (uint32_t n : owners) {
      if (!nodes_[n]->available()) {
        unavailable.push_back(n);
        continue;
      }
      touched.insert(n);
      work.emplace_back(n, &r);
    }
  }
  if (!unavailable.empty()) {
    std::sort(unavailable.begin(), unavailable.end());
    unavailable.erase(std::unique(unavailable.begin(), unavailable.end()),
                      unavailable.end());
    std::string msg = "scatter scan missing nodes:";
    for (uint32_t n : unavailable) msg += " " + std::to_string(n);
    throw PartialResultError(msg, std::move(unavailable));
  }

  // Tables open on this thread; find_table mutates the node's table map and
  // is not safe to race from the workers.
  std::vector<Table*> tables(work.size(), nullptr);
  std::map<uint32_t, std::vector<std::size_t>> per_node;
  for (std::size_t i = 0; i < work.size(); ++i) {
    tables[i] = nodes_[work[i].first]->find_table(table_name);
    per_node[work[i].first].push_back(i);
  }

  // One reader thread per node scans that node's ranges; results merge per
  // range in key order.
  std::vector<std::vector<Cell>> partial(work.size());
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(per_node.size());
  threads.reserve(per_node.size());
  std::size_t worker = 0;
  for (const auto& entry : per_node) {
    const std::vector<std::size_t> items = entry.second;
    threads.emplace_back([&, items, worker] {
      try {
        for (std::size_t i : items) {
          if (!tables[i]) continue;  // node holds no part of this table
          partial[i] = tables[i]->scan(work[i].second->start_bytes(),
                                       work[i].second->end_bytes());
        }
      } catch (...) {
        errors[worker] = std::current_exception();
      }
    });
    ++worker;
  }
  for (auto& th : threads) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ScatterResult result;
  result.nodes_touched = touched.size();
  // Ranges are disjoint and sorted; concatenate per range, merging the
  // per-node sorted runs.
  for (const auto& r : ranges) {
    std::vector<std::vector<Cell>> runs;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i].second == &r && !partial[i].empty()) {
        runs.push_back(std::move(partial[i]));
      }
    }
    std::vector<Cell> merged;
    for (auto& run : runs) {
      merged.insert(merged.end(), std::make_move_iterator(run.begin()),
                    std::make_move_iterator(run.end()));
    }
    std::sort(merged.begin(), merged.end(), [](const Cell& a, const Cell& b) {
      return std::tie(a.row_key, a.family, a.qualifier) <
             std::tie(b.row_key, b.family, b.qualifier);
    });
    result.cells.insert(result.cells.end(),
                        std::make_move_iterator(merged.begin()),
                        std::make_move_iterator(merged.end()));
  }
  return result;
}

}  // namespace rastile
