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

#ifndef RASTILE_TABLE_HPP
#define RASTILE_TABLE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace rastile {

/// One versioned value in a wide-column table.
struct Cell {
  std::string row_key;
  std::string family;
  std::string qualifier;
  uint64_t timestamp = 0;
  std::string value;

  bool operator==(const Cell&) const = default;
};

struct TableSchema {
  std::string name;
  std::vector<std::string> families;
  uint32_t max_versions = 1;
};

/// An immutable sorted run of cells persisted as one file. Content is loaded
/// and checksum-verified on first read.
class Segment {
 public:
  using Coord = std::tuple<std::string, std::string, std::string>;
  struct Version {
    uint64_t timestamp;
    std::string value;
  };
  using CellMap = std::map<Coord, std::vector<Version>>;

  /// Write cells (already sorted, versions newest-first) to `path`.
  static void write(const std::filesystem::path& path, const CellMap& cells);

  /// Register a segment file, reading only its footer.
  explicit Segment(std::filesystem::path path);

  const std::string& min_key() const { return min_key_; }
  const std::string& max_key() const { return max_key_; }
  uint64_t cell_count() const { return cell_count_; }
  const std::filesystem::path& path() const { return path_; }

  /// Full content, loaded and verified on first call.
  const CellMap& cells() const;

 private:
  std::filesystem::path path_;
  uint64_t cell_count_ = 0;
  std::string min_key_;
  std::string max_key_;
  mutable std::once_flag load_once_;
  mutable CellMap loaded_;
};

/// A single-node sorted table: an in-memory map over append-only persisted
/// segments. One writer, many concurrent readers; reads merge memory and
/// segments with the newest timestamp winning.
class Table {
 public:
  /// Create a fresh table directory. The directory must not already exist.
  static std::unique_ptr<Table> create(const std::filesystem::path& dir,
                                       TableSchema schema);
  /// Reopen a table directory written by create/flush.
  static std::unique_ptr<Table> open(const std::filesystem::path& dir);

  Table(const Table&) = delete;
  Table& operator=(const Table&) = delete;

  const TableSchema& schema() const { return schema_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// Store a value; the cell's timestamp is strictly greater than any prior
  /// timestamp in this table.
  void put(std::string_view row_key, std::string_view family,
           std::string_view qualifier, std::string_view value);

  /// Latest cell per (family, qualifier) of the row; empty if absent.
  std::vector<Cell> get(std::string_view row_key) const;

  /// Up to max_n retained versions of one coordinate, newest first. Never
  /// returns more than the schema's max_versions.
  std::vector<Cell> get_versions(std::string_view row_key,
                                 std::string_view family,
                                 std::string_view qualifier,
                                 std::size_t max_n) const;

  /// Latest cells with start_key <= row_key <= end_key, in strictly ascending
  /// (row_key, family, qualifier) order.
  std::vector<Cell> scan(std::string_view start_key,
                         std::string_view end_key) const;

  /// Persist the in-memory table as a new immutable segment. Writes nothing
  /// when the memtable is empty.
  void flush();

  struct Stats {
    uint64_t cells = 0;  // latest-version coordinates
    uint64_t bytes = 0;  // value bytes of those cells
  };
  Stats stats() const;

 private:
  Table(std::filesystem::path dir, TableSchema schema);

  void check_family(std::string_view family) const;
  void write_descriptor() const;

  // Collects merged versions for one coordinate across memtable and segments.
  std::vector<Segment::Version> merged_versions(const Segment::Coord& c) const;

  std::filesystem::path dir_;
  TableSchema schema_;
  mutable std::shared_mutex mutex_;
  uint64_t next_timestamp_ = 1;
  uint64_t next_segment_ = 1;
  Segment::CellMap mem_;
  std::vector<std::unique_ptr<Segment>> segments_;
};

}  // namespace rastile

#endif  // RASTILE_TABLE_HPP
