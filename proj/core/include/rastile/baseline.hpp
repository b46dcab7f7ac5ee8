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

#ifndef RASTILE_BASELINE_HPP
#define RASTILE_BASELINE_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "rastile/keys.hpp"

namespace rastile {

/// The unindexed comparator: an append-only log of (key, value) records in
/// arrival order, queried by scanning the whole file. Stands in for a
/// traditional table without a spatial index.
class BaselineStore {
 public:
  /// Open or create the log at `path`.
  explicit BaselineStore(std::filesystem::path path);

  void append(const TileKey& key, std::string_view value);
  /// Make appended records visible to scans.
  void sync();

  /// Sequentially read every record from disk.
  void scan_all(
      const std::function<void(const TileKey&, std::string_view)>& fn) const;

  /// Linear-scan query: all records at (raster_id, level, band) whose decoded
  /// grid cell lies in the row/col rectangle.
  std::vector<std::pair<TileKey, std::string>> query_rect(
      uint16_t raster_id, uint8_t level, uint8_t band, uint32_t order,
      const IndexRange& rows, const IndexRange& cols) const;

  uint64_t record_count() const { return count_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  uint64_t count_ = 0;
};

}  // namespace rastile

#endif  // RASTILE_BASELINE_HPP
