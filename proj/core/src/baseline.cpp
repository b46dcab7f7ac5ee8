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

// Log record: u64 BE packed key, u32 BE value length, value bytes.

#include "rastile/baseline.hpp"

#include <algorithm>

#include "bytes.hpp"
#include "rastile/errors.hpp"
#include "rastile/hilbert.hpp"

namespace rastile {

BaselineStore::BaselineStore(std::filesystem::path path)
    : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    // Count existing records.
    scan_all([this](const TileKey&, std::string_view) { ++count_; });
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open baseline log " + path_.string());
}

void BaselineStore::append(const TileKey& key, std::string_view value) {
  std::string rec;
  rec.reserve(12 + value.size());
  bytes::put_u64(rec, key.packed());
  bytes::put_u32(rec, static_cast<uint32_t>(value.size()));
  rec.append(value);
  out_.write(rec.data(), static_cast<std::streamsize>(rec.size()));
  if (!out_) throw Error("baseline log write failed: " + path_.string());
  ++count_;
}

void BaselineStore::sync() { out_.flush(); }

void BaselineStore::scan_all(
    const std::function<void(const TileKey&, std::string_view)>& fn) const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw NotFoundError("cannot open baseline log " + path_.string());
  std::string header(12, '\0');
  std::string value;
  while (in.read(header.data(), 12)) {
    bytes::Reader r(header, "baseline record");
    const uint64_t packed = r.u64();
    const uint32_t len = r.u32();
    value.resize(len);
    if (!in.read(value.data(), len)) {
      throw FormatError("truncated baseline log " + path_.string());
    }
    TileKey key;
    key.raster_id = static_cast<uint16_t>(packed >> 48);
    key.level = static_cast<uint8_t>(packed >> 40);
    key.band = static_cast<uint8_t>(packed >> 32);
    key.hilbert = static_cast<uint32_t>(packed);
    fn(key, value);
  }
}

std::vector<std::pair<TileKey, std::string>> BaselineStore::query_rect(
    uint16_t raster_id, uint8_t level, uint8_t band, uint32_t order,
    const IndexRange& rows, const IndexRange& cols) const {
  std::vector<std::pair<TileKey, std::string>> out;
  scan_all([&](const TileKey& key, std::string_view value) {
    if (key.raster_id != raster_id || key.level != level || key.band != band) {
      return;
    }
    const auto [x, y] = hilbert_decode(order, key.hilbert);
    if (y < rows.lo || y > rows.hi || x < cols.lo || x > cols.hi) return;
    out.emplace_back(key, std::string(value));
  });
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace rastile
