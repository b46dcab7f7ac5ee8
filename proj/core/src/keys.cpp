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

#include "rastile/keys.hpp"

#include "bytes.hpp"
#include "rastile/errors.hpp"
#include "rastile/hilbert.hpp"

namespace rastile {

std::string encode_tile_key(const TileKey& k) {
  std::string out;
  out.reserve(8);
  bytes::put_u64(out, k.packed());
  return out;
}

TileKey decode_tile_key(const std::string& raw) {
  if (raw.size() != 8) {
    throw FormatError("tile key must be exactly 8 bytes, got " +
                      std::to_string(raw.size()));
  }
  bytes::Reader r(raw, "tile key");
  const uint64_t v = r.u64();
  TileKey k;
  k.raster_id = static_cast<uint16_t>(v >> 48);
  k.level = static_cast<uint8_t>(v >> 40);
  k.band = static_cast<uint8_t>(v >> 32);
  k.hilbert = static_cast<uint32_t>(v);
  return k;
}

namespace {

struct Rect {
  uint32_t x0, x1, y0, y1;  // inclusive

  bool contains(uint32_t sx0, uint32_t sy0, uint32_t side) const {
    return sx0 >= x0 && sx0 + side - 1 <= x1 && sy0 >= y0 && sy0 + side - 1 <= y1;
  }
  bool disjoint(uint32_t sx0, uint32_t sy0, uint32_t side) const {
    return sx0 > x1 || sx0 + side - 1 < x0 || sy0 > y1 || sy0 + side - 1 < y0;
  }
};

// Walk the curve's quadrant tree in code order. A square fully inside the
// rectangle emits its whole contiguous code interval; fully outside is
// dropped; partial overlap recurses into the four code-order children.
void visit(uint32_t order, uint64_t code_lo, uint32_t depth, const Rect& rect,
           std::vector<std::pair<uint64_t, uint64_t>>& out) {
  const uint32_t m = order - depth;  // square side = 2^m
  const auto [cx, cy] = hilbert_decode(order, code_lo);
  const uint32_t side = uint32_t{1} << m;
  const uint32_t sx0 = cx & ~(side - 1);
  const uint32_t sy0 = cy & ~(side - 1);
  if (rect.disjoint(sx0, sy0, side)) return;
  const uint64_t span = uint64_t{1} << (2 * m);
  if (rect.contains(sx0, sy0, side)) {
    if (!out.empty() && out.back().second + 1 == code_lo) {
      out.back().second = code_lo + span - 1;
    } else {
      out.emplace_back(code_lo, code_lo + span - 1);
    }
    return;
  }
  const uint64_t quarter = span >> 2;
  for (uint64_t i = 0; i < 4; ++i) {
    visit(order, code_lo + i * quarter, depth + 1, rect, out);
  }
}

}  // namespace

std::string metadata_row_key(uint16_t raster_id) {
  std::string out;
  bytes::put_u16(out, raster_id);
  return out;
}

uint16_t parse_metadata_row_key(const std::string& raw) {
  if (raw.size() != 2) {
    throw FormatError("metadata row key must be exactly 2 bytes");
  }
  bytes::Reader r(raw, "metadata row key");
  return r.u16();
}

std::vector<KeyRange> bbox_to_ranges(uint16_t raster_id, uint8_t band,
                                     uint8_t level, uint32_t order,
                                     const IndexRange& rows,
                                     const IndexRange& cols) {
  const uint32_t side = uint32_t{1} << order;
  if (rows.lo > rows.hi || cols.lo > cols.hi) return {};
  if (rows.hi >= side || cols.hi >= side) {
    throw DomainError("query rectangle outside order-" + std::to_string(order) +
                      " grid");
  }
  Rect rect{cols.lo, cols.hi, rows.lo, rows.hi};
  std::vector<std::pair<uint64_t, uint64_t>> raw;
  visit(order, 0, 0, rect, raw);
  std::vector<KeyRange> ranges;
  ranges.reserve(raw.size());
  for (const auto& [lo, hi] : raw) {
    KeyRange kr;
    kr.start = TileKey{raster_id, level, band, static_cast<uint32_t>(lo)};
    kr.end = TileKey{raster_id, level, band, static_cast<uint32_t>(hi)};
    ranges.push_back(kr);
  }
  return ranges;
}

}  // namespace rastile
