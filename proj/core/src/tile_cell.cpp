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

#include "rastile/tile_cell.hpp"

#include "bytes.hpp"
#include "rastile/errors.hpp"

namespace rastile {

namespace {
constexpr uint8_t kCellVersion = 1;
constexpr std::size_t kHeaderLen = 1 + 1 + 2 + 2 + 2;
}  // namespace

std::string pack_tile_cell(const std::vector<const Tile*>& band_tiles) {
  if (band_tiles.empty() || band_tiles.size() > 254) {
    throw DomainError("packed cell requires 1..254 bands");
  }
  const Tile& first = *band_tiles.front();
  for (const Tile* t : band_tiles) {
    if (t->address != first.address || t->tile_size != first.tile_size ||
        t->valid_width != first.valid_width ||
        t->valid_height != first.valid_height) {
      throw DomainError("band tiles disagree on address or dimensions");
    }
  }
  std::string out;
  const std::size_t plane = std::size_t{first.tile_size} * first.tile_size;
  out.reserve(kHeaderLen + band_tiles.size() * plane);
  out.push_back(static_cast<char>(kCellVersion));
  out.push_back(static_cast<char>(band_tiles.size()));
  bytes::put_u16(out, static_cast<uint16_t>(first.tile_size));
  bytes::put_u16(out, static_cast<uint16_t>(first.valid_width));
  bytes::put_u16(out, static_cast<uint16_t>(first.valid_height));
  for (const Tile* t : band_tiles) {
    out.append(reinterpret_cast<const char*>(t->pixels.data()), plane);
  }
  return out;
}

TileCellInfo tile_cell_info(std::string_view value) {
  bytes::Reader r(value, "tile cell");
  const uint8_t version = static_cast<uint8_t>(r.raw(1)[0]);
  if (version != kCellVersion) {
    throw FormatError("unsupported tile cell version " + std::to_string(version));
  }
  TileCellInfo info;
  info.band_count = static_cast<uint8_t>(r.raw(1)[0]);
  info.tile_size = r.u16();
  info.valid_width = r.u16();
  info.valid_height = r.u16();
  const std::size_t plane = std::size_t{info.tile_size} * info.tile_size;
  if (r.remaining() != info.band_count * plane) {
    throw FormatError("tile cell payload size mismatch");
  }
  return info;
}

std::vector<uint8_t> tile_cell_band(std::string_view value, uint32_t band) {
  const TileCellInfo info = tile_cell_info(value);
  if (band >= info.band_count) {
    throw DomainError("band " + std::to_string(band) + " not in cell with " +
                      std::to_string(info.band_count) + " bands");
  }
  const std::size_t plane = std::size_t{info.tile_size} * info.tile_size;
  const char* base = value.data() + kHeaderLen + std::size_t{band} * plane;
  return std::vector<uint8_t>(base, base + plane);
}

}  // namespace rastile
