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

#include "rastile/geo.hpp"

#include <cmath>

#include "rastile/errors.hpp"

namespace rastile {

namespace {
constexpr uint32_t kMaxGridLevel = 31;  // keeps 2^(k+1) in uint64 comfortably
}

GeoExtent world_extent() { return GeoExtent{-180.0, 180.0, -90.0, 90.0}; }

bool GeoExtent::valid() const {
  return west < east && south < north && west >= -180.0 && east <= 180.0 &&
         south >= -90.0 && north <= 90.0;
}

std::string TileAddress::to_string() const {
  return "(" + std::to_string(level) + "," + std::to_string(row) + "," +
         std::to_string(col) + ")";
}

uint64_t global_grid_rows(uint32_t level) { return uint64_t{1} << level; }

uint64_t global_grid_cols(uint32_t level) { return uint64_t{1} << (level + 1); }

TileAddress tile_address_of(const GeoPoint& p, uint32_t level) {
  if (level > kMaxGridLevel) {
    throw DomainError("grid level too large: " + std::to_string(level));
  }
  if (!(p.lon >= -180.0 && p.lon <= 180.0 && p.lat >= -90.0 && p.lat <= 90.0)) {
    throw DomainError("point outside world bounds: lon=" + std::to_string(p.lon) +
                      " lat=" + std::to_string(p.lat));
  }
  const double cell = 180.0 / static_cast<double>(uint64_t{1} << level);
  const uint64_t rows = global_grid_rows(level);
  const uint64_t cols = global_grid_cols(level);
  uint64_t row = static_cast<uint64_t>(std::floor((p.lat + 90.0) / cell));
  uint64_t col = static_cast<uint64_t>(std::floor((p.lon + 180.0) / cell));
  // Closed upper edges: clamp before the modulo would wrap them to 0.
  if (row >= rows) row = rows - 1;
  if (col >= cols) col = cols - 1;
  return TileAddress{level, static_cast<uint32_t>(row % rows),
                     static_cast<uint32_t>(col % cols)};
}

GeoExtent extent_of(const TileAddress& a) {
  if (a.level > kMaxGridLevel) {
    throw DomainError("grid level too large: " + std::to_string(a.level));
  }
  if (a.row >= global_grid_rows(a.level) || a.col >= global_grid_cols(a.level)) {
    throw DomainError("tile address outside grid: " + a.to_string());
  }
  const double cell = 180.0 / static_cast<double>(uint64_t{1} << a.level);
  GeoExtent e;
  e.west = static_cast<double>(a.col) * cell - 180.0;
  e.east = e.west + cell;
  e.south = static_cast<double>(a.row) * cell - 90.0;
  e.north = e.south + cell;
  return e;
}

}  // namespace rastile
