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

#include <random>

#include "rastile/errors.hpp"
#include "rastile/geo.hpp"

using namespace rastile;

TEST_CASE("tile_address_of evaluates the corrected grid equations") {
  CHECK(tile_address_of({0.0, 0.0}, 1) == TileAddress{1, 1, 2});
  CHECK(tile_address_of({-180.0, -90.0}, 0) == TileAddress{0, 0, 0});
  CHECK(tile_address_of({179.9, 89.9}, 2) == TileAddress{2, 3, 7});
}

TEST_CASE("tile_address_of rejects out-of-range coordinates") {
  CHECK_THROWS_AS(tile_address_of({181.0, 0.0}, 1), DomainError);
  CHECK_THROWS_AS(tile_address_of({0.0, -90.5}, 1), DomainError);
}

TEST_CASE("closed upper world edges clamp into the last row/column") {
  for (uint32_t k = 0; k <= 4; ++k) {
    const auto a = tile_address_of({180.0, 90.0}, k);
    CHECK(a.row == global_grid_rows(k) - 1);
    CHECK(a.col == global_grid_cols(k) - 1);
  }
}

TEST_CASE("extent_of evaluates the corrected area equations") {
  CHECK(extent_of({1, 1, 2}) == GeoExtent{0.0, 90.0, 0.0, 90.0});
  CHECK(extent_of({0, 0, 0}) == GeoExtent{-180.0, 0.0, -90.0, 90.0});
  CHECK(extent_of({2, 3, 7}) == GeoExtent{135.0, 180.0, 45.0, 90.0});
}

TEST_CASE("extent_of rejects addresses outside the grid") {
  CHECK_THROWS_AS(extent_of({1, 2, 0}), DomainError);
  CHECK_THROWS_AS(extent_of({1, 0, 4}), DomainError);
}

TEST_CASE("round-trip containment for random points") {
  std::mt19937_64 rng(7);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) / 9007199254740992.0);
  };
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint p{uniform(-180.0, 180.0), uniform(-90.0, 90.0)};
    const uint32_t k = static_cast<uint32_t>(rng() % 9);
    const GeoExtent e = extent_of(tile_address_of(p, k));
    CHECK(e.contains(p));
  }
}

TEST_CASE("global grid tiles partition the world exactly") {
  std::mt19937_64 rng(11);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) / 9007199254740992.0);
  };
  for (uint32_t k = 0; k <= 4; ++k) {
    // Every sampled point falls into exactly one tile extent.
    for (int i = 0; i < 400; ++i) {
      const GeoPoint p{uniform(-180.0, 180.0), uniform(-90.0, 90.0)};
      int owners = 0;
      for (uint32_t r = 0; r < global_grid_rows(k); ++r) {
        for (uint32_t c = 0; c < global_grid_cols(k); ++c) {
          if (extent_of({k, r, c}).contains(p)) ++owners;
        }
      }
      CHECK(owners == 1);
    }
    // Tile edges meet with no gaps: neighbours share boundaries and the outer
    // boundary is the world.
    const double cell = 180.0 / static_cast<double>(1u << k);
    for (uint32_t r = 0; r < global_grid_rows(k); ++r) {
      for (uint32_t c = 0; c < global_grid_cols(k); ++c) {
        const GeoExtent e = extent_of({k, r, c});
        CHECK(e.east - e.west == doctest::Approx(cell));
        CHECK(e.north - e.south == doctest::Approx(cell));
        if (c + 1 < global_grid_cols(k)) {
          CHECK(extent_of({k, r, c + 1}).west == doctest::Approx(e.east));
        } else {
          CHECK(e.east == doctest::Approx(180.0));
        }
        if (r + 1 < global_grid_rows(k)) {
          CHECK(extent_of({k, r + 1, c}).south == doctest::Approx(e.north));
        } else {
          CHECK(e.north == doctest::Approx(90.0));
        }
      }
    }
  }
}

TEST_CASE("each tile refines into a 2x2 block one level down") {
  for (uint32_t k = 0; k <= 3; ++k) {
    for (uint32_t r = 0; r < global_grid_rows(k); ++r) {
      for (uint32_t c = 0; c < global_grid_cols(k); ++c) {
        const GeoExtent parent = extent_of({k, r, c});
        const GeoExtent sw = extent_of({k + 1, 2 * r, 2 * c});
        const GeoExtent se = extent_of({k + 1, 2 * r, 2 * c + 1});
        const GeoExtent nw = extent_of({k + 1, 2 * r + 1, 2 * c});
        const GeoExtent ne = extent_of({k + 1, 2 * r + 1, 2 * c + 1});
        CHECK(sw.west == doctest::Approx(parent.west));
        CHECK(sw.south == doctest::Approx(parent.south));
        CHECK(ne.east == doctest::Approx(parent.east));
        CHECK(ne.north == doctest::Approx(parent.north));
        CHECK(sw.east == doctest::Approx(se.west));
        CHECK(sw.north == doctest::Approx(nw.south));
        CHECK(se.north == doctest::Approx(ne.south));
        CHECK(nw.east == doctest::Approx(ne.west));
      }
    }
  }
}
