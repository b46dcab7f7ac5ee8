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
#include <set>

#include "rastile/errors.hpp"
#include "rastile/hilbert.hpp"
#include "rastile/keys.hpp"

using namespace rastile;

namespace {

std::string bytes_of(std::initializer_list<unsigned char> v) {
  return std::string(v.begin(), v.end());
}

TileKey random_key(std::mt19937_64& rng) {
  TileKey k;
  k.raster_id = static_cast<uint16_t>(rng());
  k.level = static_cast<uint8_t>(rng());
  k.band = static_cast<uint8_t>(rng());
  k.hilbert = static_cast<uint32_t>(rng());
  return k;
}

}  // namespace

TEST_CASE("row key bit layout") {
  CHECK(encode_tile_key({1, 0, 0, 0}) ==
        bytes_of({0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}));
  CHECK(encode_tile_key({0, 0, 0, 0}) ==
        bytes_of({0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}));
  CHECK(encode_tile_key({1, 2, 3, 5}) ==
        bytes_of({0x00, 0x01, 0x02, 0x03, 0x00, 0x00, 0x00, 0x05}));
}

TEST_CASE("decode inverts encode") {
  const TileKey k = decode_tile_key(
      bytes_of({0x00, 0x01, 0x02, 0x03, 0x00, 0x00, 0x00, 0x05}));
  CHECK(k == TileKey{1, 2, 3, 5});
  CHECK(decode_tile_key(std::string(8, '\0')) == TileKey{0, 0, 0, 0});

  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const TileKey r = random_key(rng);
    CHECK(decode_tile_key(encode_tile_key(r)) == r);
  }
}

TEST_CASE("wrong key length is a format error") {
  CHECK_THROWS_AS(decode_tile_key("1234567"), FormatError);
  CHECK_THROWS_AS(decode_tile_key("123456789"), FormatError);
}

TEST_CASE("numeric key order equals byte-lexicographic order") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 5000; ++i) {
    const TileKey a = random_key(rng);
    const TileKey b = random_key(rng);
    CHECK((a.packed() < b.packed()) ==
          (encode_tile_key(a) < encode_tile_key(b)));
  }
}

TEST_CASE("metadata row key round-trips") {
  CHECK(parse_metadata_row_key(metadata_row_key(0x1234)) == 0x1234);
  CHECK(metadata_row_key(1) == bytes_of({0x00, 0x01}));
  CHECK_THROWS_AS(parse_metadata_row_key("abc"), FormatError);
}

TEST_CASE("bbox_to_ranges on the spec grids") {
  SUBCASE("1x2 grid at order 1, full extent") {
    const auto ranges = bbox_to_ranges(1, 255, 0, 1, {0, 0}, {0, 1});
    REQUIRE(ranges.size() == 2);
    CHECK(ranges[0].start.hilbert == 0);
    CHECK(ranges[0].end.hilbert == 0);
    CHECK(ranges[1].start.hilbert == 3);
    CHECK(ranges[1].end.hilbert == 3);
  }
  SUBCASE("single cell (0,0)") {
    for (uint32_t order : {1u, 2u, 4u}) {
      const auto ranges = bbox_to_ranges(1, 255, 0, order, {0, 0}, {0, 0});
      REQUIRE(ranges.size() == 1);
      CHECK(ranges[0].start.hilbert == 0);
      CHECK(ranges[0].end.hilbert == 0);
    }
  }
  SUBCASE("full 4x4 rectangle is one range") {
    const auto ranges = bbox_to_ranges(1, 255, 0, 2, {0, 3}, {0, 3});
    REQUIRE(ranges.size() == 1);
    CHECK(ranges[0].start.hilbert == 0);
    CHECK(ranges[0].end.hilbert == 15);
  }
  SUBCASE("empty intersection gives an empty list") {
    CHECK(bbox_to_ranges(1, 255, 0, 2, {2, 1}, {0, 3}).empty());
  }
}

TEST_CASE("ranges carry the full key prefix") {
  const auto ranges = bbox_to_ranges(7, 255, 3, 2, {0, 3}, {0, 3});
  REQUIRE(ranges.size() == 1);
  CHECK(ranges[0].start.raster_id == 7);
  CHECK(ranges[0].start.level == 3);
  CHECK(ranges[0].start.band == 255);
  CHECK(ranges[0].start_bytes() <= ranges[0].end_bytes());
}

TEST_CASE("range decomposition equals the brute-force cell set") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const uint32_t order = 1 + static_cast<uint32_t>(rng() % 6);
    const uint32_t side = 1u << order;
    uint32_t r0 = static_cast<uint32_t>(rng() % side);
    uint32_t r1 = static_cast<uint32_t>(rng() % side);
    uint32_t c0 = static_cast<uint32_t>(rng() % side);
    uint32_t c1 = static_cast<uint32_t>(rng() % side);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);

    std::set<uint64_t> expected;
    for (uint32_t r = r0; r <= r1; ++r) {
      for (uint32_t c = c0; c <= c1; ++c) {
        expected.insert(hilbert_encode(order, c, r));
      }
    }

    const auto ranges = bbox_to_ranges(1, 255, 0, order, {r0, r1}, {c0, c1});
    std::set<uint64_t> got;
    uint64_t prev_end = 0;
    bool first = true;
    for (const auto& kr : ranges) {
      CHECK(kr.start.hilbert <= kr.end.hilbert);
      if (!first) {
        CHECK(kr.start.hilbert > prev_end + 1);  // sorted, disjoint, maximal
      }
      prev_end = kr.end.hilbert;
      first = false;
      for (uint64_t code = kr.start.hilbert; code <= kr.end.hilbert; ++code) {
        got.insert(code);
      }
    }
    CHECK(got == expected);
  }
}
