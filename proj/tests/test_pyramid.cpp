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
#include "rastile/pyramid.hpp"

using namespace rastile;

namespace {

RasterBand make_band(uint32_t w, uint32_t h, uint64_t seed) {
  RasterBand b;
  b.width = w;
  b.height = h;
  b.samples.resize(std::size_t{w} * h);
  std::mt19937_64 rng(seed);
  for (auto& s : b.samples) s = static_cast<uint8_t>(rng());
  return b;
}

// Independent downsampling oracle: direct mean of the existing block samples,
// rounded half-up with double arithmetic.
RasterBand downsample_oracle(const RasterBand& b) {
  RasterBand out;
  out.width = (b.width + 1) / 2;
  out.height = (b.height + 1) / 2;
  out.samples.resize(std::size_t{out.width} * out.height);
  for (uint32_t oy = 0; oy < out.height; ++oy) {
    for (uint32_t ox = 0; ox < out.width; ++ox) {
      double sum = 0;
      int cnt = 0;
      for (uint32_t dy = 0; dy < 2; ++dy) {
        for (uint32_t dx = 0; dx < 2; ++dx) {
          const uint32_t x = ox * 2 + dx;
          const uint32_t y = oy * 2 + dy;
          if (x < b.width && y < b.height) {
            sum += b.samples[std::size_t{y} * b.width + x];
            ++cnt;
          }
        }
      }
      out.samples[std::size_t{oy} * out.width + ox] =
          static_cast<uint8_t>(std::floor(sum / cnt + 0.5));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("level_count_for") {
  CHECK(level_count_for(1024, 1024, 256) == 3);
  CHECK(level_count_for(256, 256, 256) == 1);
  CHECK(level_count_for(2048, 1024, 256) == 4);
  CHECK(level_count_for(300, 300, 256) == 2);
  CHECK(level_count_for(1, 1, 128) == 1);
  CHECK_THROWS_AS(level_count_for(0, 10, 256), DomainError);
}

TEST_CASE("downsample averages 2x2 blocks with half-up rounding") {
  RasterBand b;
  b.width = 2;
  b.height = 2;
  b.samples = {10, 20, 30, 40};
  const RasterBand d = downsample(b);
  CHECK(d.width == 1);
  CHECK(d.height == 1);
  CHECK(d.samples == std::vector<uint8_t>{25});
}

TEST_CASE("downsample maps constant bands to themselves") {
  for (auto [w, h] : {std::pair{5u, 3u}, {8u, 8u}, {1u, 7u}, {300u, 2u}}) {
    RasterBand b;
    b.width = w;
    b.height = h;
    b.samples.assign(std::size_t{w} * h, 77);
    const RasterBand d = downsample(b);
    CHECK(d.width == (w + 1) / 2);
    CHECK(d.height == (h + 1) / 2);
    for (auto s : d.samples) CHECK(s == 77);
  }
}

TEST_CASE("downsample matches the oracle on random bands") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const uint32_t w = 1 + static_cast<uint32_t>(rng() % 64);
    const uint32_t h = 1 + static_cast<uint32_t>(rng() % 64);
    if (w < 2 && h < 2) continue;
    const RasterBand b = make_band(w, h, rng());
    CHECK(downsample(b) == downsample_oracle(b));
  }
}

TEST_CASE("downsample dimension chain 1024 -> 512 -> 256 -> 128") {
  RasterBand b = make_band(1024, 1024, 9);
  b = downsample(b);
  CHECK(b.width == 512);
  CHECK(b.height == 512);
  b = downsample(b);
  CHECK(b.width == 256);
  CHECK(b.height == 256);
  b = downsample(b);
  CHECK(b.width == 128);
  CHECK(b.height == 128);
}

TEST_CASE("downsample rejects a 1x1 band") {
  RasterBand b;
  b.width = 1;
  b.height = 1;
  b.samples = {5};
  CHECK_THROWS_AS(downsample(b), DomainError);
}

TEST_CASE("slice_level produces a row-major zero-padded grid") {
  SUBCASE("1024x1024 at 256 gives 16 full tiles") {
    const RasterBand b = make_band(1024, 1024, 1);
    const auto tiles = slice_level(b, 256, 0, 0);
    REQUIRE(tiles.size() == 16);
    for (const auto& t : tiles) {
      CHECK(t.valid_width == 256);
      CHECK(t.valid_height == 256);
    }
    CHECK(tiles[5].address == TileAddress{0, 1, 1});  // row-major order
  }
  SUBCASE("256x256 at 256 gives one tile") {
    const RasterBand b = make_band(256, 256, 2);
    const auto tiles = slice_level(b, 256, 3, 1);
    REQUIRE(tiles.size() == 1);
    CHECK(tiles[0].address == TileAddress{3, 0, 0});
    CHECK(tiles[0].band == 1);
  }
  SUBCASE("300x300 at 256 gives 4 tiles with recorded valid regions") {
    const RasterBand b = make_band(300, 300, 3);
    const auto tiles = slice_level(b, 256, 0, 0);
    REQUIRE(tiles.size() == 4);
    const Tile& t01 = tiles[1];
    CHECK(t01.address == TileAddress{0, 0, 1});
    CHECK(t01.valid_width == 44);
    CHECK(t01.valid_height == 256);
    // Padding bytes are zero.
    for (uint32_t y = 0; y < 256; ++y) {
      for (uint32_t x = t01.valid_width; x < 256; ++x) {
        CHECK(t01.pixels[y * 256 + x] == 0);
      }
    }
  }
}

TEST_CASE("build_pyramid tile counts") {
  SUBCASE("1024x1024x4 at 256 with 3 levels") {
    RasterImage img;
    img.width = img.height = 1024;
    img.extent = GeoExtent{0, 10, 0, 10};
    for (int i = 0; i < 4; ++i) img.bands.push_back(make_band(1024, 1024, i));
    const Pyramid p = build_pyramid(img, PyramidSpec{256, 3});
    CHECK(p.tile_count() == 84);  // 4 * (16 + 4 + 1)
  }
  SUBCASE("single-band 256x256, 1 level") {
    RasterImage img;
    img.width = img.height = 256;
    img.extent = GeoExtent{0, 10, 0, 10};
    img.bands.push_back(make_band(256, 256, 5));
    CHECK(build_pyramid(img, PyramidSpec{256, 1}).tile_count() == 1);
  }
  SUBCASE("512x512x1 at 256 with 2 levels") {
    RasterImage img;
    img.width = img.height = 512;
    img.extent = GeoExtent{0, 10, 0, 10};
    img.bands.push_back(make_band(512, 512, 6));
    CHECK(build_pyramid(img, PyramidSpec{256, 2}).tile_count() == 5);
  }
  SUBCASE("power-of-two pyramid matches the closed-form count") {
    RasterImage img;
    img.width = img.height = 2048;
    img.extent = GeoExtent{0, 10, 0, 10};
    img.bands.push_back(make_band(2048, 2048, 7));
    const uint32_t ts = 256;
    const uint32_t levels = level_count_for(2048, 2048, ts);
    const Pyramid p = build_pyramid(img, PyramidSpec{ts, levels});
    std::size_t expect = 0;
    for (uint32_t lvl = 0; lvl < levels; ++lvl) {
      const std::size_t edge = 2048 / (ts << lvl);
      expect += edge * edge;
    }
    CHECK(p.tile_count() == expect);
  }
}

TEST_CASE("build_pyramid rejects bad inputs") {
  RasterImage img;
  img.width = img.height = 512;
  img.extent = GeoExtent{0, 10, 0, 10};
  img.bands.push_back(make_band(512, 512, 1));
  CHECK_THROWS_AS(build_pyramid(img, PyramidSpec{256, 5}), DomainError);
  img.bands.push_back(make_band(256, 512, 2));  // inconsistent dims
  CHECK_THROWS_AS(build_pyramid(img, PyramidSpec{256, 2}), DomainError);
}

TEST_CASE("slice then reassemble is the identity") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const uint32_t w = 1 + static_cast<uint32_t>(rng() % 700);
    const uint32_t h = 1 + static_cast<uint32_t>(rng() % 700);
    const RasterBand b = make_band(w, h, rng());
    const auto tiles = slice_level(b, 256, 0, 0);
    const RasterBand back = reassemble(tiles, 0);
    CHECK(back == b);
  }
}

TEST_CASE("reassemble of a 300x300 slice is byte-exact") {
  const RasterBand b = make_band(300, 300, 23);
  CHECK(reassemble(slice_level(b, 256, 0, 0), 0) == b);
}

TEST_CASE("reassemble reports missing tiles") {
  const RasterBand b = make_band(600, 600, 29);
  auto tiles = slice_level(b, 256, 0, 0);
  REQUIRE(tiles.size() == 9);
  tiles.erase(tiles.begin() + 4);  // drop (1,1)
  try {
    reassemble(tiles, 0);
    FAIL("expected IncompleteMosaicError");
  } catch (const IncompleteMosaicError& e) {
    REQUIRE(e.missing().size() == 1);
    CHECK(e.missing()[0] == TileAddress{0, 1, 1});
  }
}

TEST_CASE("single tile reassembles to its valid pixels") {
  const RasterBand b = make_band(256, 256, 31);
  const auto tiles = slice_level(b, 256, 0, 0);
  REQUIRE(tiles.size() == 1);
  CHECK(reassemble(tiles, 0) == b);
}
