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

#include "rastile/raster_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include "rastile/errors.hpp"

namespace rastile {

namespace {

constexpr char kMagic[] = "RASTILE1";
constexpr char kSampleType[] = "u8";
constexpr std::size_t kFieldLen = 32;

void put_field(std::string& header, std::string_view value) {
  if (value.size() >= kFieldLen) {
    throw DomainError("raster header field too long: " + std::string(value));
  }
  std::string field(kFieldLen, '\0');
  std::copy(value.begin(), value.end(), field.begin());
  header += field;
}

std::string real_field(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string get_field(const std::string& header, std::size_t index) {
  const char* base = header.data() + index * kFieldLen;
  std::size_t len = 0;
  while (len < kFieldLen && base[len] != '\0') ++len;
  return std::string(base, len);
}

uint32_t field_uint(const std::string& s, const char* what) {
  uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw FormatError(std::string("bad raster header field ") + what + ": '" +
                      s + "'");
  }
  return v;
}

double field_real(const std::string& s, const char* what) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw FormatError(std::string("bad raster header field ") + what + ": '" +
                      s + "'");
  }
  return v;
}

}  // namespace

void write_raster(const std::filesystem::path& path, const std::string& name,
                  const RasterImage& img) {
  if (img.width == 0 || img.height == 0 || img.bands.empty()) {
    throw DomainError("cannot write an empty raster");
  }
  std::string header;
  header.reserve(kRasterHeaderBytes);
  put_field(header, kMagic);
  put_field(header, name);
  put_field(header, std::to_string(img.width));
  put_field(header, std::to_string(img.height));
  put_field(header, std::to_string(img.band_count()));
  put_field(header, kSampleType);
  put_field(header, real_field(img.extent.west));
  put_field(header, real_field(img.extent.east));
  put_field(header, real_field(img.extent.south));
  put_field(header, real_field(img.extent.north));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& b : img.bands) {
    out.write(reinterpret_cast<const char*>(b.samples.data()),
              static_cast<std::streamsize>(b.samples.size()));
  }
  out.close();
  if (!out) throw Error("failed to write raster " + path.string());
}

RasterFileHeader read_raster_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open raster " + path.string());
  std::string header(kRasterHeaderBytes, '\0');
  in.read(header.data(), static_cast<std::streamsize>(kRasterHeaderBytes));
  if (!in) throw FormatError("raster header truncated: " + path.string());
  if (get_field(header, 0) != kMagic) {
    throw FormatError("not a raster file: " + path.string());
  }
  RasterFileHeader h;
  h.name = get_field(header, 1);
  h.width = field_uint(get_field(header, 2), "width");
  h.height = field_uint(get_field(header, 3), "height");
  h.band_count = field_uint(get_field(header, 4), "band_count");
  if (get_field(header, 5) != kSampleType) {
    throw FormatError("unsupported sample type in " + path.string());
  }
  h.extent.west = field_real(get_field(header, 6), "west");
  h.extent.east = field_real(get_field(header, 7), "east");
  h.extent.south = field_real(get_field(header, 8), "south");
  h.extent.north = field_real(get_field(header, 9), "north");
  if (h.width == 0 || h.height == 0 || h.band_count == 0) {
    throw FormatError("raster dimensions must be positive: " + path.string());
  }
  if (!h.extent.valid()) {
    throw FormatError("invalid raster extent: " + path.string());
  }
  return h;
}

std::pair<RasterFileHeader, RasterImage> read_raster(
    const std::filesystem::path& path) {
  const RasterFileHeader h = read_raster_header(path);
  std::ifstream in(path, std::ios::binary);
  in.seekg(kRasterHeaderBytes);
  RasterImage img;
  img.width = h.width;
  img.height = h.height;
  img.extent = h.extent;
  img.bands.resize(h.band_count);
  const std::size_t plane = std::size_t{h.width} * h.height;
  for (auto& b : img.bands) {
    b.width = h.width;
    b.height = h.height;
    b.samples.resize(plane);
    in.read(reinterpret_cast<char*>(b.samples.data()),
            static_cast<std::streamsize>(plane));
    if (!in) throw FormatError("raster payload truncated: " + path.string());
  }
  return {h, std::move(img)};
}

GeoExtent synthetic_extent(uint32_t width, uint32_t height) {
  const double span = 10.0;
  const double max_dim = static_cast<double>(std::max(width, height));
  GeoExtent e;
  e.west = 0.0;
  e.south = 0.0;
  e.east = span * static_cast<double>(width) / max_dim;
  e.north = span * static_cast<double>(height) / max_dim;
  return e;
}

RasterImage gen_synthetic(uint32_t width, uint32_t height, uint32_t bands,
                          uint64_t seed) {
  if (width == 0 || height == 0 || bands == 0) {
    throw DomainError("synthetic raster dimensions must be positive");
  }
  RasterImage img;
  img.width = width;
  img.height = height;
  img.extent = synthetic_extent(width, height);
  img.bands.resize(bands);
  // Raw engine output, not a distribution: std::mt19937_64 output is pinned
  // by the standard, so identical seeds give identical bytes everywhere.
  std::mt19937_64 rng(seed);
  const std::size_t plane = std::size_t{width} * height;
  for (auto& b : img.bands) {
    b.width = width;
    b.height = height;
    b.samples.resize(plane);
    std::size_t i = 0;
    while (i + 8 <= plane) {
      const uint64_t v = rng();
      for (int s = 0; s < 8; ++s) {
        b.samples[i + s] = static_cast<uint8_t>(v >> (8 * s));
      }
      i += 8;
    }
    if (i < plane) {
      const uint64_t v = rng();
      for (int s = 0; i < plane; ++i, ++s) {
        b.samples[i] = static_cast<uint8_t>(v >> (8 * s));
      }
    }
  }
  return img;
}

}  // namespace rastile
