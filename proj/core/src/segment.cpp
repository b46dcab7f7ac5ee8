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

// Segment file layout, all integers big-endian:
//
//   "RSTSEG01"
//   cells, sorted by (row_key, family, qualifier, timestamp desc):
//     u32 key_len, key, u32 family_len, family, u32 qualifier_len, qualifier,
//     u64 timestamp, u32 value_len, value
//   footer: u64 cell_count, u32 min_key_len, min_key, u32 max_key_len, max_key
//   tail:   u32 footer_len, u64 checksum, "RSTEND01"
//
// The checksum is FNV-1a 64 over every byte that precedes the checksum field.

#include <fstream>

#include "bytes.hpp"
#include "rastile/errors.hpp"
#include "rastile/table.hpp"

namespace rastile {

namespace {

constexpr char kHeadMagic[] = "RSTSEG01";
constexpr char kTailMagic[] = "RSTEND01";
constexpr std::size_t kMagicLen = 8;
constexpr std::size_t kTailLen = 4 + 8 + kMagicLen;

void put_lp(std::string& out, std::string_view s) {
  bytes::put_u32(out, static_cast<uint32_t>(s.size()));
  out.append(s);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot open segment", path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

}  // namespace

void Segment::write(const std::filesystem::path& path, const CellMap& cells) {
  std::string buf;
  buf.append(kHeadMagic, kMagicLen);
  uint64_t count = 0;
  for (const auto& [coord, versions] : cells) {
    for (const auto& v : versions) {
      put_lp(buf, std::get<0>(coord));
      put_lp(buf, std::get<1>(coord));
      put_lp(buf, std::get<2>(coord));
      bytes::put_u64(buf, v.timestamp);
      put_lp(buf, v.value);
      ++count;
    }
  }
  std::string footer;
  bytes::put_u64(footer, count);
  put_lp(footer, cells.empty() ? std::string_view{}
                               : std::string_view{std::get<0>(cells.begin()->first)});
  put_lp(footer, cells.empty() ? std::string_view{}
                               : std::string_view{std::get<0>(cells.rbegin()->first)});
  buf.append(footer);
  bytes::put_u32(buf, static_cast<uint32_t>(footer.size()));
  bytes::put_u64(buf, bytes::fnv1a(buf));
  buf.append(kTailMagic, kMagicLen);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.close();
  if (!out) throw Error("failed to write segment " + path.string());
}

Segment::Segment(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path_, ec);
  if (ec || size < kMagicLen + kTailLen) {
    throw IntegrityError("segment too short", path_.string());
  }
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw IntegrityError("cannot open segment", path_.string());
  std::string tail(kTailLen, '\0');
  in.seekg(static_cast<std::streamoff>(size - kTailLen));
  in.read(tail.data(), static_cast<std::streamsize>(kTailLen));
  if (!in || tail.substr(4 + 8) != kTailMagic) {
    throw IntegrityError("bad segment trailer", path_.string());
  }
  bytes::Reader tr(tail, "segment trailer " + path_.string());
  const uint32_t footer_len = tr.u32();
  if (size < kMagicLen + kTailLen + footer_len) {
    throw IntegrityError("bad segment footer length", path_.string());
  }
  std::string footer(footer_len, '\0');
  in.seekg(static_cast<std::streamoff>(size - kTailLen - footer_len));
  in.read(footer.data(), static_cast<std::streamsize>(footer_len));
  if (!in) throw IntegrityError("cannot read segment footer", path_.string());
  try {
    bytes::Reader fr(footer, "segment footer " + path_.string());
    cell_count_ = fr.u64();
    min_key_ = std::string(fr.raw(fr.u32()));
    max_key_ = std::string(fr.raw(fr.u32()));
    if (!fr.done()) throw FormatError("trailing footer bytes");
  } catch (const FormatError&) {
    throw IntegrityError("bad segment footer", path_.string());
  }
}

const Segment::CellMap& Segment::cells() const {
  std::call_once(load_once_, [this] {
    const std::string data = read_file(path_);
    if (data.size() < kMagicLen + kTailLen ||
        data.compare(0, kMagicLen, kHeadMagic) != 0 ||
        data.compare(data.size() - kMagicLen, kMagicLen, kTailMagic) != 0) {
      throw IntegrityError("bad segment structure", path_.string());
    }
    bytes::Reader tr(std::string_view(data).substr(data.size() - kTailLen),
                     "segment trailer " + path_.string());
    tr.u32();
    const uint64_t want = tr.u64();
    const uint64_t got =
        bytes::fnv1a(std::string_view(data).substr(0, data.size() - 8 - kMagicLen));
    if (want != got) {
      throw IntegrityError("segment checksum mismatch", path_.string());
    }
    try {
      bytes::Reader r(std::string_view(data).substr(
                          kMagicLen, data.size() - kMagicLen - kTailLen),
                      "segment " + path_.string());
      CellMap cells;
      for (uint64_t i = 0; i < cell_count_; ++i) {
        std::string row(r.raw(r.u32()));
        std::string fam(r.raw(r.u32()));
        std::string qual(r.raw(r.u32()));
        const uint64_t ts = r.u64();
        std::string value(r.raw(r.u32()));
        cells[Coord{std::move(row), std::move(fam), std::move(qual)}].push_back(
            Version{ts, std::move(value)});
      }
      loaded_ = std::move(cells);
    } catch (const FormatError&) {
      throw IntegrityError("bad segment cell data", path_.string());
    }
  });
  return loaded_;
}

}  // namespace rastile
