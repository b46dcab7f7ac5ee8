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

#include "rastile/table.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rastile/errors.hpp"

namespace rastile {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kDescriptorFile[] = "table.json";

std::string segment_name(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06llu.seg",
                static_cast<unsigned long long>(index));
  return buf;
}

void merge_versions(std::vector<Segment::Version>& into,
                    const std::vector<Segment::Version>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

}  // namespace

Table::Table(fs::path dir, TableSchema schema)
    : dir_(std::move(dir)), schema_(std::move(schema)) {}

std::unique_ptr<Table> Table::create(const fs::path& dir, TableSchema schema) {
  if (schema.name.empty()) throw SchemaError("table name must not be empty");
  if (schema.families.empty()) {
    throw SchemaError("table '" + schema.name + "' declares no column families");
  }
  std::vector<std::string> sorted = schema.families;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw SchemaError("duplicate column family in table '" + schema.name + "'");
  }
  if (schema.max_versions < 1) {
    throw SchemaError("max_versions must be at least 1");
  }
  if (fs::exists(dir)) {
    throw ConflictError("table directory already exists: " + dir.string());
  }
  fs::create_directories(dir);
  auto t = std::unique_ptr<Table>(new Table(dir, std::move(schema)));
  t->write_descriptor();
  return t;
}

std::unique_ptr<Table> Table::open(const fs::path& dir) {
  const fs::path desc = dir / kDescriptorFile;
  std::ifstream in(desc);
  if (!in) throw NotFoundError("no table descriptor at " + desc.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("bad table descriptor " + desc.string() + ": " + e.what());
  }
  TableSchema schema;
  schema.name = j.at("name").get<std::string>();
  schema.families = j.at("families").get<std::vector<std::string>>();
  schema.max_versions = j.at("max_versions").get<uint32_t>();
  auto t = std::unique_ptr<Table>(new Table(dir, std::move(schema)));
  t->next_timestamp_ = j.at("next_timestamp").get<uint64_t>();

  std::vector<fs::path> seg_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".seg") seg_files.push_back(entry.path());
  }
  std::sort(seg_files.begin(), seg_files.end());
  for (const auto& p : seg_files) {
    t->segments_.push_back(std::make_unique<Segment>(p));
  }
  t->next_segment_ = seg_files.size() + 1;
  return t;
}

void Table::write_descriptor() const {
  json j;
  j["name"] = schema_.name;
  j["families"] = schema_.families;
  j["max_versions"] = schema_.max_versions;
  j["next_timestamp"] = next_timestamp_;
  const fs::path tmp = dir_ / (std::string(kDescriptorFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw Error("failed to write table descriptor " + tmp.string());
  }
  fs::rename(tmp, dir_ / kDescriptorFile);
}

void Table::check_family(std::string_view family) const {
  for (const auto& f : schema_.families) {
    if (f == family) return;
  }
  throw SchemaError("undeclared column family '" + std::string(family) +
                    "' in table '" + schema_.name + "'");
}

void Table::put(std::string_view row_key, std::string_view family,
                std::string_view qualifier, std::string_view value) {
  if (row_key.empty()) throw DomainError("row key must not be empty");
  check_family(family);
  std::unique_lock lock(mutex_);
  auto& versions = mem_[Segment::Coord{std::string(row_key), std::string(family),
                                       std::string(qualifier)}];
  versions.insert(versions.begin(),
                  Segment::Version{next_timestamp_++, std::string(value)});
  if (versions.size() > schema_.max_versions) {
    versions.resize(schema_.max_versions);
  }
}

std::vector<Segment::Version> Table::merged_versions(
    const Segment::Coord& c) const {
  std::vector<Segment::Version> all;
  if (auto it = mem_.find(c); it != mem_.end()) merge_versions(all, it->second);
  for (const auto& seg : segments_) {
    const auto& key = std::get<0>(c);
    if (key < seg->min_key() || key > seg->max_key()) continue;
    const auto& cells = seg->cells();
    if (auto it = cells.find(c); it != cells.end()) merge_versions(all, it->second);
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.timestamp > b.timestamp; });
  if (all.size() > schema_.max_versions) all.resize(schema_.max_versions);
  return all;
}

std::vector<Cell> Table::get(std::string_view row_key) const {
  std::shared_lock lock(mutex_);
  const std::string key(row_key);
  // Collect the coordinates present for this row, then resolve versions.
  std::vector<Segment::Coord> coords;
  auto add_row = [&](const Segment::CellMap& m) {
    for (auto it = m.lower_bound(Segment::Coord{key, "", ""});
         it != m.end() && std::get<0>(it->first) == key; ++it) {
      coords.push_back(it->first);
    }
  };
  add_row(mem_);
  for (const auto& seg : segments_) {
    if (key < seg->min_key() || key > seg->max_key()) continue;
    add_row(seg->cells());
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  std::vector<Cell> out;
  for (const auto& c : coords) {
    auto versions = merged_versions(c);
    if (versions.empty()) continue;
    out.push_back(Cell{std::get<0>(c), std::get<1>(c), std::get<2>(c),
                       versions.front().timestamp, versions.front().value});
  }
  return out;
}

std::vector<Cell> Table::get_versions(std::string_view row_key,
                                      std::string_view family,
                                      std::string_view qualifier,
                                      std::size_t max_n) const {
  std::shared_lock lock(mutex_);
  const Segment::Coord c{std::string(row_key), std::string(family),
                         std::string(qualifier)};
  auto versions = merged_versions(c);
  if (versions.size() > max_n) versions.resize(max_n);
  std::vector<Cell> out;
  out.reserve(versions.size());
  for (auto& v : versions) {
    out.push_back(Cell{std::get<0>(c), std::get<1>(c), std::get<2>(c),
                       v.timestamp, std::move(v.value)});
  }
  return out;
}

std::vector<Cell> Table::scan(std::string_view start_key,
                              std::string_view end_key) const {
  if (start_key > end_key) {
    throw DomainError("inverted scan range");
  }
  std::shared_lock lock(mutex_);
  const std::string lo(start_key);
  const std::string hi(end_key);

  std::vector<Segment::Coord> coords;
  auto add_range = [&](const Segment::CellMap& m) {
    for (auto it = m.lower_bound(Segment::Coord{lo, "", ""});
         it != m.end() && std::get<0>(it->first) <= hi; ++it) {
      coords.push_back(it->first);
    }
  };
  add_range(mem_);
  for (const auto& seg : segments_) {
    if (hi < seg->min_key() || lo > seg->max_key()) continue;
    add_range(seg->cells());
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  std::vector<Cell> out;
  out.reserve(coords.size());
  for (const auto& c : coords) {
    auto versions = merged_versions(c);
    if (versions.empty()) continue;
    out.push_back(Cell{std::get<0>(c), std::get<1>(c), std::get<2>(c),
                       versions.front().timestamp, versions.front().value});
  }
  return out;
}

void Table::flush() {
  std::unique_lock lock(mutex_);
  if (mem_.empty()) return;
  const fs::path path = dir_ / segment_name(next_segment_);
  Segment::write(path, mem_);
  segments_.push_back(std::make_unique<Segment>(path));
  ++next_segment_;
  mem_.clear();
  write_descriptor();
}

Table::Stats Table::stats() const {
  Stats s;
  std::shared_lock lock(mutex_);
  std::vector<Segment::Coord> coords;
  for (const auto& [c, v] : mem_) coords.push_back(c);
  for (const auto& seg : segments_) {
    for (const auto& [c, v] : seg->cells()) coords.push_back(c);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  for (const auto& c : coords) {
    auto versions = merged_versions(c);
    if (versions.empty()) continue;
    ++s.cells;
    s.bytes += versions.front().value.size();
  }
  return s;
}

}  // namespace rastile
