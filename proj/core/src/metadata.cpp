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

#include "rastile/metadata.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rastile/errors.hpp"

namespace rastile {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_quotes(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

bool is_wrapper_key(const std::string& key) {
  return key == "GROUP" || key == "END_GROUP" || key == "BEGIN_GROUP";
}

// Dates or full timestamps: 2025-06-05, 2025-06-05T10:21:30Z,
// 2025-06-05 10:21:30.5Z. UTC text of this shape orders lexicographically.
bool well_formed_timestamp(const std::string& s) {
  static const std::regex re(
      R"(^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}:\d{2}(\.\d+)?Z?)?$)");
  return std::regex_match(s, re);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_real(const std::string& s, const std::string& what) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw FormatError("cannot parse number for " + what + ": '" + s + "'");
  }
  return v;
}

int64_t parse_int(const std::string& s, const std::string& what) {
  int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw FormatError("cannot parse integer for " + what + ": '" + s + "'");
  }
  return v;
}

const std::vector<std::string>& required_fields() {
  static const std::vector<std::string> kRequired = {
      "satellite_id",     "sensor_id",        "top_left_lat",
      "top_left_lon",     "top_right_lat",    "top_right_lon",
      "bottom_right_lat", "bottom_right_lon", "bottom_left_lat",
      "bottom_left_lon"};
  return kRequired;
}

std::map<std::string, FieldMapping>& mapping_registry() {
  static std::map<std::string, FieldMapping> registry = [] {
    std::map<std::string, FieldMapping> r;
    r[kDialectLandsatMtl] =
        FieldMapping{kDialectLandsatMtl,
                     {
                         {"SPACECRAFT_ID", "satellite_id"},
                         {"SENSOR_ID", "sensor_id"},
                         {"LANDSAT_SCENE_ID", "image_name"},
                         {"DATE_ACQUIRED", "receive_time"},
                         {"WRS_ROW", "scene_row"},
                         {"CLOUD_COVER", "cloud_percent"},
                         {"OUTPUT_FORMAT", "product_format"},
                         {"DATA_TYPE", "product_level"},
                         {"GRID_CELL_SIZE_REFLECTIVE", "spatial_resolution"},
                         {"DATUM", "reference_system_id"},
                         {"ORIGIN", "data_provider"},
                         {"STATION_ID", "data_owner"},
                         {"CORNER_UL_LAT_PRODUCT", "top_left_lat"},
                         {"CORNER_UL_LON_PRODUCT", "top_left_lon"},
                         {"CORNER_UR_LAT_PRODUCT", "top_right_lat"},
                         {"CORNER_UR_LON_PRODUCT", "top_right_lon"},
                         {"CORNER_LR_LAT_PRODUCT", "bottom_right_lat"},
                         {"CORNER_LR_LON_PRODUCT", "bottom_right_lon"},
                         {"CORNER_LL_LAT_PRODUCT", "bottom_left_lat"},
                         {"CORNER_LL_LON_PRODUCT", "bottom_left_lon"},
                     }};
    r[kDialectZy3Kv] =
        FieldMapping{kDialectZy3Kv,
                     {
                         {"Satellite-ID", "satellite_id"},
                         {"Sensor-ID", "sensor_id"},
                         {"ImageName", "image_name"},
                         {"ReceiveTime", "receive_time"},
                         {"SceneRow", "scene_row"},
                         {"CloudPercent", "cloud_percent"},
                         {"ProductFormat", "product_format"},
                         {"ProductLevel", "product_level"},
                         {"SpatialResolution", "spatial_resolution"},
                         {"ReferenceSystemID", "reference_system_id"},
                         {"DataProvider", "data_provider"},
                         {"DataOwner", "data_owner"},
                         {"DataLink", "data_link"},
                         {"FilePath", "file_path"},
                         {"ProcessingLevel", "processing_level"},
                         {"TimeBeginPosition", "time_begin"},
                         {"TimeEndPosition", "time_end"},
                         {"CenterLongitude", "center_lon"},
                         {"CenterLatitude", "center_lat"},
                         {"TopLeftLatitude", "top_left_lat"},
                         {"TopLeftLongitude", "top_left_lon"},
                         {"TopRightLatitude", "top_right_lat"},
                         {"TopRightLongitude", "top_right_lon"},
                         {"BottomRightLatitude", "bottom_right_lat"},
                         {"BottomRightLongitude", "bottom_right_lon"},
                         {"BottomLeftLatitude", "bottom_left_lat"},
                         {"BottomLeftLongitude", "bottom_left_lon"},
                     }};
    return r;
  }();
  return registry;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

void check_mapping(const FieldMapping& m) {
  std::set<std::string> seen;
  for (const auto& [src, dst] : m.pairs) {
    if (!find_unified_field(dst)) {
      throw SchemaError("mapping for dialect '" + m.dialect +
                        "' names unknown unified field '" + dst + "'");
    }
    if (!seen.insert(dst).second) {
      throw SchemaError("unified field '" + dst +
                        "' mapped more than once for dialect '" + m.dialect + "'");
    }
  }
}

}  // namespace

const std::string* SourceMetadataDocument::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool dialect_supported(const std::string& dialect) {
  std::lock_guard lock(registry_mutex());
  return mapping_registry().count(dialect) > 0;
}

SourceMetadataDocument parse_source(const std::string& text,
                                    const std::string& dialect) {
  if (!dialect_supported(dialect)) {
    throw DomainError("unsupported metadata dialect: " + dialect);
  }
  const bool mtl = dialect == kDialectLandsatMtl;
  const char sep = mtl ? '=' : ':';

  SourceMetadataDocument doc;
  doc.dialect = dialect;
  std::set<std::string> seen;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (mtl && line == "END") continue;
    const auto pos = line.find(sep);
    if (pos == std::string::npos) {
      throw ParseError("expected '" + std::string(1, sep) + "' in line", lineno);
    }
    const std::string key = trim(line.substr(0, pos));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (mtl && is_wrapper_key(key)) continue;
    const std::string value = strip_quotes(trim(line.substr(pos + 1)));
    if (!seen.insert(key).second) {
      throw ParseError("duplicate key '" + key + "'", lineno);
    }
    doc.entries.emplace_back(key, value);
  }
  return doc;
}

const std::vector<UnifiedField>& unified_fields() {
  static const std::vector<UnifiedField> kFields = {
      {"creation", &UnifiedMetadata::creation, true},
      {"last_update", &UnifiedMetadata::last_update, true},
      {"image_name", &UnifiedMetadata::image_name},
      {"tiles_codes", &UnifiedMetadata::tiles_codes},
      {"level", &UnifiedMetadata::level},
      {"satellite_id", &UnifiedMetadata::satellite_id},
      {"sensor_id", &UnifiedMetadata::sensor_id},
      {"receive_time", &UnifiedMetadata::receive_time, true},
      {"reference_system_id", &UnifiedMetadata::reference_system_id},
      {"time_begin", &UnifiedMetadata::time_begin, true},
      {"time_end", &UnifiedMetadata::time_end, true},
      {"product_level", &UnifiedMetadata::product_level},
      {"product_format", &UnifiedMetadata::product_format},
      {"spatial_resolution", &UnifiedMetadata::spatial_resolution},
      {"processing_level", &UnifiedMetadata::processing_level},
      {"center_lon", &UnifiedMetadata::center_lon},
      {"center_lat", &UnifiedMetadata::center_lat},
      {"top_left_lat", &UnifiedMetadata::top_left_lat},
      {"top_left_lon", &UnifiedMetadata::top_left_lon},
      {"top_right_lat", &UnifiedMetadata::top_right_lat},
      {"top_right_lon", &UnifiedMetadata::top_right_lon},
      {"bottom_right_lat", &UnifiedMetadata::bottom_right_lat},
      {"bottom_right_lon", &UnifiedMetadata::bottom_right_lon},
      {"bottom_left_lat", &UnifiedMetadata::bottom_left_lat},
      {"bottom_left_lon", &UnifiedMetadata::bottom_left_lon},
      {"file_path", &UnifiedMetadata::file_path},
      {"scene_row", &UnifiedMetadata::scene_row},
      {"cloud_percent", &UnifiedMetadata::cloud_percent},
      {"data_link", &UnifiedMetadata::data_link},
      {"data_provider", &UnifiedMetadata::data_provider},
      {"data_owner", &UnifiedMetadata::data_owner},
  };
  return kFields;
}

const UnifiedField* find_unified_field(const std::string& name) {
  for (const auto& f : unified_fields()) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

const FieldMapping& mapping_for(const std::string& dialect) {
  std::lock_guard lock(registry_mutex());
  auto it = mapping_registry().find(dialect);
  if (it == mapping_registry().end()) {
    throw DomainError("unsupported metadata dialect: " + dialect);
  }
  return it->second;
}

void register_mapping(FieldMapping mapping) {
  check_mapping(mapping);
  std::lock_guard lock(registry_mutex());
  mapping_registry()[mapping.dialect] = std::move(mapping);
}

std::vector<std::string> mapped_intersection(const std::string& dialect_a,
                                             const std::string& dialect_b) {
  std::set<std::string> a;
  for (const auto& [src, dst] : mapping_for(dialect_a).pairs) a.insert(dst);
  std::vector<std::string> out;
  for (const auto& [src, dst] : mapping_for(dialect_b).pairs) {
    if (a.count(dst)) out.push_back(dst);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string iso8601_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

UnifiedMetadata normalize(const SourceMetadataDocument& doc,
                          std::optional<std::string> now) {
  const FieldMapping& mapping = mapping_for(doc.dialect);
  UnifiedMetadata m;
  std::vector<std::string> bad;
  for (const auto& [src_key, field_name] : mapping.pairs) {
    const std::string* value = doc.find(src_key);
    if (!value) continue;
    const UnifiedField* field = find_unified_field(field_name);
    try {
      if (std::holds_alternative<TextMember>(field->member)) {
        m.*std::get<TextMember>(field->member) = *value;
      } else if (std::holds_alternative<RealMember>(field->member)) {
        m.*std::get<RealMember>(field->member) = parse_real(*value, field_name);
      } else {
        m.*std::get<IntMember>(field->member) = parse_int(*value, field_name);
      }
    } catch (const FormatError&) {
      bad.push_back(field_name);
    }
  }
  if (!bad.empty()) {
    std::string msg = "unparseable field values:";
    for (const auto& f : bad) msg += " " + f;
    throw NormalizeError(msg, std::move(bad));
  }

  std::vector<std::string> missing;
  for (const auto& name : required_fields()) {
    const UnifiedField* field = find_unified_field(name);
    bool present = false;
    if (std::holds_alternative<TextMember>(field->member)) {
      present = (m.*std::get<TextMember>(field->member)).has_value();
    } else if (std::holds_alternative<RealMember>(field->member)) {
      present = (m.*std::get<RealMember>(field->member)).has_value();
    } else {
      present = (m.*std::get<IntMember>(field->member)).has_value();
    }
    if (!present) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string msg = "missing required fields:";
    for (const auto& f : missing) msg += " " + f;
    throw NormalizeError(msg, std::move(missing));
  }

  m.creation = now ? *now : iso8601_now();
  m.last_update = m.creation;
  return m;
}

std::vector<Violation> validate(const UnifiedMetadata& m) {
  std::vector<Violation> out;
  auto check_lat = [&](const char* name, const std::optional<double>& v) {
    if (v && (*v < -90.0 || *v > 90.0)) {
      out.push_back({name, "latitude must be in [-90, 90]"});
    }
  };
  auto check_lon = [&](const char* name, const std::optional<double>& v) {
    if (v && (*v < -180.0 || *v > 180.0)) {
      out.push_back({name, "longitude must be in [-180, 180]"});
    }
  };
  auto check_time = [&](const char* name, const std::optional<std::string>& v) {
    if (v && !well_formed_timestamp(*v)) {
      out.push_back({name, "not an ISO-8601 UTC timestamp"});
    }
  };

  if (!m.satellite_id || m.satellite_id->empty()) {
    out.push_back({"satellite_id", "must be present and non-empty"});
  }
  if (!m.sensor_id || m.sensor_id->empty()) {
    out.push_back({"sensor_id", "must be present and non-empty"});
  }
  if (m.cloud_percent && (*m.cloud_percent < 0.0 || *m.cloud_percent > 100.0)) {
    out.push_back({"cloud_percent", "must be in [0, 100]"});
  }
  if (m.spatial_resolution && *m.spatial_resolution <= 0.0) {
    out.push_back({"spatial_resolution", "must be positive"});
  }
  if (m.level && *m.level < 0) {
    out.push_back({"level", "must be non-negative"});
  }
  check_lat("center_lat", m.center_lat);
  check_lon("center_lon", m.center_lon);
  check_lat("top_left_lat", m.top_left_lat);
  check_lon("top_left_lon", m.top_left_lon);
  check_lat("top_right_lat", m.top_right_lat);
  check_lon("top_right_lon", m.top_right_lon);
  check_lat("bottom_right_lat", m.bottom_right_lat);
  check_lon("bottom_right_lon", m.bottom_right_lon);
  check_lat("bottom_left_lat", m.bottom_left_lat);
  check_lon("bottom_left_lon", m.bottom_left_lon);
  check_time("creation", m.creation);
  check_time("last_update", m.last_update);
  check_time("receive_time", m.receive_time);
  check_time("time_begin", m.time_begin);
  check_time("time_end", m.time_end);
  if (m.time_begin && m.time_end && *m.time_begin > *m.time_end) {
    out.push_back({"time_begin", "time_begin must not exceed time_end"});
  }
  if (m.creation && m.last_update && *m.creation > *m.last_update) {
    out.push_back({"creation", "creation must not exceed last_update"});
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> to_row(const UnifiedMetadata& m) {
  std::vector<std::pair<std::string, std::string>> cells;
  for (const auto& f : unified_fields()) {
    if (std::holds_alternative<TextMember>(f.member)) {
      const auto& v = m.*std::get<TextMember>(f.member);
      if (v) cells.emplace_back(f.name, *v);
    } else if (std::holds_alternative<RealMember>(f.member)) {
      const auto& v = m.*std::get<RealMember>(f.member);
      if (v) cells.emplace_back(f.name, format_real(*v));
    } else {
      const auto& v = m.*std::get<IntMember>(f.member);
      if (v) cells.emplace_back(f.name, std::to_string(*v));
    }
  }
  return cells;
}

UnifiedMetadata from_row(
    const std::vector<std::pair<std::string, std::string>>& cells) {
  UnifiedMetadata m;
  for (const auto& [qualifier, value] : cells) {
    if (qualifier.rfind("x_", 0) == 0) continue;  // reserved system qualifiers
    const UnifiedField* f = find_unified_field(qualifier);
    if (!f) throw FormatError("unknown metadata qualifier '" + qualifier + "'");
    if (std::holds_alternative<TextMember>(f->member)) {
      m.*std::get<TextMember>(f->member) = value;
    } else if (std::holds_alternative<RealMember>(f->member)) {
      m.*std::get<RealMember>(f->member) = parse_real(value, qualifier);
    } else {
      m.*std::get<IntMember>(f->member) = parse_int(value, qualifier);
    }
  }
  return m;
}

std::string to_json(const UnifiedMetadata& m) {
  nlohmann::ordered_json j;
  for (const auto& f : unified_fields()) {
    if (std::holds_alternative<TextMember>(f.member)) {
      const auto& v = m.*std::get<TextMember>(f.member);
      if (v) j[f.name] = *v;
    } else if (std::holds_alternative<RealMember>(f.member)) {
      const auto& v = m.*std::get<RealMember>(f.member);
      if (v) j[f.name] = *v;
    } else {
      const auto& v = m.*std::get<IntMember>(f.member);
      if (v) j[f.name] = *v;
    }
  }
  return j.dump(2);
}

}  // namespace rastile
