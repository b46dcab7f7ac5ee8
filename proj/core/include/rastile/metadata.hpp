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

#ifndef RASTILE_METADATA_HPP
#define RASTILE_METADATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rastile {

/// A parsed source metadata document: ordered key/value entries plus the
/// dialect they were parsed from.
struct SourceMetadataDocument {
  std::string dialect;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
};

/// Dialects shipped in this build.
inline constexpr char kDialectLandsatMtl[] = "landsat-mtl";
inline constexpr char kDialectZy3Kv[] = "zy3-kv";

bool dialect_supported(const std::string& dialect);

/// Parse metadata text in the given dialect.
///   landsat-mtl: `KEY = VALUE` lines; GROUP/END_GROUP/END wrappers skipped.
///   zy3-kv:      `Key-Name: value` lines.
/// Values are stripped of surrounding whitespace and quotes. Duplicate keys
/// and malformed lines raise ParseError with the line number.
SourceMetadataDocument parse_source(const std::string& text,
                                    const std::string& dialect);

/// The unified archival record. Absent optionals mark fields the source
/// dialect does not provide. Timestamps are UTC ISO-8601 text.
struct UnifiedMetadata {
  std::optional<std::string> creation;
  std::optional<std::string> last_update;
  std::optional<std::string> image_name;
  std::optional<std::string> tiles_codes;
  std::optional<int64_t> level;
  std::optional<std::string> satellite_id;
  std::optional<std::string> sensor_id;
  std::optional<std::string> receive_time;
  std::optional<std::string> reference_system_id;
  std::optional<std::string> time_begin;
  std::optional<std::string> time_end;
  std::optional<std::string> product_level;
  std::optional<std::string> product_format;
  std::optional<double> spatial_resolution;
  std::optional<std::string> processing_level;
  std::optional<double> center_lon;
  std::optional<double> center_lat;
  std::optional<double> top_left_lat;
  std::optional<double> top_left_lon;
  std::optional<double> top_right_lat;
  std::optional<double> top_right_lon;
  std::optional<double> bottom_right_lat;
  std::optional<double> bottom_right_lon;
  std::optional<double> bottom_left_lat;
  std::optional<double> bottom_left_lon;
  std::optional<std::string> file_path;
  std::optional<int64_t> scene_row;
  std::optional<double> cloud_percent;
  std::optional<std::string> data_link;
  std::optional<std::string> data_provider;
  std::optional<std::string> data_owner;

  bool operator==(const UnifiedMetadata&) const = default;
};

/// Reflection over the unified fields, used by the mapping, row and JSON
/// codecs so the schema is defined once.
using TextMember = std::optional<std::string> UnifiedMetadata::*;
using RealMember = std::optional<double> UnifiedMetadata::*;
using IntMember = std::optional<int64_t> UnifiedMetadata::*;

struct UnifiedField {
  const char* name;
  std::variant<TextMember, RealMember, IntMember> member;
  bool is_timestamp = false;
};

const std::vector<UnifiedField>& unified_fields();
const UnifiedField* find_unified_field(const std::string& name);

/// Source-key to unified-field-name mapping for one dialect.
struct FieldMapping {
  std::string dialect;
  std::vector<std::pair<std::string, std::string>> pairs;
};

/// The built-in mapping for a dialect.
const FieldMapping& mapping_for(const std::string& dialect);

/// Register a mapping for a new dialect (data-driven; no code changes).
/// The unified side of every pair must name a known field, each at most once.
void register_mapping(FieldMapping mapping);

/// Unified field names mapped by both dialects; records of the same scene
/// normalized from either dialect must agree on these.
std::vector<std::string> mapped_intersection(const std::string& dialect_a,
                                             const std::string& dialect_b);

/// Apply the dialect's mapping. `now` stamps creation/last_update; callers
/// that need determinism pass a fixed time. Missing required fields
/// (satellite_id, sensor_id, the four corners) raise NormalizeError.
UnifiedMetadata normalize(const SourceMetadataDocument& doc,
                          std::optional<std::string> now = std::nullopt);

/// Current UTC time as ISO-8601 text.
std::string iso8601_now();

struct Violation {
  std::string field;
  std::string constraint;
};

/// Check every UnifiedMetadata invariant; an empty result means the record is
/// valid. Violations are values, not errors.
std::vector<Violation> validate(const UnifiedMetadata& m);

/// Cells of the archival row, one qualifier per present field under the
/// metadata column family. Absent fields are omitted.
std::vector<std::pair<std::string, std::string>> to_row(const UnifiedMetadata& m);

/// Inverse of to_row. Qualifiers with the reserved "x_" prefix are skipped;
/// any other unknown qualifier raises FormatError.
UnifiedMetadata from_row(
    const std::vector<std::pair<std::string, std::string>>& cells);

/// JSON export with the unified snake_case field names; absent fields omitted.
std::string to_json(const UnifiedMetadata& m);

/// Column family of metadata rows.
inline constexpr char kMetadataFamily[] = "m";

}  // namespace rastile

#endif  // RASTILE_METADATA_HPP
