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

#ifndef RASTILE_TESTS_TEST_UTIL_HPP
#define RASTILE_TESTS_TEST_UTIL_HPP

#include <atomic>
#include <unistd.h>
#include <filesystem>
#include <random>
#include <string>

namespace rastile::testing {

/// A unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<uint64_t> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("rastile_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// Metadata fixtures: the same scene expressed in both dialects.

inline const char* kLandsatFixture = R"(GROUP = L1_METADATA_FILE
  GROUP = METADATA_FILE_INFO
    ORIGIN = "Karlsat Ground Segment"
    STATION_ID = "KGS"
  END_GROUP = METADATA_FILE_INFO
  GROUP = PRODUCT_METADATA
    SPACECRAFT_ID = "KARLSAT_8"
    SENSOR_ID = "OLI_TIRS"
    LANDSAT_SCENE_ID = "SCENE_ALPHA_0001"
    DATE_ACQUIRED = 2025-06-05
    WRS_ROW = 38
    CLOUD_COVER = 12.40
    OUTPUT_FORMAT = "GEOTIFF"
    DATA_TYPE = "L1TP"
    GRID_CELL_SIZE_REFLECTIVE = 30.00
    DATUM = "WGS84"
    CORNER_UL_LAT_PRODUCT = 47.50210
    CORNER_UL_LON_PRODUCT = 9.10010
    CORNER_UR_LAT_PRODUCT = 47.49850
    CORNER_UR_LON_PRODUCT = 11.20930
    CORNER_LL_LAT_PRODUCT = 45.90330
    CORNER_LL_LON_PRODUCT = 9.09260
    CORNER_LR_LAT_PRODUCT = 45.89995
    CORNER_LR_LON_PRODUCT = 11.19755
  END_GROUP = PRODUCT_METADATA
END_GROUP = L1_METADATA_FILE
END
)";

inline const char* kZy3Fixture = R"(Satellite-ID: KARLSAT_8
Sensor-ID: OLI_TIRS
ImageName: SCENE_ALPHA_0001
ReceiveTime: 2025-06-05
SceneRow: 38
CloudPercent: 12.40
ProductFormat: GEOTIFF
ProductLevel: L1TP
SpatialResolution: 30.00
ReferenceSystemID: WGS84
DataProvider: Karlsat Ground Segment
DataOwner: KGS
TimeBeginPosition: 2025-06-05T10:21:30Z
TimeEndPosition: 2025-06-05T10:21:45Z
ProcessingLevel: LEVEL1
CenterLongitude: 10.15
CenterLatitude: 46.70
TopLeftLatitude: 47.50210
TopLeftLongitude: 9.10010
TopRightLatitude: 47.49850
TopRightLongitude: 11.20930
BottomRightLatitude: 45.89995
BottomRightLongitude: 11.19755
BottomLeftLatitude: 45.90330
BottomLeftLongitude: 9.09260
)";

}  // namespace rastile::testing

#endif  // RASTILE_TESTS_TEST_UTIL_HPP
