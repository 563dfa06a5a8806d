// Copyright 2026 the ecoprof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecoprof {

inline constexpr double kMinWaterIntensity = 1.2;  // L/kWh
inline constexpr double kMaxWaterIntensity = 4.8;  // L/kWh
inline constexpr double kMaxCarbonIntensity = 1.5;  // kg CO2/kWh
inline constexpr std::string_view kGlobalRegionId = "GLOBAL";
inline constexpr std::string_view kRegionOverrideEnv = "ECO_REGION";

struct RegionProfile {
    std::string region_id;
    std::string display_name;
    double water_intensity = 0.0;   // L/kWh
    double carbon_intensity = 0.0;  // kg CO2/kWh
    std::string provenance;

    bool operator==(const RegionProfile&) const = default;
};

/// Inputs for region detection, gathered once by the caller.
struct DetectionSignals {
    std::optional<std::string> locale;
    std::optional<std::string> timezone;
    std::map<std::string, std::string> cloud_env;
    std::optional<std::string> explicit_override;

    /// Reads ECO_REGION, LC_ALL/LC_MESSAGES/LANG, TZ (falling back to
    /// /etc/timezone and the /etc/localtime link) and the cloud region
    /// variables listed in `cloud_region_variables()`.
    static DetectionSignals from_environment();
};

/// Provider variables inspected, in precedence order.
std::span<const std::string_view> cloud_region_variables();

inline constexpr std::string_view kRegionCsvHeader =
    "region_id,display_name,water_intensity_l_per_kwh,carbon_intensity_kg_per_kwh,provenance";

/// Immutable regional coefficient table, sorted by region_id.
class RegionDatabase {
public:
    /// Validates ranges: water intensity in [1.2, 4.8], carbon intensity in
    /// (0, 1.5], unique ids, non-empty provenance.
    explicit RegionDatabase(std::vector<RegionProfile> regions);

    /// The table compiled into the library from data/regions.csv.
    static const RegionDatabase& shipped();
    static RegionDatabase from_csv(std::istream& in);
    static RegionDatabase from_csv(const std::filesystem::path& path);

    /// Case-insensitive. Throws kUnknownRegion listing the available ids.
    const RegionProfile& lookup(std::string_view region_id) const;
    const RegionProfile* find(std::string_view region_id) const;
    std::span<const RegionProfile> list() const { return regions_; }

    /// Precedence: explicit override > cloud region variable > timezone >
    /// locale country > GLOBAL. Values that do not resolve to a region in
    /// this table fall through to the next signal, so the result always
    /// resolves with `lookup`.
    std::string detect(const DetectionSignals& signals) const;

private:
    std::vector<RegionProfile> regions_;
};

const RegionProfile& lookup(std::string_view region_id);
std::vector<RegionProfile> list_regions();
std::string detect_region(const DetectionSignals& signals);

void write_region_csv(std::ostream& out, std::span<const RegionProfile> regions);

}  // namespace ecoprof
