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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecoprof/trace.hpp"

namespace ecoprof {

enum class DeviceClass { kCpuOnly, kDesktopGpu, kDatacenterGpu };

std::string_view to_string(DeviceClass device_class);
/// Accepts the names printed by to_string (CPU_ONLY, ...), case-insensitive.
DeviceClass parse_device_class(std::string_view text);

inline constexpr double kGpuThermalLimitC = 80.0;
inline constexpr double kCpuThermalLimitC = 85.0;
/// Share of in-interval energy added as cooling overhead. A configuration
/// default; callers may pass their own.
inline constexpr double kDefaultCoolingAdjustment = 0.10;

struct HardwareProfile {
    DeviceClass device_class = DeviceClass::kCpuOnly;
    std::string descriptor;
    double pue = 1.1;
    double cooling_overhead = 1.0;
    double infra_overhead = 1.0;
    double gpu_thermal_limit_c = kGpuThermalLimitC;
    double cpu_thermal_limit_c = kCpuThermalLimitC;

    bool operator==(const HardwareProfile&) const = default;
};

struct ClassificationRule {
    std::string pattern;
    DeviceClass device_class;

    bool operator==(const ClassificationRule&) const = default;
};

/// Ordered substring rules; the first case-insensitive match wins and the
/// fallthrough is CPU_ONLY.
class DeviceRules {
public:
    DeviceRules();
    explicit DeviceRules(std::vector<ClassificationRule> rules);

    static const std::vector<ClassificationRule>& builtin();

    /// Reads `pattern=CLASS` lines ('#' starts a comment) and places them
    /// ahead of the current rules. Throws kParse naming the line.
    void load_overrides(std::istream& in);
    void load_overrides(const std::filesystem::path& path);

    DeviceClass classify(std::string_view descriptor) const;
    const std::vector<ClassificationRule>& rules() const { return rules_; }

private:
    std::vector<ClassificationRule> rules_;
};

DeviceClass classify_device(std::string_view descriptor);

double pue_for(DeviceClass device_class);

/// (cooling_overhead, infra_overhead).
std::pair<double, double> overheads_for(DeviceClass device_class);

HardwareProfile make_hardware_profile(std::string_view descriptor, const DeviceRules& rules = DeviceRules());

enum class ThermalDomain { kGpu, kCpu };

std::string_view to_string(ThermalDomain domain);

struct FlaggedInterval {
    double start_s = 0.0;
    double end_s = 0.0;
    double peak_temp_c = 0.0;
    ThermalDomain domain = ThermalDomain::kGpu;

    bool operator==(const FlaggedInterval&) const = default;
};

struct ThermalFlagReport {
    std::vector<FlaggedInterval> flagged_intervals;
    double cooling_energy_adjustment_kwh = 0.0;

    bool operator==(const ThermalFlagReport&) const = default;
};

/// Flags the maximal runs of consecutive samples whose GPU temperature
/// exceeds the GPU limit or whose CPU temperature exceeds the CPU limit.
/// Intervals are listed GPU first, then CPU, each in time order.
///
/// The adjustment is `cooling_fraction` times the trapezoidal energy of the
/// power signal masked to samples hot in either domain, so overlapping GPU
/// and CPU intervals are not counted twice.
ThermalFlagReport thermal_flags(const PowerTrace& trace, const HardwareProfile& profile,
                                double cooling_fraction = kDefaultCoolingAdjustment);

}  // namespace ecoprof
