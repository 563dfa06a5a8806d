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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ecoprof/hardware.hpp"
#include "ecoprof/metrics.hpp"
#include "ecoprof/region.hpp"
#include "ecoprof/sampling.hpp"
#include "ecoprof/trace.hpp"

namespace ecoprof {

inline constexpr double kBottleLiters = 0.5;
inline constexpr double kLitersPerUsGallon = 3.785411784;

struct LiveSampling {
    bool operator==(const LiveSampling&) const = default;
};

struct SessionConfig {
    std::string label;
    std::variant<SamplerSpec, LiveSampling> sampler = SamplerSpec{};
    double duration_s = 0.0;
    std::uint64_t sample_count = 1;  // inferences performed during the session
    std::string device_descriptor;
    std::optional<std::string> region_override;
    std::uint64_t model_params = 1;
    QuantizationSpec quantization = QuantizationSpec::uniform(1, Precision::kFp32);
    std::optional<double> requested_rate_hz;

    /// Throws kInvalidParameter / kInvalidSpec.
    void validate() const;
};

struct Totals {
    double energy_kwh = 0.0;
    double co2_kg = 0.0;
    double co2_g = 0.0;
    double water_l = 0.0;
    double duration_s = 0.0;

    bool operator==(const Totals&) const = default;
};

struct PerInference {
    double energy_kwh = 0.0;
    double co2_g = 0.0;
    double water_l = 0.0;

    bool operator==(const PerInference&) const = default;
};

struct SamplingInfo {
    double rate_hz = 0.0;
    std::uint64_t sample_count_trace = 0;

    bool operator==(const SamplingInfo&) const = default;
};

struct PracticalWater {
    double bottles = 0.0;
    double gallons = 0.0;

    bool operator==(const PracticalWater&) const = default;
};

inline constexpr int kReportSchemaVersion = 1;

/// Environmental accounting for one profiled session. ESS is computed from
/// the per-inference grams; when those are zero `ess` is empty and
/// `ess_error` says why, while every other field is still filled in.
struct SessionReport {
    int schema_version = kReportSchemaVersion;
    std::string label;
    std::uint64_t sample_count = 1;
    std::uint64_t model_params = 1;
    double quantization_factor = 1.0;
    Precision baseline_precision = Precision::kFp32;
    Totals totals;
    PerInference per_inference;
    std::optional<SustainabilityScore> ess;
    std::optional<std::string> ess_error;
    double effective_params_m = 0.0;
    HardwareProfile hardware;
    RegionProfile region;
    ThermalFlagReport thermal;
    std::vector<QuantizationProjection> projections;
    SamplingInfo sampling;
    PracticalWater practical_water;

    bool operator==(const SessionReport&) const = default;
};

/// Everything a session needs besides the trace, with hardware and region
/// already resolved. Lets tests inject profiles that are not in the
/// shipped tables.
struct ResolvedContext {
    HardwareProfile hardware;
    RegionProfile region;
    double cooling_fraction = kDefaultCoolingAdjustment;
};

PracticalWater practical_water_units(double liters);

/// Resolves hardware via `rules` and the region via the override, or
/// environment detection when there is none. Unknown overrides throw
/// kUnknownRegion.
ResolvedContext resolve_context(const SessionConfig& config, const RegionDatabase& regions = RegionDatabase::shipped(),
                                const DeviceRules& rules = DeviceRules(),
                                const DetectionSignals& signals = DetectionSignals{});

/// Applies the accounting pipeline to an already collected trace:
/// integrate -> thermal adjustment -> carbon with tier PUE -> water from
/// average power over the session -> effective parameters and ESS on
/// per-inference grams -> projections for every coarser precision ->
/// per-inference division.
SessionReport build_report(const PowerTrace& trace, const SessionConfig& config, const ResolvedContext& context);

/// Rate used when the config does not request one: collects a 5 Hz pilot
/// window of up to 10 s and applies `adaptive_rate`.
double choose_rate(const SamplerSpec& sampler, double duration_s);

/// Collects the configured synthetic or replayed trace at the requested
/// rate, or the chosen one, raised if needed so at least two samples fall
/// inside the session.
PowerTrace collect_session_trace(const SessionConfig& config);

/// `collect_session_trace` followed by `build_report`. Live sessions go through `LiveCollector` and `build_report`.
SessionReport run_session(const SessionConfig& config, const ResolvedContext& context);
SessionReport run_session(const SessionConfig& config);

struct FrontierPoint {
    std::string label;
    double co2_kg_per_inference = 0.0;
    double ess = 0.0;

    bool operator==(const FrontierPoint&) const = default;
};

struct FrontierDataset {
    std::vector<FrontierPoint> points;
    std::size_t excluded = 0;  // reports without a defined ESS
};

/// One point per report with a defined ESS, ascending by CO2 per inference,
/// ties ordered by label.
FrontierDataset frontier_dataset(std::span<const SessionReport> reports);

}  // namespace ecoprof
