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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecoprof/region.hpp"
#include "ecoprof/trace.hpp"

// Environmental accounting formulas. Every function here is pure; units are
// fixed at kWh, kW, hours, grams/kilograms CO2 and liters.
namespace ecoprof {

enum class Precision { kFp32, kFp16, kInt8, kInt4 };

inline constexpr std::array<Precision, 4> kAllPrecisions{Precision::kFp32, Precision::kFp16,
                                                         Precision::kInt8, Precision::kInt4};

std::string_view to_string(Precision precision);
/// Accepts fp32/fp16/int8/int4 in any case; throws kInvalidParameter otherwise.
Precision parse_precision(std::string_view text);
/// Storage bits per parameter: 32, 16, 8, 4.
int bit_width(Precision precision);

/// Bit-width scaling used for effective parameters. INT4 extends the
/// halving pattern of the other three.
double quantization_factor(Precision precision);

class EnergyQuantity {
public:
    constexpr EnergyQuantity() = default;
    /// Throws kInvalidParameter for negative or non-finite input.
    explicit EnergyQuantity(double kilowatt_hours);

    static EnergyQuantity from_joules(double joules);

    constexpr double kilowatt_hours() const noexcept { return kwh_; }

    bool operator==(const EnergyQuantity&) const = default;

private:
    double kwh_ = 0.0;
};

struct EmissionEstimate {
    double co2_kg = 0.0;
    double co2_g = 0.0;
    double carbon_intensity = 0.0;  // kg CO2 / kWh
    double pue = 1.0;

    bool operator==(const EmissionEstimate&) const = default;
};

struct WaterEstimate {
    double liters = 0.0;
    double water_intensity = 0.0;  // L / kWh
    double cooling_overhead = 1.0;
    double infra_overhead = 1.0;

    bool operator==(const WaterEstimate&) const = default;
};

inline constexpr double kMinCoolingOverhead = 1.0;
inline constexpr double kMaxCoolingOverhead = 1.4;
inline constexpr double kMinInfraOverhead = 1.0;
inline constexpr double kMaxInfraOverhead = 1.2;

struct LayerSpec {
    std::uint64_t param_count = 0;
    Precision precision = Precision::kFp32;

    bool operator==(const LayerSpec&) const = default;
};

/// Per-layer parameter counts and precisions of a model.
struct QuantizationSpec {
    std::vector<LayerSpec> layers;

    static QuantizationSpec uniform(std::uint64_t params, Precision precision);

    std::uint64_t total_params() const;
    /// Lowest bit width among the layers.
    Precision coarsest_precision() const;
    /// Throws kInvalidSpec when empty or any layer has zero parameters.
    void validate() const;

    bool operator==(const QuantizationSpec&) const = default;
};

struct EffectiveParams {
    double millions = 0.0;
    double qf = 1.0;

    bool operator==(const EffectiveParams&) const = default;
};

struct SustainabilityScore {
    double ess = 0.0;  // million effective parameters per gram CO2

    bool operator==(const SustainabilityScore&) const = default;
};

/// Configured savings table. Retention values are reported metadata only.
struct PrecisionSavings {
    double power_savings_pct;       // share of FP32 energy saved, percent
    double accuracy_retention_pct;  // relative to FP32
    bool water_extrapolated;        // no measured water figure backs this row
};

PrecisionSavings savings_for(Precision precision);

struct QuantizationProjection {
    Precision precision = Precision::kFp32;
    Precision baseline = Precision::kFp32;
    EnergyQuantity estimated_energy;
    double energy_savings_pct = 0.0;
    double estimated_water_l = 0.0;
    double water_savings_pct = 0.0;
    double accuracy_retention_pct = 100.0;
    bool water_extrapolated = false;

    bool operator==(const QuantizationProjection&) const = default;
};

/// co2_kg = energy x carbon_intensity x pue.
EmissionEstimate carbon_emissions(EnergyQuantity energy, double carbon_intensity, double pue);

/// Trapezoidal integral of the trace's power over time, converted from
/// W*s to kWh. Validates the trace first.
EnergyQuantity integrate_energy(const PowerTrace& trace);

/// liters = avg_power_kw x duration_h x water_intensity x cooling x infra.
WaterEstimate water_footprint(double avg_power_kw, double duration_h, double water_intensity,
                              double cooling_overhead, double infra_overhead);
WaterEstimate water_footprint(double avg_power_kw, double duration_h, const RegionProfile& region,
                              double cooling_overhead, double infra_overhead);

/// Parameter-count weighted mean of the per-layer factors.
double quantization_factor(const QuantizationSpec& spec);

EffectiveParams effective_parameters(std::uint64_t total_params, double qf);

/// Throws kUndefinedEss when the emission is zero grams.
SustainabilityScore ess(const EffectiveParams& effective, const EmissionEstimate& emissions);

/// Projects energy and water at `target` from values measured at
/// `baseline`. Savings relative to a non-FP32 baseline are rescaled from
/// the FP32-relative table: remaining = (100 - s_target) / (100 - s_baseline).
/// Water scales with energy, so both savings percentages are equal.
/// Throws kInvalidParameter when target is finer than baseline; target ==
/// baseline is the identity projection.
QuantizationProjection quantization_projection(EnergyQuantity measured_energy, double baseline_water_l,
                                               Precision target, Precision baseline = Precision::kFp32);

}  // namespace ecoprof
