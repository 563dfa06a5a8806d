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

#include "ecoprof/session.hpp"

#include <algorithm>
#include <cmath>

#include "ecoprof/error.hpp"

namespace ecoprof {
namespace {

constexpr double kPilotWindowS = 10.0;
constexpr double kPilotRateHz = 5.0;

}  // namespace

void SessionConfig::validate() const {
    if (sample_count < 1) {
        throw Error(ErrorCode::kInvalidParameter, "sample count must be at least 1");
    }
    if (model_params < 1) {
        throw Error(ErrorCode::kInvalidParameter, "model parameter count must be at least 1");
    }
    if (requested_rate_hz && !(std::isfinite(*requested_rate_hz) && *requested_rate_hz > 0.0)) {
        throw Error(ErrorCode::kInvalidParameter, "requested sampling rate must be positive");
    }
    quantization.validate();
}

PracticalWater practical_water_units(double liters) {
    if (!(std::isfinite(liters) && liters >= 0.0)) {
        throw Error(ErrorCode::kInvalidParameter, "water volume must be non-negative");
    }
    return PracticalWater{liters / kBottleLiters, liters / kLitersPerUsGallon};
}

ResolvedContext resolve_context(const SessionConfig& config, const RegionDatabase& regions, const DeviceRules& rules,
                                const DetectionSignals& signals) {
    ResolvedContext context;
    context.hardware = make_hardware_profile(config.device_descriptor, rules);
    context.region = config.region_override ? regions.lookup(*config.region_override)
                                            : regions.lookup(regions.detect(signals));
    return context;
}

SessionReport build_report(const PowerTrace& trace, const SessionConfig& config, const ResolvedContext& context) {
    config.validate();
    trace.validate(2);

    SessionReport report;
    report.label = config.label;
    report.sample_count = config.sample_count;
    report.model_params = config.model_params;
    report.hardware = context.hardware;
    report.region = context.region;

    const EnergyQuantity measured = integrate_energy(trace);
    report.thermal = thermal_flags(trace, context.hardware, context.cooling_fraction);
    const EnergyQuantity total_energy(measured.kilowatt_hours() + report.thermal.cooling_energy_adjustment_kwh);
    const EmissionEstimate emissions =
        carbon_emissions(total_energy, context.region.carbon_intensity, context.hardware.pue);

    // Water uses the monitored energy only; the thermal surcharge is
    // accounted on the energy/carbon side.
    const double duration_s = trace.span_s();
    const double duration_h = duration_s / 3600.0;
    const double avg_power_kw = measured.kilowatt_hours() / duration_h;
    const WaterEstimate water = water_footprint(avg_power_kw, duration_h, context.region,
                                                context.hardware.cooling_overhead, context.hardware.infra_overhead);

    report.totals = Totals{total_energy.kilowatt_hours(), emissions.co2_kg, emissions.co2_g, water.liters, duration_s};

    const double n = static_cast<double>(config.sample_count);
    report.per_inference = PerInference{report.totals.energy_kwh / n, report.totals.co2_g / n, report.totals.water_l / n};

    report.quantization_factor = quantization_factor(config.quantization);
    const EffectiveParams effective = effective_parameters(config.model_params, report.quantization_factor);
    report.effective_params_m = effective.millions;

    EmissionEstimate per_inference_emissions = emissions;
    per_inference_emissions.co2_kg = emissions.co2_kg / n;
    per_inference_emissions.co2_g = report.per_inference.co2_g;
    try {
        report.ess = ess(effective, per_inference_emissions);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::kUndefinedEss) {
            throw;
        }
        report.ess_error = e.what();
    }

    report.baseline_precision = config.quantization.coarsest_precision();
    for (const Precision p : kAllPrecisions) {
        if (bit_width(p) < bit_width(report.baseline_precision)) {
            report.projections.push_back(quantization_projection(EnergyQuantity(report.per_inference.energy_kwh),
                                                                 report.per_inference.water_l, p,
                                                                 report.baseline_precision));
        }
    }

    report.sampling = SamplingInfo{trace.density_hz(), static_cast<std::uint64_t>(trace.size())};
    report.practical_water = practical_water_units(report.totals.water_l);
    return report;
}

double choose_rate(const SamplerSpec& sampler, double duration_s) {
    const double window = std::min(duration_s, kPilotWindowS);
    if (window * kPilotRateHz < 1.0) {
        return kPilotRateHz;
    }
    return adaptive_rate(collect(sampler, window, kPilotRateHz));
}

PowerTrace collect_session_trace(const SessionConfig& config) {
    config.validate();
    const auto* sampler = std::get_if<SamplerSpec>(&config.sampler);
    if (sampler == nullptr) {
        throw Error(ErrorCode::kInvalidParameter, "live sessions are collected with LiveCollector");
    }
    if (!(std::isfinite(config.duration_s) && config.duration_s > 0.0)) {
        throw Error(ErrorCode::kInvalidParameter, "session duration must be positive");
    }
    double rate = config.requested_rate_hz ? *config.requested_rate_hz : choose_rate(*sampler, config.duration_s);
    rate = std::max(rate, 1.0 / config.duration_s);
    return collect(*sampler, config.duration_s, rate);
}

SessionReport run_session(const SessionConfig& config, const ResolvedContext& context) {
    return build_report(collect_session_trace(config), config, context);
}

SessionReport run_session(const SessionConfig& config) {
    return run_session(config, resolve_context(config, RegionDatabase::shipped(), DeviceRules(),
                                               DetectionSignals::from_environment()));
}

FrontierDataset frontier_dataset(std::span<const SessionReport> reports) {
    FrontierDataset dataset;
    for (const auto& r : reports) {
        if (!r.ess || !(r.totals.co2_kg > 0.0)) {
            ++dataset.excluded;
            continue;
        }
        dataset.points.push_back(
            FrontierPoint{r.label, r.totals.co2_kg / static_cast<double>(r.sample_count), r.ess->ess});
    }
    std::stable_sort(dataset.points.begin(), dataset.points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
        if (a.co2_kg_per_inference != b.co2_kg_per_inference) {
            return a.co2_kg_per_inference < b.co2_kg_per_inference;
        }
        return a.label < b.label;
    });
    return dataset;
}

}  // namespace ecoprof
