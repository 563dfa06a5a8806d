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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ecoprof/trace.hpp"

namespace ecoprof {

namespace profile {

struct Constant {
    double watts = 0.0;
    bool operator==(const Constant&) const = default;
};

/// Linear from `start_w` at t = 0 to `end_w` at the end of the collection.
struct Ramp {
    double start_w = 0.0;
    double end_w = 0.0;
    bool operator==(const Ramp&) const = default;
};

/// mean + amplitude * sin(2 pi t / period); amplitude may not exceed mean.
struct Sine {
    double mean_w = 0.0;
    double amplitude_w = 0.0;
    double period_s = 1.0;
    bool operator==(const Sine&) const = default;
};

/// `burst_w` for `burst_ms` once every `period_ms`, `base_w` otherwise.
/// Without a seed each burst starts at the top of its period; with one,
/// each period draws its own start offset in [0, period_ms - burst_ms].
struct Bursty {
    double base_w = 0.0;
    double burst_w = 0.0;
    double burst_ms = 0.0;
    double period_ms = 1.0;
    bool operator==(const Bursty&) const = default;
};

}  // namespace profile

using SyntheticProfile = std::variant<profile::Constant, profile::Ramp, profile::Sine, profile::Bursty>;

struct ReplaySource {
    std::filesystem::path path;
    bool operator==(const ReplaySource&) const = default;
};

struct SamplerSpec {
    std::variant<SyntheticProfile, ReplaySource> kind = SyntheticProfile{profile::Constant{}};
    std::optional<std::uint64_t> seed;
    // Constant temperatures attached to every synthetic sample.
    std::optional<double> gpu_temp_c;
    std::optional<double> cpu_temp_c;

    static SamplerSpec synthetic(SyntheticProfile profile, std::optional<std::uint64_t> seed = std::nullopt);
    static SamplerSpec replay(std::filesystem::path path);

    /// Throws kInvalidParameter for negative wattages, amplitude > mean,
    /// non-positive periods or burst_ms >= period_ms.
    void validate() const;

    bool operator==(const SamplerSpec&) const = default;
};

/// Parses the command-line profile syntax:
///   constant:W  ramp:W0:W1  sine:MEAN:AMP:PERIOD_S
///   bursty:BASE_W:BURST_W:BURST_MS:PERIOD_MS  replay:PATH
SamplerSpec parse_sampler(std::string_view text);

/// Uniform collection: floor(duration_s * rate_hz) + 1 samples at t = i / rate.
/// Synthetic profiles are evaluated analytically; replay interpolates the
/// source file linearly and holds its end values outside its span.
PowerTrace collect(const SamplerSpec& sampler, double duration_s, double rate_hz);

inline constexpr double kMinAdaptiveRateHz = 1.0;
inline constexpr double kMaxAdaptiveRateHz = 5.0;
inline constexpr double kSteadyCv = 0.05;
inline constexpr double kBurstyCv = 0.25;

/// Population coefficient of variation of the window's power; 0 when the
/// mean power is 0.
double coefficient_of_variation(const PowerTrace& window);

/// Maps the window's coefficient of variation to a rate in {1, 2, 5} Hz:
/// 1 Hz at CV <= 0.05, 5 Hz at CV >= 0.25, linear in between and rounded
/// to the nearest allowed rate (ties go up).
double adaptive_rate(const PowerTrace& window);
double adaptive_rate_for_cv(double cv);

/// Sample-and-hold subsampling: for each instant start + k / rate, keeps the
/// latest source sample at or before it. Retained samples are copied
/// unchanged and the final sample is always kept. Throws kInvalidParameter
/// when rate exceeds the source density.
PowerTrace resample(const PowerTrace& trace, double rate_hz);

struct SensitivityRow {
    double rate_hz = 0.0;
    double estimated_co2_g = 0.0;
    double relative_error_pct = 0.0;  // signed, against the finest rate

    bool operator==(const SensitivityRow&) const = default;
};

/// For each rate (reported ascending): resample, integrate, convert to CO2.
/// Relative errors are against the finest requested rate.
std::vector<SensitivityRow> sensitivity_analysis(const PowerTrace& dense_trace, std::span<const double> rates,
                                                 double carbon_intensity, double pue);

}  // namespace ecoprof
