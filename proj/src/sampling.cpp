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

#include "ecoprof/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ecoprof/error.hpp"
#include "ecoprof/kernels.hpp"
#include "ecoprof/metrics.hpp"
#include "text.hpp"

namespace ecoprof {
namespace {

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw Error(ErrorCode::kInvalidParameter, message);
    }
}

bool watts_ok(double w) { return std::isfinite(w) && w >= 0.0; }

// floor(x) tolerant of x landing a few ulps below an integer.
std::size_t floor_count(double x) { return static_cast<std::size_t>(std::floor(x * (1.0 + 1e-12))); }

// Evaluates a synthetic profile at arbitrary instants of one collection.
class SyntheticSignal {
public:
    SyntheticSignal(const SyntheticProfile& profile, std::optional<std::uint64_t> seed, double duration_s)
        : profile_(profile), duration_s_(duration_s) {
        if (const auto* bursty = std::get_if<profile::Bursty>(&profile_); bursty && seed) {
            const auto periods = floor_count(duration_s * 1000.0 / bursty->period_ms) + 1;
            const double slack_ms = bursty->period_ms - bursty->burst_ms;
            std::mt19937_64 rng(*seed);
            offsets_ms_.reserve(periods);
            for (std::size_t k = 0; k < periods; ++k) {
                // 53 random bits -> [0, 1), independent of the library's
                // distribution implementations.
                const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                offsets_ms_.push_back(unit * slack_ms);
            }
        }
    }

    double operator()(double t) const {
        return std::visit([&](const auto& p) { return evaluate(p, t); }, profile_);
    }

private:
    double evaluate(const profile::Constant& p, double) const { return p.watts; }

    double evaluate(const profile::Ramp& p, double t) const {
        const double frac = std::clamp(t / duration_s_, 0.0, 1.0);
        return p.start_w * (1.0 - frac) + p.end_w * frac;
    }

    double evaluate(const profile::Sine& p, double t) const {
        const double w = p.mean_w + p.amplitude_w * std::sin(2.0 * std::numbers::pi * t / p.period_s);
        return std::max(w, 0.0);
    }

    double evaluate(const profile::Bursty& p, double t) const {
        const double t_ms = t * 1000.0;
        const auto k = static_cast<std::size_t>(std::floor(t_ms / p.period_ms));
        const double into_period = t_ms - static_cast<double>(k) * p.period_ms;
        const double offset = k < offsets_ms_.size() ? offsets_ms_[k] : 0.0;
        const bool in_burst = into_period >= offset && into_period < offset + p.burst_ms;
        return in_burst ? p.burst_w : p.base_w;
    }

    SyntheticProfile profile_;
    double duration_s_;
    std::vector<double> offsets_ms_;
};

std::optional<double> lerp_optional(const std::optional<double>& a, const std::optional<double>& b, double wa,
                                    double wb) {
    if (a && b) {
        return *a * wa + *b * wb;
    }
    return std::nullopt;
}

PowerSample interpolate(const PowerTrace& source, double t) {
    const auto ts = source.timestamps();
    if (t <= ts.front()) {
        auto s = source.sample(0);
        s.timestamp_s = t;
        return s;
    }
    if (t >= ts.back()) {
        auto s = source.sample(source.size() - 1);
        s.timestamp_s = t;
        return s;
    }
    const auto hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
    const std::size_t lo = hi - 1;
    const double span = ts[hi] - ts[lo];
    const double w_lo = (ts[hi] - t) / span;
    const double w_hi = (t - ts[lo]) / span;
    PowerSample s;
    s.timestamp_s = t;
    // Weighted form keeps integer-valued inputs exact.
    s.power_w = (source.power()[lo] * (ts[hi] - t) + source.power()[hi] * (t - ts[lo])) / span;
    s.gpu_temp_c = lerp_optional(source.gpu_temp(lo), source.gpu_temp(hi), w_lo, w_hi);
    s.cpu_temp_c = lerp_optional(source.cpu_temp(lo), source.cpu_temp(hi), w_lo, w_hi);
    return s;
}

double parse_number(std::string_view field, std::string_view context) {
    const auto v = detail::parse_double(field);
    if (!v) {
        throw Error(ErrorCode::kInvalidParameter,
                    "invalid number '" + std::string(field) + "' in profile '" + std::string(context) + "'");
    }
    return *v;
}

}  // namespace

SamplerSpec SamplerSpec::synthetic(SyntheticProfile profile, std::optional<std::uint64_t> seed) {
    SamplerSpec spec;
    spec.kind = std::move(profile);
    spec.seed = seed;
    return spec;
}

SamplerSpec SamplerSpec::replay(std::filesystem::path path) {
    SamplerSpec spec;
    spec.kind = ReplaySource{std::move(path)};
    return spec;
}

void SamplerSpec::validate() const {
    const auto check_temp = [](const std::optional<double>& t, const char* name) {
        require(!t || (*t >= kMinSaneTemperatureC && *t <= kMaxSaneTemperatureC),
                std::string(name) + " must lie in [-20, 150] C");
    };
    check_temp(gpu_temp_c, "GPU temperature");
    check_temp(cpu_temp_c, "CPU temperature");

    const auto* synthetic = std::get_if<SyntheticProfile>(&kind);
    if (synthetic == nullptr) {
        return;
    }
    std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, profile::Constant>) {
                require(watts_ok(p.watts), "constant wattage must be non-negative");
            } else if constexpr (std::is_same_v<P, profile::Ramp>) {
                require(watts_ok(p.start_w) && watts_ok(p.end_w), "ramp wattages must be non-negative");
            } else if constexpr (std::is_same_v<P, profile::Sine>) {
                require(watts_ok(p.mean_w) && watts_ok(p.amplitude_w), "sine wattages must be non-negative");
                require(p.amplitude_w <= p.mean_w, "sine amplitude may not exceed its mean");
                require(std::isfinite(p.period_s) && p.period_s > 0.0, "sine period must be positive");
            } else {
                require(watts_ok(p.base_w) && watts_ok(p.burst_w), "bursty wattages must be non-negative");
                require(std::isfinite(p.period_ms) && p.period_ms > 0.0, "burst period must be positive");
                require(std::isfinite(p.burst_ms) && p.burst_ms >= 0.0, "burst length must be non-negative");
                require(p.burst_ms < p.period_ms, "burst length must be shorter than its period");
            }
        },
        *synthetic);
}

SamplerSpec parse_sampler(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    if (kind == "replay") {
        require(colon != std::string_view::npos && colon + 1 < text.size(), "replay profile needs a path");
        return SamplerSpec::replay(std::filesystem::path(std::string(text.substr(colon + 1))));
    }
    std::vector<double> args;
    if (colon != std::string_view::npos) {
        for (const auto field : detail::split(text.substr(colon + 1), ':')) {
            args.push_back(parse_number(field, text));
        }
    }
    const auto arity = [&](std::size_t n, const char* usage) {
        require(args.size() == n, "profile '" + std::string(text) + "' should look like " + usage);
    };
    SamplerSpec spec;
    if (kind == "constant") {
        arity(1, "constant:W");
        spec = SamplerSpec::synthetic(profile::Constant{args[0]});
    } else if (kind == "ramp") {
        arity(2, "ramp:W0:W1");
        spec = SamplerSpec::synthetic(profile::Ramp{args[0], args[1]});
    } else if (kind == "sine") {
        arity(3, "sine:MEAN_W:AMPLITUDE_W:PERIOD_S");
        spec = SamplerSpec::synthetic(profile::Sine{args[0], args[1], args[2]});
    } else if (kind == "bursty") {
        arity(4, "bursty:BASE_W:BURST_W:BURST_MS:PERIOD_MS");
        spec = SamplerSpec::synthetic(profile::Bursty{args[0], args[1], args[2], args[3]});
    } else {
        throw Error(ErrorCode::kInvalidParameter,
                    "unknown profile '" + std::string(kind) + "' (expected constant, ramp, sine, bursty or replay)");
    }
    spec.validate();
    return spec;
}

PowerTrace collect(const SamplerSpec& sampler, double duration_s, double rate_hz) {
    require(std::isfinite(duration_s) && duration_s > 0.0, "duration must be positive");
    require(std::isfinite(rate_hz) && rate_hz > 0.0, "sampling rate must be positive");
    sampler.validate();

    const std::size_t n = floor_count(duration_s * rate_hz) + 1;

    if (const auto* replay = std::get_if<ReplaySource>(&sampler.kind)) {
        const PowerTrace source = read_trace_csv(replay->path);
        source.validate(1);
        PowerTrace trace(TraceSource::kReplay);
        trace.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            trace.push_back(interpolate(source, static_cast<double>(i) / rate_hz));
        }
        return trace;
    }

    const SyntheticSignal signal(std::get<SyntheticProfile>(sampler.kind), sampler.seed, duration_s);
    PowerTrace trace(TraceSource::kSynthetic);
    trace.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate_hz;
        trace.push_back(PowerSample{t, signal(t), sampler.gpu_temp_c, sampler.cpu_temp_c});
    }
    return trace;
}

double coefficient_of_variation(const PowerTrace& window) {
    if (window.empty()) {
        return 0.0;
    }
    const auto power = window.power();
    const double n = static_cast<double>(power.size());
    const double mean = kernels::sum(power) / n;
    if (!(mean > 0.0)) {
        return 0.0;
    }
    return std::sqrt(kernels::squared_deviation(power, mean) / n) / mean;
}

double adaptive_rate_for_cv(double cv) {
    if (!(cv > kSteadyCv)) {
        return 1.0;
    }
    if (cv >= kBurstyCv) {
        return 5.0;
    }
    // Linear 1..5 Hz over (0.05, 0.25), rounded to the nearest of {1, 2, 5}
    // with midpoints up. The midpoints 1.5 and 3.5 Hz fall at these CVs;
    // comparing CVs keeps the boundaries exact.
    constexpr double kTwoHzCv = 0.075;
    constexpr double kFiveHzCv = 0.175;
    if (cv < kTwoHzCv) {
        return 1.0;
    }
    if (cv < kFiveHzCv) {
        return 2.0;
    }
    return 5.0;
}

double adaptive_rate(const PowerTrace& window) { return adaptive_rate_for_cv(coefficient_of_variation(window)); }

PowerTrace resample(const PowerTrace& trace, double rate_hz) {
    trace.validate(2);
    require(std::isfinite(rate_hz) && rate_hz > 0.0, "sampling rate must be positive");
    const double density = trace.density_hz();
    require(rate_hz <= density * (1.0 + 1e-9),
            "requested rate " + detail::format_double(rate_hz) + " Hz exceeds the source density " +
                detail::format_double(density) + " Hz");

    const auto ts = trace.timestamps();
    const std::size_t n = ts.size();
    const double start = ts.front();
    const double slack = 1e-9 / rate_hz;
    const std::size_t steps = floor_count(trace.span_s() * rate_hz);

    PowerTrace out(trace.source());
    std::size_t j = 0;
    std::size_t last_pushed = n;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double target = start + static_cast<double>(k) / rate_hz;
        while (j + 1 < n && ts[j + 1] <= target + slack) {
            ++j;
        }
        if (j != last_pushed) {
            out.push_back(trace.sample(j));
            last_pushed = j;
        }
    }
    if (last_pushed != n - 1) {
        out.push_back(trace.sample(n - 1));
    }
    return out;
}

std::vector<SensitivityRow> sensitivity_analysis(const PowerTrace& dense_trace, std::span<const double> rates,
                                                 double carbon_intensity, double pue) {
    require(!rates.empty(), "at least one sampling rate is required");
    std::vector<double> sorted(rates.begin(), rates.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<SensitivityRow> rows;
    rows.reserve(sorted.size());
    for (const double rate : sorted) {
        const EnergyQuantity energy = integrate_energy(resample(dense_trace, rate));
        rows.push_back(SensitivityRow{rate, carbon_emissions(energy, carbon_intensity, pue).co2_g, 0.0});
    }
    const double reference = rows.back().estimated_co2_g;
    for (auto& row : rows) {
        if (reference > 0.0) {
            row.relative_error_pct = 100.0 * (row.estimated_co2_g - reference) / reference;
        } else if (row.estimated_co2_g > 0.0) {
            throw Error(ErrorCode::kInvalidParameter, "reference rate estimates zero emissions");
        }
    }
    return rows;
}

}  // namespace ecoprof
