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

#include "ecoprof/live.hpp"

#include <fstream>

#include "ecoprof/error.hpp"
#include "ecoprof/sampling.hpp"
#include "text.hpp"

namespace ecoprof {
namespace {

std::optional<double> read_number(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string text;
    if (!in || !std::getline(in, text)) {
        return std::nullopt;
    }
    return detail::parse_double(detail::trim(text));
}

std::optional<std::string> read_line(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string text;
    if (!in || !std::getline(in, text)) {
        return std::nullopt;
    }
    return std::string(detail::trim(text));
}

}  // namespace

RaplProbe::RaplProbe(std::vector<Counter> counters, std::optional<std::filesystem::path> cpu_temp)
    : counters_(std::move(counters)), cpu_temp_(std::move(cpu_temp)) {}

std::unique_ptr<RaplProbe> RaplProbe::detect(const std::filesystem::path& powercap_root,
                                             const std::filesystem::path& thermal_root) {
    std::error_code ec;
    std::vector<Counter> counters;
    for (const auto& entry : std::filesystem::directory_iterator(powercap_root, ec)) {
        // Top-level package domains only (intel-rapl:0, not intel-rapl:0:0)
        // so sub-domains are not double counted.
        const std::string name = entry.path().filename().string();
        if (!name.starts_with("intel-rapl:") || name.find(':', 11) != std::string::npos) {
            continue;
        }
        const auto energy = entry.path() / "energy_uj";
        const auto value = read_number(energy);
        if (!value) {
            continue;
        }
        Counter c;
        c.energy_uj = energy;
        c.max_range_uj = read_number(entry.path() / "max_energy_range_uj").value_or(0.0);
        c.last_uj = *value;
        counters.push_back(std::move(c));
    }
    if (counters.empty()) {
        return nullptr;
    }
    std::optional<std::filesystem::path> cpu_temp;
    for (const auto& entry : std::filesystem::directory_iterator(thermal_root, ec)) {
        if (read_line(entry.path() / "type") == std::optional<std::string>("x86_pkg_temp")) {
            cpu_temp = entry.path() / "temp";
            break;
        }
    }
    return std::unique_ptr<RaplProbe>(new RaplProbe(std::move(counters), std::move(cpu_temp)));
}

ProbeReading RaplProbe::read() {
    const auto now = std::chrono::steady_clock::now();
    double delta_uj = 0.0;
    for (auto& c : counters_) {
        const auto value = read_number(c.energy_uj);
        if (!value) {
            continue;
        }
        double d = *value - c.last_uj;
        if (d < 0.0 && c.max_range_uj > 0.0) {
            d += c.max_range_uj;  // counter wrapped
        }
        delta_uj += std::max(d, 0.0);
        c.last_uj = *value;
    }
    ProbeReading reading;
    if (last_time_) {
        const double dt = std::chrono::duration<double>(now - *last_time_).count();
        if (dt > 0.0) {
            reading.power_w = delta_uj * 1e-6 / dt;
        }
    }
    last_time_ = now;
    if (cpu_temp_) {
        if (const auto milli_c = read_number(*cpu_temp_)) {
            const double c = *milli_c / 1000.0;
            if (c >= kMinSaneTemperatureC && c <= kMaxSaneTemperatureC) {
                reading.cpu_temp_c = c;
            }
        }
    }
    return reading;
}

std::unique_ptr<PowerProbe> detect_live_probe() { return RaplProbe::detect(); }

LiveCollector::LiveCollector(std::unique_ptr<PowerProbe> probe, std::optional<double> fixed_rate_hz)
    : probe_(std::move(probe)), fixed_rate_hz_(fixed_rate_hz) {
    if (!probe_) {
        throw Error(ErrorCode::kInvalidParameter, "live collection needs a probe");
    }
    if (fixed_rate_hz_ && !(*fixed_rate_hz_ > 0.0)) {
        throw Error(ErrorCode::kInvalidParameter, "sampling rate must be positive");
    }
    rate_hz_ = fixed_rate_hz_.value_or(kMaxAdaptiveRateHz);
}

LiveCollector::~LiveCollector() {
    if (worker_.joinable()) {
        worker_.request_stop();
        wake_.notify_all();
    }
}

void LiveCollector::start() {
    if (worker_.joinable()) {
        throw Error(ErrorCode::kInvalidParameter, "collector already started");
    }
    t0_ = std::chrono::steady_clock::now();
    probe_->read();  // primes counter-delta probes
    worker_ = std::jthread([this](std::stop_token token) { run(token); });
}

PowerTrace LiveCollector::stop() {
    if (worker_.joinable()) {
        worker_.request_stop();
        wake_.notify_all();
        worker_.join();
    }
    take_sample();  // closing sample so the trace spans the whole session
    std::lock_guard lock(mu_);
    return trace_;
}

PowerTrace LiveCollector::snapshot() const {
    std::lock_guard lock(mu_);
    return trace_;
}

double LiveCollector::current_rate_hz() const {
    std::lock_guard lock(mu_);
    return rate_hz_;
}

void LiveCollector::take_sample() {
    const ProbeReading reading = probe_->read();
    if (!reading.power_w) {
        return;
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::lock_guard lock(mu_);
    if (!trace_.empty() && !(t > trace_.end_s())) {
        return;
    }
    trace_.push_back(PowerSample{t, *reading.power_w, reading.gpu_temp_c, reading.cpu_temp_c});
    if (!fixed_rate_hz_ && trace_.size() % kAdaptWindow == 0) {
        PowerTrace window(TraceSource::kLive);
        for (std::size_t i = trace_.size() - kAdaptWindow; i < trace_.size(); ++i) {
            window.push_back(trace_.sample(i));
        }
        rate_hz_ = adaptive_rate(window);
    }
}

void LiveCollector::run(std::stop_token token) {
    auto next = std::chrono::steady_clock::now();
    while (!token.stop_requested()) {
        take_sample();
        const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / current_rate_hz()));
        next += period;
        std::unique_lock lock(mu_);
        wake_.wait_until(lock, token, next, [] { return false; });
    }
}

}  // namespace ecoprof
