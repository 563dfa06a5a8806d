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

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ecoprof/trace.hpp"

namespace ecoprof {

struct ProbeReading {
    std::optional<double> power_w;
    std::optional<double> gpu_temp_c;
    std::optional<double> cpu_temp_c;
};

/// A hardware counter source. `read` is called from the collector thread
/// only; a reading without power (e.g. the first delta of an energy
/// counter) is skipped.
class PowerProbe {
public:
    virtual ~PowerProbe() = default;
    virtual std::string name() const = 0;
    virtual ProbeReading read() = 0;
};

/// Package power from the Linux powercap (RAPL) energy counters, CPU
/// temperature from the x86_pkg_temp thermal zone when present.
class RaplProbe final : public PowerProbe {
public:
    /// nullptr when no readable package energy counter exists.
    static std::unique_ptr<RaplProbe> detect(const std::filesystem::path& powercap_root = "/sys/class/powercap",
                                             const std::filesystem::path& thermal_root = "/sys/class/thermal");

    std::string name() const override { return "rapl"; }
    ProbeReading read() override;

private:
    struct Counter {
        std::filesystem::path energy_uj;
        double max_range_uj = 0.0;
        double last_uj = 0.0;
    };

    RaplProbe(std::vector<Counter> counters, std::optional<std::filesystem::path> cpu_temp);

    std::vector<Counter> counters_;
    std::optional<std::filesystem::path> cpu_temp_;
    std::optional<std::chrono::steady_clock::time_point> last_time_;
};

/// Finds a usable probe on this machine, or nullptr.
std::unique_ptr<PowerProbe> detect_live_probe();

/// Samples a probe on a background thread. One producer appends; `snapshot`
/// may be called concurrently; `stop` finalizes and returns the trace.
///
/// Without a fixed rate the collector re-evaluates `adaptive_rate` over the
/// trailing window after every `kAdaptWindow` samples, starting at 5 Hz.
class LiveCollector {
public:
    static constexpr std::size_t kAdaptWindow = 10;

    LiveCollector(std::unique_ptr<PowerProbe> probe, std::optional<double> fixed_rate_hz = std::nullopt);
    ~LiveCollector();

    LiveCollector(const LiveCollector&) = delete;
    LiveCollector& operator=(const LiveCollector&) = delete;

    void start();
    PowerTrace stop();

    PowerTrace snapshot() const;
    double current_rate_hz() const;

private:
    void run(std::stop_token token);
    void take_sample();

    std::unique_ptr<PowerProbe> probe_;
    std::optional<double> fixed_rate_hz_;
    std::chrono::steady_clock::time_point t0_;

    mutable std::mutex mu_;
    std::condition_variable_any wake_;
    PowerTrace trace_{TraceSource::kLive};
    double rate_hz_ = 5.0;
    std::jthread worker_;
};

}  // namespace ecoprof
