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

#include <doctest.h>

#include <sstream>

#include "ecoprof/error.hpp"
#include "ecoprof/hardware.hpp"
#include "support.hpp"

using namespace ecoprof;
using ecoprof::testing::Gen;
using ecoprof::testing::rel_close;

namespace {

// 1 Hz trace at constant power with per-second temperatures.
PowerTrace temps_trace(std::size_t seconds, double watts, auto gpu, auto cpu) {
    PowerTrace t;
    for (std::size_t i = 0; i <= seconds; ++i) {
        t.push_back({static_cast<double>(i), watts, gpu(i), cpu(i)});
    }
    return t;
}

const auto none = [](std::size_t) { return std::optional<double>{}; };

}  // namespace

TEST_SUITE("hardware") {

TEST_CASE("tier tables") {
    struct Row {
        DeviceClass c;
        double pue, cooling, infra;
    };
    for (const Row& r : {Row{DeviceClass::kCpuOnly, 1.1, 1.0, 1.0}, Row{DeviceClass::kDesktopGpu, 1.2, 1.2, 1.0},
                         Row{DeviceClass::kDatacenterGpu, 1.4, 1.4, 1.2}}) {
        CHECK(pue_for(r.c) == r.pue);
        CHECK(overheads_for(r.c).first == r.cooling);
        CHECK(overheads_for(r.c).second == r.infra);
    }
}

TEST_CASE("classification") {
    CHECK(classify_device("NVIDIA A100-SXM4-40GB") == DeviceClass::kDatacenterGpu);
    CHECK(classify_device("Tesla T4") == DeviceClass::kDatacenterGpu);
    CHECK(classify_device("h100 pcie") == DeviceClass::kDatacenterGpu);
    CHECK(classify_device("Tesla V100-SXM2") == DeviceClass::kDatacenterGpu);
    CHECK(classify_device("GeForce RTX 4090") == DeviceClass::kDesktopGpu);
    CHECK(classify_device("nvidia geforce gtx 1080") == DeviceClass::kDesktopGpu);
    CHECK(classify_device("Intel Xeon 8380") == DeviceClass::kCpuOnly);
    CHECK(classify_device("") == DeviceClass::kCpuOnly);
    // Both tokens present: datacenter rules come first.
    CHECK(classify_device("RTX box with an A100") == DeviceClass::kDatacenterGpu);
}

TEST_CASE("profiles follow the class") {
    const HardwareProfile h = make_hardware_profile("Tesla T4");
    CHECK(h.device_class == DeviceClass::kDatacenterGpu);
    CHECK(h.pue == 1.4);
    CHECK(h.cooling_overhead == 1.4);
    CHECK(h.infra_overhead == 1.2);
    CHECK(h.gpu_thermal_limit_c == 80.0);
    CHECK(h.cpu_thermal_limit_c == 85.0);
    CHECK(h.descriptor == "Tesla T4");
    CHECK(make_hardware_profile("").pue == 1.1);
}

TEST_CASE("override rules take precedence") {
    DeviceRules rules;
    std::istringstream in("# site overrides\nmi300=DATACENTER_GPU\n\n  Arc A770 = desktop_gpu  \n");
    rules.load_overrides(in);
    CHECK(rules.classify("AMD Instinct MI300X") == DeviceClass::kDatacenterGpu);
    CHECK(rules.classify("Intel Arc A770") == DeviceClass::kDesktopGpu);
    CHECK(rules.classify("Tesla T4") == DeviceClass::kDatacenterGpu);

    std::istringstream bad("=CPU_ONLY\n");
    CHECK_THROWS_AS(DeviceRules().load_overrides(bad), Error);
    std::istringstream bad_class("foo=QUANTUM\n");
    CHECK_THROWS_AS(DeviceRules().load_overrides(bad_class), Error);
}

TEST_CASE("device class names") {
    CHECK(to_string(DeviceClass::kDatacenterGpu) == "DATACENTER_GPU");
    CHECK(parse_device_class("cpu_only") == DeviceClass::kCpuOnly);
    CHECK_THROWS_AS(parse_device_class("tpu"), Error);
}

TEST_CASE("below threshold means no flags") {
    const HardwareProfile h = make_hardware_profile("A100");
    const auto r = thermal_flags(temps_trace(600, 100.0, [](std::size_t) { return std::optional<double>(70.0); },
                                             [](std::size_t) { return std::optional<double>(85.0); }),
                                 h);
    CHECK(r.flagged_intervals.empty());
    CHECK(r.cooling_energy_adjustment_kwh == 0.0);

    const auto no_temps = thermal_flags(temps_trace(600, 100.0, none, none), h);
    CHECK(no_temps.flagged_intervals.empty());
    CHECK(no_temps.cooling_energy_adjustment_kwh == 0.0);
}

TEST_CASE("hot for the whole hour") {
    const auto r = thermal_flags(
        temps_trace(3600, 100.0, [](std::size_t) { return std::optional<double>(85.0); }, none),
        make_hardware_profile("A100"));
    REQUIRE(r.flagged_intervals.size() == 1);
    CHECK(r.flagged_intervals[0] == FlaggedInterval{0.0, 3600.0, 85.0, ThermalDomain::kGpu});
    CHECK(rel_close(r.cooling_energy_adjustment_kwh, 0.01, 1e-12));
}

TEST_CASE("cpu crossing for one minute") {
    const auto cpu = [](std::size_t i) { return std::optional<double>(i >= 200 && i <= 260 ? 90.0 - (i % 3) : 60.0); };
    const auto r = thermal_flags(temps_trace(600, 100.0, none, cpu), make_hardware_profile("Xeon"));
    REQUIRE(r.flagged_intervals.size() == 1);
    const FlaggedInterval& f = r.flagged_intervals[0];
    CHECK(f.domain == ThermalDomain::kCpu);
    CHECK(f.start_s == 200.0);
    CHECK(f.end_s == 260.0);
    CHECK(f.end_s - f.start_s == 60.0);
    CHECK(f.peak_temp_c == 90.0);
    CHECK(r.cooling_energy_adjustment_kwh > 0.0);
}

TEST_CASE("intervals are the maximal hot runs") {
    Gen g(51);
    const HardwareProfile h = make_hardware_profile("A100");
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = g.integer(1, 200);
        std::vector<double> gpu(n + 1), cpu(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            gpu[i] = g.uniform(60.0, 95.0);
            cpu[i] = g.uniform(60.0, 95.0);
        }
        const PowerTrace t = temps_trace(n, 50.0, [&](std::size_t i) { return std::optional<double>(gpu[i]); },
                                         [&](std::size_t i) { return std::optional<double>(cpu[i]); });
        const auto r = thermal_flags(t, h);

        // Oracle: scan each domain for runs.
        std::vector<FlaggedInterval> expected;
        for (const auto& [temps, limit, domain] :
             {std::tuple{&gpu, 80.0, ThermalDomain::kGpu}, std::tuple{&cpu, 85.0, ThermalDomain::kCpu}}) {
            std::size_t i = 0;
            while (i <= n) {
                if ((*temps)[i] > limit) {
                    std::size_t j = i;
                    double peak = (*temps)[i];
                    while (j + 1 <= n && (*temps)[j + 1] > limit) peak = std::max(peak, (*temps)[++j]);
                    expected.push_back({static_cast<double>(i), static_cast<double>(j), peak, domain});
                    i = j + 1;
                } else {
                    ++i;
                }
            }
        }
        CHECK(r.flagged_intervals == expected);
        CHECK((r.cooling_energy_adjustment_kwh == 0.0) == expected.empty());
    }
}

TEST_CASE("adjustment is the cooling fraction of masked hot energy") {
    Gen g(52);
    const HardwareProfile h = make_hardware_profile("RTX 3090");
    for (int round = 0; round < 50; ++round) {
        PowerTrace t;
        std::vector<bool> hot;
        double s = 0.0;
        const std::size_t n = g.integer(2, 300);
        for (std::size_t i = 0; i < n; ++i) {
            const double gt = g.uniform(70, 90), ct = g.uniform(75, 95);
            hot.push_back(gt > 80.0 || ct > 85.0);
            t.push_back({s, g.uniform(1, 400), gt, ct});
            s += g.uniform(0.1, 2.0);
        }
        long double joules = 0.0L;
        for (std::size_t i = 1; i < n; ++i) {
            const long double a = hot[i - 1] ? t.power()[i - 1] : 0.0;
            const long double b = hot[i] ? t.power()[i] : 0.0;
            joules += (static_cast<long double>(t.timestamps()[i]) - t.timestamps()[i - 1]) * (a + b) / 2;
        }
        const double expected = static_cast<double>(0.10L * joules / 3.6e6L);
        CHECK(rel_close(thermal_flags(t, h).cooling_energy_adjustment_kwh, expected, 1e-12));
        CHECK(rel_close(thermal_flags(t, h, 0.25).cooling_energy_adjustment_kwh, 2.5 * expected, 1e-12));
    }
}

TEST_CASE("extending a hot interval never lowers the adjustment") {
    const HardwareProfile h = make_hardware_profile("A100");
    double last = 0.0;
    for (std::size_t end = 100; end <= 400; end += 10) {
        const auto r = thermal_flags(
            temps_trace(500, 120.0, [&](std::size_t i) { return std::optional<double>(i >= 100 && i <= end ? 88 : 60); },
                        none),
            h);
        CHECK(r.cooling_energy_adjustment_kwh >= last);
        last = r.cooling_energy_adjustment_kwh;
    }
}

}  // TEST_SUITE
