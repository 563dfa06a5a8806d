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

#include "ecoprof/hardware.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

#include "ecoprof/error.hpp"
#include "ecoprof/kernels.hpp"
#include "ecoprof/metrics.hpp"
#include "text.hpp"

namespace ecoprof {
namespace {

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct Run {
    std::size_t first;
    std::size_t last;
};

template <typename IsHot>
std::vector<Run> maximal_runs(std::size_t n, IsHot is_hot) {
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < n) {
        if (!is_hot(i)) {
            ++i;
            continue;
        }
        const std::size_t first = i;
        while (i + 1 < n && is_hot(i + 1)) {
            ++i;
        }
        runs.push_back(Run{first, i});
        ++i;
    }
    return runs;
}

}  // namespace

std::string_view to_string(DeviceClass device_class) {
    switch (device_class) {
        case DeviceClass::kCpuOnly: return "CPU_ONLY";
        case DeviceClass::kDesktopGpu: return "DESKTOP_GPU";
        case DeviceClass::kDatacenterGpu: return "DATACENTER_GPU";
    }
    return "CPU_ONLY";
}

DeviceClass parse_device_class(std::string_view text) {
    const std::string lower = to_lower(detail::trim(text));
    for (const auto c : {DeviceClass::kCpuOnly, DeviceClass::kDesktopGpu, DeviceClass::kDatacenterGpu}) {
        if (lower == to_lower(to_string(c))) {
            return c;
        }
    }
    throw Error(ErrorCode::kInvalidParameter,
                "unknown device class '" + std::string(text) + "' (expected CPU_ONLY, DESKTOP_GPU or DATACENTER_GPU)");
}

std::string_view to_string(ThermalDomain domain) { return domain == ThermalDomain::kGpu ? "gpu" : "cpu"; }

const std::vector<ClassificationRule>& DeviceRules::builtin() {
    static const std::vector<ClassificationRule> rules{
        {"A100", DeviceClass::kDatacenterGpu}, {"H100", DeviceClass::kDatacenterGpu},
        {"T4", DeviceClass::kDatacenterGpu},   {"V100", DeviceClass::kDatacenterGpu},
        {"RTX", DeviceClass::kDesktopGpu},     {"GTX", DeviceClass::kDesktopGpu},
    };
    return rules;
}

DeviceRules::DeviceRules() : rules_(builtin()) {}

DeviceRules::DeviceRules(std::vector<ClassificationRule> rules) : rules_(std::move(rules)) {}

void DeviceRules::load_overrides(std::istream& in) {
    std::vector<ClassificationRule> loaded;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = detail::trim(view);
        if (view.empty()) {
            continue;
        }
        const auto eq = view.find('=');
        const std::string_view pattern = eq == std::string_view::npos ? "" : detail::trim(view.substr(0, eq));
        if (pattern.empty()) {
            throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected pattern=CLASS");
        }
        try {
            loaded.push_back({std::string(pattern), parse_device_class(view.substr(eq + 1))});
        } catch (const Error& e) {
            throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    loaded.insert(loaded.end(), rules_.begin(), rules_.end());
    rules_ = std::move(loaded);
}

void DeviceRules::load_overrides(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open device rules " + path.string());
    }
    load_overrides(in);
}

DeviceClass DeviceRules::classify(std::string_view descriptor) const {
    const std::string haystack = to_lower(descriptor);
    for (const auto& rule : rules_) {
        if (!rule.pattern.empty() && haystack.find(to_lower(rule.pattern)) != std::string::npos) {
            return rule.device_class;
        }
    }
    return DeviceClass::kCpuOnly;
}

DeviceClass classify_device(std::string_view descriptor) { return DeviceRules().classify(descriptor); }

double pue_for(DeviceClass device_class) {
    switch (device_class) {
        case DeviceClass::kCpuOnly: return 1.1;
        case DeviceClass::kDesktopGpu: return 1.2;
        case DeviceClass::kDatacenterGpu: return 1.4;
    }
    return 1.1;
}

std::pair<double, double> overheads_for(DeviceClass device_class) {
    switch (device_class) {
        case DeviceClass::kCpuOnly: return {1.0, 1.0};
        case DeviceClass::kDesktopGpu: return {1.2, 1.0};
        case DeviceClass::kDatacenterGpu: return {1.4, 1.2};
    }
    return {1.0, 1.0};
}

HardwareProfile make_hardware_profile(std::string_view descriptor, const DeviceRules& rules) {
    HardwareProfile profile;
    profile.device_class = rules.classify(descriptor);
    profile.descriptor = std::string(descriptor);
    profile.pue = pue_for(profile.device_class);
    std::tie(profile.cooling_overhead, profile.infra_overhead) = overheads_for(profile.device_class);
    return profile;
}

ThermalFlagReport thermal_flags(const PowerTrace& trace, const HardwareProfile& profile, double cooling_fraction) {
    if (!(cooling_fraction >= 0.0)) {
        throw Error(ErrorCode::kInvalidParameter, "cooling adjustment fraction must be non-negative");
    }
    ThermalFlagReport report;
    const std::size_t n = trace.size();
    if (n == 0 || !trace.has_temperatures()) {
        return report;
    }
    const auto gpu_hot = [&](std::size_t i) {
        const auto& t = trace.gpu_temp(i);
        return t && *t > profile.gpu_thermal_limit_c;
    };
    const auto cpu_hot = [&](std::size_t i) {
        const auto& t = trace.cpu_temp(i);
        return t && *t > profile.cpu_thermal_limit_c;
    };

    const auto emit = [&](const std::vector<Run>& runs, ThermalDomain domain) {
        for (const Run& r : runs) {
            double peak = -1e300;
            for (std::size_t i = r.first; i <= r.last; ++i) {
                const auto& t = domain == ThermalDomain::kGpu ? trace.gpu_temp(i) : trace.cpu_temp(i);
                peak = std::max(peak, *t);
            }
            report.flagged_intervals.push_back(
                FlaggedInterval{trace.timestamps()[r.first], trace.timestamps()[r.last], peak, domain});
        }
    };
    emit(maximal_runs(n, gpu_hot), ThermalDomain::kGpu);
    emit(maximal_runs(n, cpu_hot), ThermalDomain::kCpu);

    if (report.flagged_intervals.empty() || n < 2) {
        return report;
    }
    std::vector<double> masked(trace.power().begin(), trace.power().end());
    for (std::size_t i = 0; i < n; ++i) {
        if (!gpu_hot(i) && !cpu_hot(i)) {
            masked[i] = 0.0;
        }
    }
    const double hot_kwh = EnergyQuantity::from_joules(kernels::trapezoid(trace.timestamps(), masked)).kilowatt_hours();
    report.cooling_energy_adjustment_kwh = cooling_fraction * hot_kwh;
    return report;
}

}  // namespace ecoprof
