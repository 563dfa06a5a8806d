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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "ecoprof/trace.hpp"

namespace ecoprof::testing {

inline bool rel_close(double actual, double expected, double tol) {
    if (expected == 0.0) {
        return std::fabs(actual) <= tol;
    }
    return std::fabs(actual - expected) <= tol * std::fabs(expected);
}

// Seeded generator; every property test names its seed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
    }
    bool coin() { return integer(0, 1) == 1; }

    // Strictly increasing timestamps from 0 with jittered gaps.
    PowerTrace random_trace(std::size_t n, double max_power_w = 400.0) {
        PowerTrace trace;
        double t = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            trace.push_back(PowerSample{t, uniform(0.0, max_power_w), std::nullopt, std::nullopt});
            t += uniform(0.05, 1.5);
        }
        return trace;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// Independent trapezoid in long double, kWh.
inline double oracle_energy_kwh(const PowerTrace& trace) {
    long double joules = 0.0L;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        const long double dt = static_cast<long double>(trace.timestamps()[i]) - trace.timestamps()[i - 1];
        joules += dt * (static_cast<long double>(trace.power()[i]) + trace.power()[i - 1]) / 2.0L;
    }
    return static_cast<double>(joules / 3.6e6L);
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("ecoprof-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace ecoprof::testing
