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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecoprof {

inline constexpr double kMinSaneTemperatureC = -20.0;
inline constexpr double kMaxSaneTemperatureC = 150.0;

/// One telemetry reading. Timestamps are seconds from session start.
struct PowerSample {
    double timestamp_s = 0.0;
    double power_w = 0.0;
    std::optional<double> gpu_temp_c;
    std::optional<double> cpu_temp_c;

    bool operator==(const PowerSample&) const = default;
};

enum class TraceSource { kLive, kReplay, kSynthetic };

std::string_view to_string(TraceSource source);

/// Ordered power/temperature time series, stored column-wise so the
/// integration kernels can stream timestamps and power directly.
///
/// Construction does not enforce ordering; `validate()` does, and every
/// consumer that integrates calls it. This lets readers report precisely
/// where a file went wrong instead of failing on insert.
class PowerTrace {
public:
    PowerTrace() = default;
    explicit PowerTrace(TraceSource source) : source_(source) {}
    PowerTrace(TraceSource source, std::span<const PowerSample> samples);

    void push_back(const PowerSample& sample);
    void reserve(std::size_t n);

    std::size_t size() const noexcept { return timestamps_.size(); }
    bool empty() const noexcept { return timestamps_.empty(); }
    TraceSource source() const noexcept { return source_; }
    void set_source(TraceSource source) noexcept { source_ = source; }

    PowerSample sample(std::size_t i) const;
    std::vector<PowerSample> samples() const;

    std::span<const double> timestamps() const noexcept { return timestamps_; }
    std::span<const double> power() const noexcept { return power_; }
    const std::optional<double>& gpu_temp(std::size_t i) const { return gpu_temp_[i]; }
    const std::optional<double>& cpu_temp(std::size_t i) const { return cpu_temp_[i]; }

    double start_s() const { return timestamps_.front(); }
    double end_s() const { return timestamps_.back(); }
    double span_s() const { return end_s() - start_s(); }

    /// Samples per second over the trace span, (n - 1) / span.
    double density_hz() const;

    bool has_temperatures() const;

    /// Throws kInsufficientData below `min_samples`, kMalformedTrace on
    /// non-increasing timestamps, negative power or out-of-band temperatures.
    void validate(std::size_t min_samples = 2) const;

    /// Equality of sample content; the source tag is ignored.
    bool same_samples(const PowerTrace& other) const;

private:
    TraceSource source_ = TraceSource::kSynthetic;
    std::vector<double> timestamps_;
    std::vector<double> power_;
    std::vector<std::optional<double>> gpu_temp_;
    std::vector<std::optional<double>> cpu_temp_;
};

inline constexpr std::string_view kTraceCsvHeader = "timestamp_s,power_w,gpu_temp_c,cpu_temp_c";

/// Writes the trace CSV. Numbers use the shortest representation that
/// parses back to the same double, so write/read is lossless.
void write_trace_csv(std::ostream& out, const PowerTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace);

/// Parses the trace CSV. Errors name the 1-based line number. The result
/// is tagged as a replay and has been validated for ordering and ranges;
/// the minimum sample count is left to the consumer.
PowerTrace read_trace_csv(std::istream& in);
PowerTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace ecoprof
