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

#include "ecoprof/trace.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ecoprof/error.hpp"
#include "ecoprof/kernels.hpp"
#include "text.hpp"

namespace ecoprof {
namespace {

bool temperature_in_band(const std::optional<double>& temp) {
    return !temp || (*temp >= kMinSaneTemperatureC && *temp <= kMaxSaneTemperatureC);
}

std::string describe_sample(std::size_t i) { return "sample " + std::to_string(i); }

}  // namespace

std::string_view to_string(TraceSource source) {
    switch (source) {
        case TraceSource::kLive: return "live";
        case TraceSource::kReplay: return "replay";
        case TraceSource::kSynthetic: return "synthetic";
    }
    return "unknown";
}

PowerTrace::PowerTrace(TraceSource source, std::span<const PowerSample> samples)
    : source_(source) {
    reserve(samples.size());
    for (const auto& s : samples) {
        push_back(s);
    }
}

void PowerTrace::push_back(const PowerSample& sample) {
    timestamps_.push_back(sample.timestamp_s);
    power_.push_back(sample.power_w);
    gpu_temp_.push_back(sample.gpu_temp_c);
    cpu_temp_.push_back(sample.cpu_temp_c);
}

void PowerTrace::reserve(std::size_t n) {
    timestamps_.reserve(n);
    power_.reserve(n);
    gpu_temp_.reserve(n);
    cpu_temp_.reserve(n);
}

PowerSample PowerTrace::sample(std::size_t i) const {
    return PowerSample{timestamps_[i], power_[i], gpu_temp_[i], cpu_temp_[i]};
}

std::vector<PowerSample> PowerTrace::samples() const {
    std::vector<PowerSample> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        out.push_back(sample(i));
    }
    return out;
}

double PowerTrace::density_hz() const {
    if (size() < 2 || !(span_s() > 0.0)) {
        return 0.0;
    }
    return static_cast<double>(size() - 1) / span_s();
}

bool PowerTrace::has_temperatures() const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (gpu_temp_[i] || cpu_temp_[i]) {
            return true;
        }
    }
    return false;
}

void PowerTrace::validate(std::size_t min_samples) const {
    if (size() < min_samples) {
        throw Error(ErrorCode::kInsufficientData,
                    "trace has " + std::to_string(size()) + " sample(s), at least " +
                        std::to_string(min_samples) + " required");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (!std::isfinite(timestamps_[i]) || !std::isfinite(power_[i])) {
            throw Error(ErrorCode::kMalformedTrace, describe_sample(i) + " is not finite");
        }
    }
    if (const std::size_t bad = kernels::first_non_increasing(timestamps_); bad < size()) {
        throw Error(ErrorCode::kMalformedTrace,
                    describe_sample(bad) + " timestamp " + detail::format_double(timestamps_[bad]) +
                        " does not follow " + detail::format_double(timestamps_[bad - 1]));
    }
    if (!timestamps_.empty() && timestamps_.front() < 0.0) {
        throw Error(ErrorCode::kMalformedTrace, "negative timestamp at sample 0");
    }
    if (const std::size_t bad = kernels::first_negative(power_); bad < size()) {
        throw Error(ErrorCode::kMalformedTrace,
                    describe_sample(bad) + " has negative power " + detail::format_double(power_[bad]));
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (!temperature_in_band(gpu_temp_[i]) || !temperature_in_band(cpu_temp_[i])) {
            throw Error(ErrorCode::kMalformedTrace, describe_sample(i) + " temperature outside [-20, 150] C");
        }
    }
}

bool PowerTrace::same_samples(const PowerTrace& other) const {
    return timestamps_ == other.timestamps_ && power_ == other.power_ &&
           gpu_temp_ == other.gpu_temp_ && cpu_temp_ == other.cpu_temp_;
}

void write_trace_csv(std::ostream& out, const PowerTrace& trace) {
    out << kTraceCsvHeader << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << detail::format_double(trace.timestamps()[i]) << ','
            << detail::format_double(trace.power()[i]) << ',';
        if (const auto& g = trace.gpu_temp(i)) {
            out << detail::format_double(*g);
        }
        out << ',';
        if (const auto& c = trace.cpu_temp(i)) {
            out << detail::format_double(*c);
        }
        out << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    }
    write_trace_csv(out, trace);
    if (!out) {
        throw Error(ErrorCode::kIo, "failed writing " + path.string());
    }
}

PowerTrace read_trace_csv(std::istream& in) {
    PowerTrace trace(TraceSource::kReplay);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    double previous_t = 0.0;

    const auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) {
            view.remove_prefix(3);
        }
        if (!view.empty() && view.back() == '\r') {
            view.remove_suffix(1);
        }
        if (!saw_header) {
            if (view != kTraceCsvHeader) {
                fail("expected header '" + std::string(kTraceCsvHeader) + "'");
            }
            saw_header = true;
            continue;
        }
        if (detail::trim(view).empty()) {
            continue;
        }
        const auto fields = detail::split(view, ',');
        if (fields.size() != 4) {
            fail("expected 4 fields, found " + std::to_string(fields.size()));
        }
        PowerSample sample;
        const auto t = detail::parse_double(fields[0]);
        const auto p = detail::parse_double(fields[1]);
        if (!t || !std::isfinite(*t) || *t < 0.0) {
            fail("invalid timestamp '" + std::string(fields[0]) + "'");
        }
        if (!p || !std::isfinite(*p) || *p < 0.0) {
            fail("invalid power '" + std::string(fields[1]) + "'");
        }
        sample.timestamp_s = *t;
        sample.power_w = *p;
        const auto read_temp = [&](std::string_view cell, const char* name) -> std::optional<double> {
            if (detail::trim(cell).empty()) {
                return std::nullopt;
            }
            const auto v = detail::parse_double(cell);
            if (!v || !(*v >= kMinSaneTemperatureC && *v <= kMaxSaneTemperatureC)) {
                fail(std::string("invalid ") + name + " '" + std::string(cell) + "'");
            }
            return v;
        };
        sample.gpu_temp_c = read_temp(fields[2], "gpu_temp_c");
        sample.cpu_temp_c = read_temp(fields[3], "cpu_temp_c");
        if (!trace.empty() && !(sample.timestamp_s > previous_t)) {
            fail("timestamp " + std::string(fields[0]) + " is not after the previous row");
        }
        previous_t = sample.timestamp_s;
        trace.push_back(sample);
    }
    if (!saw_header) {
        throw Error(ErrorCode::kParse, "line 1: empty trace file, header missing");
    }
    return trace;
}

PowerTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open trace file " + path.string());
    }
    return read_trace_csv(in);
}

}  // namespace ecoprof
