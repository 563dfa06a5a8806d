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

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ecoprof/session.hpp"

namespace ecoprof {

enum class ReportFormat { kJson, kCsv };

/// "json" or "csv"; anything else throws kInvalidParameter.
ReportFormat parse_report_format(std::string_view text);

inline constexpr std::string_view kReportSchemaName = "ecoprof.session_report";

/// Flat one-row-per-report layout used by the CSV format.
inline constexpr std::string_view kReportCsvHeader =
    "label,sample_count,model_params,quantization_factor,device_class,descriptor,pue,cooling_overhead,"
    "infra_overhead,region_id,carbon_intensity,water_intensity,duration_s,energy_kwh,co2_kg,co2_g,water_l,"
    "energy_kwh_per_inference,co2_g_per_inference,water_l_per_inference,effective_params_m,ess_mp_per_g,"
    "thermal_adjustment_kwh,flagged_intervals,sampling_rate_hz,trace_samples,bottles,gallons";

inline constexpr std::string_view kFrontierCsvHeader = "label,co2_kg_per_inference,ess_mp_per_g";

inline constexpr std::string_view kSensitivityCsvHeader = "rate_hz,co2_g,relative_error_pct";

/// Deterministic bytes: fixed key order, shortest round-trip numbers,
/// trailing newline. JSON is pretty-printed with two-space indent.
std::string serialize_report(const SessionReport& report, ReportFormat format);

/// CSV header line followed by one row per report.
std::string reports_to_csv(std::span<const SessionReport> reports);

/// Inverse of the JSON serialization. Throws kParse on schema mismatch.
SessionReport parse_report_json(std::string_view text);

std::string frontier_to_csv(const FrontierDataset& dataset);
std::string sensitivity_to_csv(std::span<const SensitivityRow> rows);
nlohmann::ordered_json projection_to_json(const QuantizationProjection& projection);
QuantizationProjection projection_from_json(const nlohmann::ordered_json& json);

}  // namespace ecoprof
