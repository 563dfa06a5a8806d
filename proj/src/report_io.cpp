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

#include "ecoprof/report_io.hpp"

#include <sstream>

#include "ecoprof/error.hpp"
#include "text.hpp"

namespace ecoprof {
namespace {

using Json = nlohmann::ordered_json;

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string num(double v) { return detail::format_double(v); }

Json to_json(const HardwareProfile& h) {
    return Json{{"device_class", to_string(h.device_class)},
                {"descriptor", h.descriptor},
                {"pue", h.pue},
                {"cooling_overhead", h.cooling_overhead},
                {"infra_overhead", h.infra_overhead},
                {"gpu_thermal_limit_c", h.gpu_thermal_limit_c},
                {"cpu_thermal_limit_c", h.cpu_thermal_limit_c}};
}

Json to_json(const RegionProfile& r) {
    return Json{{"region_id", r.region_id},
                {"display_name", r.display_name},
                {"water_intensity", r.water_intensity},
                {"carbon_intensity", r.carbon_intensity},
                {"provenance", r.provenance}};
}

Json to_json(const ThermalFlagReport& t) {
    Json intervals = Json::array();
    for (const auto& i : t.flagged_intervals) {
        intervals.push_back(Json{{"start_s", i.start_s},
                                 {"end_s", i.end_s},
                                 {"peak_temp_c", i.peak_temp_c},
                                 {"domain", to_string(i.domain)}});
    }
    return Json{{"flagged_intervals", std::move(intervals)},
                {"cooling_energy_adjustment_kwh", t.cooling_energy_adjustment_kwh}};
}

Json to_json(const SessionReport& r) {
    Json projections = Json::array();
    for (const auto& p : r.projections) {
        projections.push_back(projection_to_json(p));
    }
    return Json{
        {"schema", kReportSchemaName},
        {"schema_version", r.schema_version},
        {"label", r.label},
        {"sample_count", r.sample_count},
        {"model_params", r.model_params},
        {"quantization_factor", r.quantization_factor},
        {"baseline_precision", to_string(r.baseline_precision)},
        {"totals",
         Json{{"energy_kwh", r.totals.energy_kwh},
              {"co2_kg", r.totals.co2_kg},
              {"co2_g", r.totals.co2_g},
              {"water_l", r.totals.water_l},
              {"duration_s", r.totals.duration_s}}},
        {"per_inference",
         Json{{"energy_kwh", r.per_inference.energy_kwh},
              {"co2_g", r.per_inference.co2_g},
              {"water_l", r.per_inference.water_l}}},
        {"ess", r.ess ? Json(r.ess->ess) : Json(nullptr)},
        {"ess_error", r.ess_error ? Json(*r.ess_error) : Json(nullptr)},
        {"effective_params_m", r.effective_params_m},
        {"hardware", to_json(r.hardware)},
        {"region", to_json(r.region)},
        {"thermal", to_json(r.thermal)},
        {"projections", std::move(projections)},
        {"sampling", Json{{"rate_hz", r.sampling.rate_hz}, {"sample_count_trace", r.sampling.sample_count_trace}}},
        {"practical_water", Json{{"bottles", r.practical_water.bottles}, {"gallons", r.practical_water.gallons}}},
    };
}

ThermalDomain parse_domain(const std::string& text) {
    if (text == "gpu") {
        return ThermalDomain::kGpu;
    }
    if (text == "cpu") {
        return ThermalDomain::kCpu;
    }
    throw Error(ErrorCode::kParse, "unknown thermal domain '" + text + "'");
}

SessionReport from_json(const Json& j) {
    if (j.at("schema").get<std::string>() != kReportSchemaName) {
        throw Error(ErrorCode::kParse, "not a session report");
    }
    SessionReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
        throw Error(ErrorCode::kParse, "unsupported report schema version " + std::to_string(r.schema_version));
    }
    r.label = j.at("label").get<std::string>();
    r.sample_count = j.at("sample_count").get<std::uint64_t>();
    r.model_params = j.at("model_params").get<std::uint64_t>();
    r.quantization_factor = j.at("quantization_factor").get<double>();
    r.baseline_precision = parse_precision(j.at("baseline_precision").get<std::string>());

    const Json& totals = j.at("totals");
    r.totals = Totals{totals.at("energy_kwh").get<double>(), totals.at("co2_kg").get<double>(),
                      totals.at("co2_g").get<double>(), totals.at("water_l").get<double>(),
                      totals.at("duration_s").get<double>()};
    const Json& per = j.at("per_inference");
    r.per_inference =
        PerInference{per.at("energy_kwh").get<double>(), per.at("co2_g").get<double>(), per.at("water_l").get<double>()};
    if (!j.at("ess").is_null()) {
        r.ess = SustainabilityScore{j.at("ess").get<double>()};
    }
    if (!j.at("ess_error").is_null()) {
        r.ess_error = j.at("ess_error").get<std::string>();
    }
    r.effective_params_m = j.at("effective_params_m").get<double>();

    const Json& h = j.at("hardware");
    r.hardware.device_class = parse_device_class(h.at("device_class").get<std::string>());
    r.hardware.descriptor = h.at("descriptor").get<std::string>();
    r.hardware.pue = h.at("pue").get<double>();
    r.hardware.cooling_overhead = h.at("cooling_overhead").get<double>();
    r.hardware.infra_overhead = h.at("infra_overhead").get<double>();
    r.hardware.gpu_thermal_limit_c = h.at("gpu_thermal_limit_c").get<double>();
    r.hardware.cpu_thermal_limit_c = h.at("cpu_thermal_limit_c").get<double>();

    const Json& g = j.at("region");
    r.region = RegionProfile{g.at("region_id").get<std::string>(), g.at("display_name").get<std::string>(),
                             g.at("water_intensity").get<double>(), g.at("carbon_intensity").get<double>(),
                             g.at("provenance").get<std::string>()};

    const Json& t = j.at("thermal");
    for (const Json& i : t.at("flagged_intervals")) {
        r.thermal.flagged_intervals.push_back(FlaggedInterval{i.at("start_s").get<double>(), i.at("end_s").get<double>(),
                                                              i.at("peak_temp_c").get<double>(),
                                                              parse_domain(i.at("domain").get<std::string>())});
    }
    r.thermal.cooling_energy_adjustment_kwh = t.at("cooling_energy_adjustment_kwh").get<double>();

    for (const Json& p : j.at("projections")) {
        r.projections.push_back(projection_from_json(p));
    }
    const Json& s = j.at("sampling");
    r.sampling = SamplingInfo{s.at("rate_hz").get<double>(), s.at("sample_count_trace").get<std::uint64_t>()};
    const Json& w = j.at("practical_water");
    r.practical_water = PracticalWater{w.at("bottles").get<double>(), w.at("gallons").get<double>()};
    return r;
}

std::string csv_row(const SessionReport& r) {
    std::ostringstream out;
    out << csv_field(r.label) << ',' << r.sample_count << ',' << r.model_params << ',' << num(r.quantization_factor)
        << ',' << to_string(r.hardware.device_class) << ',' << csv_field(r.hardware.descriptor) << ','
        << num(r.hardware.pue) << ',' << num(r.hardware.cooling_overhead) << ',' << num(r.hardware.infra_overhead)
        << ',' << r.region.region_id << ',' << num(r.region.carbon_intensity) << ','
        << num(r.region.water_intensity) << ',' << num(r.totals.duration_s) << ',' << num(r.totals.energy_kwh) << ','
        << num(r.totals.co2_kg) << ',' << num(r.totals.co2_g) << ',' << num(r.totals.water_l) << ','
        << num(r.per_inference.energy_kwh) << ',' << num(r.per_inference.co2_g) << ','
        << num(r.per_inference.water_l) << ',' << num(r.effective_params_m) << ','
        << (r.ess ? num(r.ess->ess) : std::string()) << ',' << num(r.thermal.cooling_energy_adjustment_kwh) << ','
        << r.thermal.flagged_intervals.size() << ',' << num(r.sampling.rate_hz) << ','
        << r.sampling.sample_count_trace << ',' << num(r.practical_water.bottles) << ','
        << num(r.practical_water.gallons);
    return out.str();
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
    if (text == "json") {
        return ReportFormat::kJson;
    }
    if (text == "csv") {
        return ReportFormat::kCsv;
    }
    throw Error(ErrorCode::kInvalidParameter, "unknown format '" + std::string(text) + "' (expected json or csv)");
}

Json projection_to_json(const QuantizationProjection& p) {
    return Json{{"precision", to_string(p.precision)},
                {"baseline", to_string(p.baseline)},
                {"estimated_energy_kwh", p.estimated_energy.kilowatt_hours()},
                {"energy_savings_pct", p.energy_savings_pct},
                {"estimated_water_l", p.estimated_water_l},
                {"water_savings_pct", p.water_savings_pct},
                {"accuracy_retention_pct", p.accuracy_retention_pct},
                {"water_extrapolated", p.water_extrapolated}};
}

QuantizationProjection projection_from_json(const Json& j) {
    QuantizationProjection p;
    p.precision = parse_precision(j.at("precision").get<std::string>());
    p.baseline = parse_precision(j.at("baseline").get<std::string>());
    p.estimated_energy = EnergyQuantity(j.at("estimated_energy_kwh").get<double>());
    p.energy_savings_pct = j.at("energy_savings_pct").get<double>();
    p.estimated_water_l = j.at("estimated_water_l").get<double>();
    p.water_savings_pct = j.at("water_savings_pct").get<double>();
    p.accuracy_retention_pct = j.at("accuracy_retention_pct").get<double>();
    p.water_extrapolated = j.at("water_extrapolated").get<bool>();
    return p;
}

std::string serialize_report(const SessionReport& report, ReportFormat format) {
    if (format == ReportFormat::kCsv) {
        return reports_to_csv(std::span<const SessionReport>(&report, 1));
    }
    return to_json(report).dump(2) + "\n";
}

std::string reports_to_csv(std::span<const SessionReport> reports) {
    std::string out(kReportCsvHeader);
    out += '\n';
    for (const auto& r : reports) {
        out += csv_row(r);
        out += '\n';
    }
    return out;
}

SessionReport parse_report_json(std::string_view text) {
    try {
        return from_json(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, std::string("report JSON: ") + e.what());
    }
}

std::string frontier_to_csv(const FrontierDataset& dataset) {
    std::string out(kFrontierCsvHeader);
    out += '\n';
    for (const auto& p : dataset.points) {
        out += csv_field(p.label) + ',' + num(p.co2_kg_per_inference) + ',' + num(p.ess) + '\n';
    }
    return out;
}

std::string sensitivity_to_csv(std::span<const SensitivityRow> rows) {
    std::string out(kSensitivityCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += num(r.rate_hz) + ',' + num(r.estimated_co2_g) + ',' + num(r.relative_error_pct) + '\n';
    }
    return out;
}

}  // namespace ecoprof
