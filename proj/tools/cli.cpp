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

#include "cli.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "ecoprof/error.hpp"
#include "ecoprof/hardware.hpp"
#include "ecoprof/live.hpp"
#include "ecoprof/metrics.hpp"
#include "ecoprof/region.hpp"
#include "ecoprof/report_io.hpp"
#include "ecoprof/sampling.hpp"
#include "ecoprof/session.hpp"

extern char** environ;

namespace ecoprof::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MetadataFlags {
    std::uint64_t samples = 1;
    std::string device;
    std::string region;
    std::uint64_t params = 1;
    std::string precision = "fp32";
    std::string format = "json";
    std::string out_path;
    std::string label;
    std::string region_file;
    std::string device_rules;
};

void add_metadata(CLI::App& cmd, MetadataFlags& m) {
    cmd.add_option("--samples", m.samples, "Inferences performed during the session")
        ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
    cmd.add_option("--device", m.device, "Hardware descriptor, e.g. \"NVIDIA A100-SXM4-40GB\"");
    cmd.add_option("--region", m.region, "Region id; detected from the environment when omitted");
    cmd.add_option("--params", m.params, "Total model parameters")
        ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
    cmd.add_option("--precision", m.precision, "Model precision: fp32, fp16, int8 or int4");
    cmd.add_option("--format", m.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    cmd.add_option("--out", m.out_path, "Write the report here instead of stdout");
    cmd.add_option("--label", m.label, "Report label (default: DEVICE/PRECISION)");
    cmd.add_option("--region-file", m.region_file, "Region CSV replacing the shipped table");
    cmd.add_option("--device-rules", m.device_rules, "File of pattern=CLASS device classification overrides");
}

Precision precision_flag(const std::string& text, const char* flag) {
    try {
        return parse_precision(text);
    } catch (const Error& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

SessionConfig make_config(const MetadataFlags& m) {
    SessionConfig config;
    const Precision precision = precision_flag(m.precision, "--precision");
    config.label = !m.label.empty() ? m.label
                                    : (m.device.empty() ? std::string("cpu") : m.device) + "/" +
                                          std::string(to_string(precision));
    config.sample_count = m.samples;
    config.device_descriptor = m.device;
    if (!m.region.empty()) {
        config.region_override = m.region;
    }
    config.model_params = m.params;
    config.quantization = QuantizationSpec::uniform(m.params, precision);
    return config;
}

RegionDatabase load_regions(const std::string& region_file) {
    return region_file.empty() ? RegionDatabase::shipped() : RegionDatabase::from_csv(region_file);
}

ResolvedContext make_context(const SessionConfig& config, const MetadataFlags& m) {
    DeviceRules rules;
    if (!m.device_rules.empty()) {
        rules.load_overrides(std::filesystem::path(m.device_rules));
    }
    return resolve_context(config, load_regions(m.region_file), rules, DetectionSignals::from_environment());
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file || !(file << text)) {
        throw Error(ErrorCode::kIo, "cannot write " + out_path);
    }
}

SamplerSpec simulate_flag(const std::string& text) {
    try {
        return parse_sampler(text);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kInvalidParameter) {
            throw UsageError(std::string("--simulate: ") + e.what());
        }
        throw;
    }
}

// Runs `command` through /bin/sh and returns its exit status.
int run_wrapped(const std::string& command, std::ostream& err) {
    pid_t pid = 0;
    const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
    if (posix_spawn(&pid, "/bin/sh", nullptr, nullptr, const_cast<char* const*>(argv), environ) != 0) {
        throw Error(ErrorCode::kIo, "cannot start wrapped command");
    }
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) {
            throw Error(ErrorCode::kIo, "waiting for wrapped command failed");
        }
    }
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    if (code != 0) {
        err << "warning: wrapped command exited with status " << code << "\n";
    }
    return code;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

std::vector<double> parse_rates(const std::string& text) {
    std::vector<double> rates;
    std::stringstream in(text);
    std::string field;
    while (std::getline(in, field, ',')) {
        try {
            std::size_t used = 0;
            const double r = std::stod(field, &used);
            if (used != field.size() || !(r > 0.0)) {
                throw std::invalid_argument(field);
            }
            rates.push_back(r);
        } catch (const std::exception&) {
            throw UsageError("--rates: invalid rate '" + field + "'");
        }
    }
    if (rates.empty()) {
        throw UsageError("--rates: at least one rate is required");
    }
    return rates;
}

struct MonitorFlags {
    MetadataFlags meta;
    std::optional<double> duration_s;
    std::string wrap;
    std::optional<double> rate_hz;
    std::string simulate;
    std::optional<std::uint64_t> seed;
    std::optional<double> gpu_temp_c;
    std::optional<double> cpu_temp_c;
    std::string trace_out;
};

int monitor(const MonitorFlags& f, std::ostream& out, std::ostream& err) {
    if (f.duration_s.has_value() == !f.wrap.empty()) {
        throw UsageError("monitor needs exactly one of --duration or --wrap");
    }
    if (f.duration_s && !(*f.duration_s > 0.0)) {
        throw UsageError("--duration must be positive");
    }
    SessionConfig config = make_config(f.meta);
    config.requested_rate_hz = f.rate_hz;
    const ResolvedContext context = make_context(config, f.meta);

    PowerTrace trace;
    if (!f.simulate.empty()) {
        SamplerSpec spec = simulate_flag(f.simulate);
        spec.seed = f.seed;
        spec.gpu_temp_c = f.gpu_temp_c;
        spec.cpu_temp_c = f.cpu_temp_c;
        double duration = f.duration_s.value_or(0.0);
        if (!f.wrap.empty()) {
            const auto t0 = std::chrono::steady_clock::now();
            run_wrapped(f.wrap, err);
            duration = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        config.sampler = spec;
        config.duration_s = duration;
        trace = collect_session_trace(config);
    } else {
        auto probe = detect_live_probe();
        if (!probe) {
            err << "error: no readable power counters on this machine (looked for powercap/RAPL energy_uj).\n"
                << "Run with --simulate PROFILE (e.g. --simulate constant:100) or analyze a recorded trace.\n";
            return kExitData;
        }
        config.sampler = LiveSampling{};
        LiveCollector collector(std::move(probe), f.rate_hz);
        collector.start();
        if (f.duration_s) {
            std::this_thread::sleep_for(std::chrono::duration<double>(*f.duration_s));
        } else {
            run_wrapped(f.wrap, err);
        }
        trace = collector.stop();
    }

    const SessionReport report = build_report(trace, config, context);
    if (!f.trace_out.empty()) {
        write_trace_csv(std::filesystem::path(f.trace_out), trace);
    }
    if (report.ess_error) {
        err << "note: " << *report.ess_error << "\n";
    }
    emit(serialize_report(report, parse_report_format(f.meta.format)), f.meta.out_path, out);
    return kExitOk;
}

int analyze(const std::string& trace_path, const MetadataFlags& meta, std::ostream& out, std::ostream& err) {
    const PowerTrace trace = read_trace_csv(std::filesystem::path(trace_path));
    trace.validate(2);
    const SessionConfig config = make_config(meta);
    const SessionReport report = build_report(trace, config, make_context(config, meta));
    if (report.ess_error) {
        err << "note: " << *report.ess_error << "\n";
    }
    emit(serialize_report(report, parse_report_format(meta.format)), meta.out_path, out);
    return kExitOk;
}

struct EstimateFlags {
    double energy_kwh = 0.0;
    double water_l = 0.0;
    std::string from = "fp32";
    std::string to;
    std::string format = "json";
};

int estimate(const EstimateFlags& f, std::ostream& out) {
    const Precision from = precision_flag(f.from, "--from-precision");
    const Precision to = precision_flag(f.to, "--to-precision");
    if (bit_width(to) >= bit_width(from)) {
        throw UsageError("--to-precision (" + std::string(to_string(to)) +
                         ") must be strictly lower than --from-precision (" + std::string(to_string(from)) + ")");
    }
    const QuantizationProjection p = quantization_projection(EnergyQuantity(f.energy_kwh), f.water_l, to, from);
    const double water_saved = std::max(f.water_l - p.estimated_water_l, 0.0);
    const PracticalWater units = practical_water_units(water_saved);
    const double energy_saved = std::max(f.energy_kwh - p.estimated_energy.kilowatt_hours(), 0.0);

    if (f.format == "csv") {
        out << "precision,baseline,estimated_energy_kwh,energy_savings_pct,estimated_water_l,water_savings_pct,"
               "accuracy_retention_pct,water_extrapolated,energy_saved_kwh,water_saved_l,bottles_saved,"
               "gallons_conserved\n";
        const auto j = projection_to_json(p);
        out << to_string(p.precision) << ',' << to_string(p.baseline) << ',' << j["estimated_energy_kwh"].dump() << ','
            << j["energy_savings_pct"].dump() << ',' << j["estimated_water_l"].dump() << ','
            << j["water_savings_pct"].dump() << ',' << j["accuracy_retention_pct"].dump() << ','
            << (p.water_extrapolated ? "true" : "false") << ',' << nlohmann::json(energy_saved).dump() << ','
            << nlohmann::json(water_saved).dump() << ',' << nlohmann::json(units.bottles).dump() << ','
            << nlohmann::json(units.gallons).dump() << '\n';
        return kExitOk;
    }
    nlohmann::ordered_json j = projection_to_json(p);
    j["measured_energy_kwh"] = f.energy_kwh;
    j["baseline_water_l"] = f.water_l;
    j["energy_saved_kwh"] = energy_saved;
    j["water_saved_l"] = water_saved;
    j["bottles_saved"] = units.bottles;
    j["gallons_conserved"] = units.gallons;
    out << j.dump(2) << '\n';
    return kExitOk;
}

struct SensitivityFlags {
    std::string trace_path;
    std::string simulate;
    double duration_s = 60.0;
    double dense_rate_hz = 100.0;
    std::optional<std::uint64_t> seed;
    std::string rates = "1,2,5";
    std::optional<double> ci;
    double pue = 1.0;
    std::string region;
    std::string region_file;
    std::string out_path;
};

int sensitivity(const SensitivityFlags& f, std::ostream& out) {
    if (f.trace_path.empty() == f.simulate.empty()) {
        throw UsageError("sensitivity needs exactly one of TRACE or --simulate");
    }
    if (!(f.duration_s > 0.0) || !(f.dense_rate_hz > 0.0)) {
        throw UsageError("--duration and --dense-rate must be positive");
    }
    const std::vector<double> rates = parse_rates(f.rates);
    double ci = 0.0;
    if (f.ci) {
        ci = *f.ci;
    } else {
        const RegionDatabase regions = load_regions(f.region_file);
        ci = f.region.empty() ? regions.lookup(regions.detect(DetectionSignals::from_environment())).carbon_intensity
                              : regions.lookup(f.region).carbon_intensity;
    }
    PowerTrace dense;
    if (!f.trace_path.empty()) {
        dense = read_trace_csv(std::filesystem::path(f.trace_path));
    } else {
        SamplerSpec spec = simulate_flag(f.simulate);
        spec.seed = f.seed;
        dense = collect(spec, f.duration_s, f.dense_rate_hz);
    }
    const auto rows = sensitivity_analysis(dense, rates, ci, f.pue);
    emit(sensitivity_to_csv(rows), f.out_path, out);
    return kExitOk;
}

int regions_cmd(const std::string& format, const std::string& region_file, std::ostream& out) {
    const RegionDatabase regions = load_regions(region_file);
    if (format == "csv") {
        write_region_csv(out, regions.list());
        return kExitOk;
    }
    out << std::left << std::setw(8) << "ID" << std::setw(24) << "NAME" << std::setw(12) << "WATER_L/KWH"
        << std::setw(12) << "CO2_KG/KWH" << "PROVENANCE\n";
    for (const auto& r : regions.list()) {
        out << std::left << std::setw(8) << r.region_id << std::setw(24) << r.display_name << std::setw(12)
            << fmt(r.water_intensity) << std::setw(12) << fmt(r.carbon_intensity) << r.provenance << '\n';
    }
    return kExitOk;
}

int hardware_cmd(const std::string& descriptor, const std::string& format, const std::string& rules_path,
                 std::ostream& out) {
    DeviceRules rules;
    if (!rules_path.empty()) {
        rules.load_overrides(std::filesystem::path(rules_path));
    }
    const HardwareProfile h = make_hardware_profile(descriptor, rules);
    if (format == "csv") {
        out << "descriptor,device_class,pue,cooling_overhead,infra_overhead,gpu_thermal_limit_c,cpu_thermal_limit_c\n";
        std::string quoted = h.descriptor;
        if (quoted.find_first_of(",\"") != std::string::npos) {
            std::string escaped = "\"";
            for (const char c : quoted) {
                escaped += c == '"' ? std::string("\"\"") : std::string(1, c);
            }
            quoted = escaped + "\"";
        }
        out << quoted << ',' << to_string(h.device_class) << ',' << fmt(h.pue) << ',' << fmt(h.cooling_overhead)
            << ',' << fmt(h.infra_overhead) << ',' << fmt(h.gpu_thermal_limit_c) << ','
            << fmt(h.cpu_thermal_limit_c) << '\n';
        return kExitOk;
    }
    const auto row = [&](const char* key, const std::string& value) {
        out << std::left << std::setw(22) << key << value << '\n';
    };
    row("descriptor", h.descriptor);
    row("device_class", std::string(to_string(h.device_class)));
    row("pue", fmt(h.pue));
    row("cooling_overhead", fmt(h.cooling_overhead));
    row("infra_overhead", fmt(h.infra_overhead));
    row("gpu_thermal_limit_c", fmt(h.gpu_thermal_limit_c));
    row("cpu_thermal_limit_c", fmt(h.cpu_thermal_limit_c));
    return kExitOk;
}

int frontier_cmd(const std::vector<std::string>& paths, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
    std::vector<SessionReport> reports;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::kIo, "cannot open report " + path);
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        reports.push_back(parse_report_json(buffer.str()));
    }
    const FrontierDataset dataset = frontier_dataset(reports);
    if (dataset.excluded > 0) {
        err << "warning: " << dataset.excluded << " report(s) without a defined ESS were excluded\n";
    }
    emit(frontier_to_csv(dataset), out_path, out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Per-inference energy, carbon, water and ESS accounting for ML workloads", "ecoprof"};
    app.require_subcommand(1);

    MonitorFlags mon;
    auto* monitor_cmd = app.add_subcommand("monitor", "Profile a session and emit its report");
    add_metadata(*monitor_cmd, mon.meta);
    monitor_cmd->add_option("--duration", mon.duration_s, "Session length in seconds");
    monitor_cmd->add_option("--wrap", mon.wrap, "Shell command to run and profile");
    monitor_cmd->add_option("--rate", mon.rate_hz, "Fixed sampling rate in Hz (default: adaptive 1-5 Hz)");
    monitor_cmd->add_option("--simulate", mon.simulate,
                            "Synthetic sampler instead of hardware counters: constant:W, ramp:W0:W1, "
                            "sine:MEAN:AMP:PERIOD_S, bursty:BASE:BURST:BURST_MS:PERIOD_MS, replay:PATH");
    monitor_cmd->add_option("--seed", mon.seed, "Seed for burst offsets of --simulate bursty");
    monitor_cmd->add_option("--sim-gpu-temp", mon.gpu_temp_c, "GPU temperature attached to simulated samples");
    monitor_cmd->add_option("--sim-cpu-temp", mon.cpu_temp_c, "CPU temperature attached to simulated samples");
    monitor_cmd->add_option("--trace-out", mon.trace_out, "Also write the collected trace CSV here");

    std::string analyze_path;
    MetadataFlags analyze_meta;
    auto* analyze_cmd = app.add_subcommand("analyze", "Build a report from a recorded trace CSV");
    analyze_cmd->add_option("trace", analyze_path, "Trace CSV")->required();
    add_metadata(*analyze_cmd, analyze_meta);

    EstimateFlags est;
    auto* estimate_cmd = app.add_subcommand("estimate", "Project quantization savings from a measured baseline");
    estimate_cmd->add_option("--energy", est.energy_kwh, "Measured energy in kWh")
        ->required()
        ->check(CLI::NonNegativeNumber);
    estimate_cmd->add_option("--water", est.water_l, "Measured water in liters")->check(CLI::NonNegativeNumber);
    estimate_cmd->add_option("--from-precision", est.from, "Precision the measurement was taken at");
    estimate_cmd->add_option("--to-precision", est.to, "Target precision")->required();
    estimate_cmd->add_option("--format", est.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    SensitivityFlags sens;
    auto* sensitivity_cmd = app.add_subcommand("sensitivity", "CO2 estimate versus sampling rate");
    sensitivity_cmd->add_option("trace", sens.trace_path, "Dense trace CSV");
    sensitivity_cmd->add_option("--simulate", sens.simulate, "Synthetic dense trace profile");
    sensitivity_cmd->add_option("--duration", sens.duration_s, "Simulated duration in seconds");
    sensitivity_cmd->add_option("--dense-rate", sens.dense_rate_hz, "Simulated reference rate in Hz");
    sensitivity_cmd->add_option("--seed", sens.seed, "Seed for burst offsets");
    sensitivity_cmd->add_option("--rates", sens.rates, "Comma-separated rates in Hz");
    sensitivity_cmd->add_option("--ci", sens.ci, "Carbon intensity, kg CO2/kWh")->check(CLI::PositiveNumber);
    sensitivity_cmd->add_option("--pue", sens.pue, "Power usage effectiveness")->check(CLI::Range(1.0, 1e6));
    sensitivity_cmd->add_option("--region", sens.region, "Region supplying the carbon intensity");
    sensitivity_cmd->add_option("--region-file", sens.region_file, "Region CSV replacing the shipped table");
    sensitivity_cmd->add_option("--out", sens.out_path, "Write the table here instead of stdout");

    std::string regions_format = "table";
    std::string regions_file;
    auto* regions_sub = app.add_subcommand("regions", "List regional water and carbon intensities");
    regions_sub->add_option("--format", regions_format)->check(CLI::IsMember({"table", "csv"}));
    regions_sub->add_option("--region-file", regions_file, "Region CSV replacing the shipped table");

    std::string descriptor;
    std::string hardware_format = "table";
    std::string device_rules;
    auto* hardware_sub = app.add_subcommand("hardware", "Classify a device and show its PUE and overheads");
    hardware_sub->add_option("descriptor", descriptor, "Device descriptor")->required();
    hardware_sub->add_option("--format", hardware_format)->check(CLI::IsMember({"table", "csv"}));
    hardware_sub->add_option("--device-rules", device_rules, "File of pattern=CLASS overrides");

    std::vector<std::string> frontier_paths;
    std::string frontier_out;
    auto* frontier_sub = app.add_subcommand("frontier", "ESS versus CO2-per-inference dataset from report JSONs");
    frontier_sub->add_option("reports", frontier_paths, "Report JSON files");
    frontier_sub->add_option("--out", frontier_out, "Write the CSV here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    }

    try {
        if (monitor_cmd->parsed()) {
            return monitor(mon, out, err);
        }
        if (analyze_cmd->parsed()) {
            return analyze(analyze_path, analyze_meta, out, err);
        }
        if (estimate_cmd->parsed()) {
            return estimate(est, out);
        }
        if (sensitivity_cmd->parsed()) {
            return sensitivity(sens, out);
        }
        if (regions_sub->parsed()) {
            return regions_cmd(regions_format, regions_file, out);
        }
        if (hardware_sub->parsed()) {
            return hardware_cmd(descriptor, hardware_format, device_rules, out);
        }
        if (frontier_sub->parsed()) {
            return frontier_cmd(frontier_paths, frontier_out, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    err << "error: no command given\n";
    return kExitUsage;
}

}  // namespace ecoprof::cli
