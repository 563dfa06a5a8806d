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

// Standalone acceptance run: one PASS/FAIL line per criterion, non-zero exit
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ecoprof/error.hpp"
#include "ecoprof/hardware.hpp"
#include "ecoprof/metrics.hpp"
#include "ecoprof/region.hpp"
#include "ecoprof/report_io.hpp"
#include "ecoprof/sampling.hpp"
#include "ecoprof/session.hpp"
#include "session_oracle.hpp"
#include "support.hpp"

using namespace ecoprof;
using ecoprof::testing::Gen;
using ecoprof::testing::rel_close;

namespace {

// Collects failed checks for one criterion.
class Check {
public:
    void that(bool ok, const std::string& what) {
        ++total_;
        if (!ok) failures_.push_back(what);
    }
    void close(const std::string& what, double actual, double expected, double tol) {
        std::ostringstream s;
        s.precision(17);
        s << what << ": got " << actual << ", want " << expected << " (rel " << tol << ")";
        that(rel_close(actual, expected, tol), s.str());
    }
    template <typename Fn>
    void throws(ErrorCode code, const std::string& what, Fn&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            that(e.code() == code, what + ": wrong error " + std::string(to_string(e.code())));
            return;
        }
        that(false, what + ": no error raised");
    }
    bool ok() const { return failures_.empty(); }
    std::size_t total() const { return total_; }
    const std::vector<std::string>& failures() const { return failures_; }
    std::string note;

private:
    std::size_t total_ = 0;
    std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void formula_exactness(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr double tol = 1e-9;
    // Carbon
    c.close("carbon(1.0, 0.5, 1.2)", carbon_emissions(EnergyQuantity(1.0), 0.5, 1.2).co2_kg, 0.6, tol);
    c.close("carbon(0, 0.4, 1.4)", carbon_emissions(EnergyQuantity(0.0), 0.4, 1.4).co2_kg, 0.0, tol);
    c.close("carbon(2.5, 0.4, 1.4)", carbon_emissions(EnergyQuantity(2.5), 0.4, 1.4).co2_kg, 1.4, tol);
    c.throws(ErrorCode::kInvalidParameter, "carbon with CI 0", [] { carbon_emissions(EnergyQuantity(1), 0.0, 1.2); });
    c.throws(ErrorCode::kInvalidParameter, "carbon with PUE < 1", [] { carbon_emissions(EnergyQuantity(1), 0.5, 0.9); });
    // Water
    c.close("water(0.3, 2, 1.8, 1.2, 1.1)", water_footprint(0.3, 2.0, 1.8, 1.2, 1.1).liters, 1.4256, tol);
    c.close("water(0, ...)", water_footprint(0.0, 7.0, 3.0, 1.3, 1.1).liters, 0.0, tol);
    c.close("water(1, 1, 4.8, 1.4, 1.2)", water_footprint(1.0, 1.0, 4.8, 1.4, 1.2).liters, 8.064, tol);
    c.throws(ErrorCode::kInvalidParameter, "water cooling 1.5", [] { water_footprint(1, 1, 2, 1.5, 1.0); });
    c.throws(ErrorCode::kInvalidParameter, "water infra 1.3", [] { water_footprint(1, 1, 2, 1.0, 1.3); });
    // Quantization factor and effective parameters
    c.close("qf all fp16", quantization_factor(QuantizationSpec::uniform(100, Precision::kFp16)), 0.5, tol);
    c.close("qf one fp32 layer", quantization_factor(QuantizationSpec{{{9, Precision::kFp32}}}), 1.0, tol);
    c.close("qf fp32+int8", quantization_factor(QuantizationSpec{{{5, Precision::kFp32}, {5, Precision::kInt8}}}),
            0.625, tol);
    c.throws(ErrorCode::kInvalidSpec, "qf of empty spec", [] { quantization_factor(QuantizationSpec{}); });
    c.close("effective(7e9, 0.5)", effective_parameters(7'000'000'000ULL, 0.5).millions, 3500.0, tol);
    c.close("effective(1e6, 1.0)", effective_parameters(1'000'000ULL, 1.0).millions, 1.0, tol);
    c.close("effective(4e9, 0.25)", effective_parameters(4'000'000'000ULL, 0.25).millions, 1000.0, tol);
    // ESS
    c.close("ess(3500, 16 g)", ess({3500.0, 0.5}, {0.016, 16.0, 0.5, 1.0}).ess, 218.75, tol);
    c.close("ess(100, 100 g)", ess({100.0, 1.0}, {0.1, 100.0, 0.5, 1.0}).ess, 1.0, tol);
    c.throws(ErrorCode::kUndefinedEss, "ess at 0 g", [] { ess({100.0, 1.0}, {0.0, 0.0, 0.5, 1.0}); });
    const double elapsed = seconds_since(t0);
    c.that(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s >= 1 s");
    c.note = std::to_string(elapsed * 1e3) + " ms";
}

void integration_accuracy(Check& c) {
    const PowerTrace sine = collect(SamplerSpec::synthetic(profile::Sine{50.0, 50.0, 600.0}), 3600.0, 5.0);
    const double e = integrate_energy(sine).kilowatt_hours();
    c.that(std::fabs(e - 0.05) <= 1e-3 * 0.05, "sine energy " + std::to_string(e) + " outside 0.1% of 0.05 kWh");
    c.that(sine.size() == 18001, "sine trace should hold 18001 samples");
    for (const double rate : {1.0, 5.0}) {
        c.close("constant 100 W, 3600 s",
                integrate_energy(collect(SamplerSpec::synthetic(profile::Constant{100.0}), 3600.0, rate))
                    .kilowatt_hours(),
                0.1, 1e-12);
        c.close("ramp 0->100 W, 3600 s",
                integrate_energy(collect(SamplerSpec::synthetic(profile::Ramp{0.0, 100.0}), 3600.0, rate))
                    .kilowatt_hours(),
                0.05, 1e-12);
    }
    std::ostringstream s;
    s.precision(10);
    s << "sine " << e << " kWh, rel err " << std::fabs(e - 0.05) / 0.05;
    c.note = s.str();
}

void tier_tables(Check& c) {
    struct Row {
        DeviceClass cls;
        double pue, cooling, infra;
    };
    for (const Row& r : {Row{DeviceClass::kCpuOnly, 1.1, 1.0, 1.0}, Row{DeviceClass::kDesktopGpu, 1.2, 1.2, 1.0},
                         Row{DeviceClass::kDatacenterGpu, 1.4, 1.4, 1.2}}) {
        const std::string name(to_string(r.cls));
        c.that(pue_for(r.cls) == r.pue, name + " pue");
        c.that(overheads_for(r.cls).first == r.cooling, name + " cooling overhead");
        c.that(overheads_for(r.cls).second == r.infra, name + " infra overhead");
        c.that(overheads_for(r.cls).first <= 1.4 && overheads_for(r.cls).second <= 1.2, name + " overhead ceiling");
    }
}

void projections(Check& c) {
    struct Row {
        Precision p;
        double savings, retention;
    };
    for (const Row& r : {Row{Precision::kFp16, 25.0, 98.5}, Row{Precision::kInt8, 55.0, 94.2},
                         Row{Precision::kInt4, 75.0, 87.8}}) {
        const std::string name(to_string(r.p));
        for (const double e : {1.0, 0.37, 1234.5}) {
            const auto proj = quantization_projection(EnergyQuantity(e), 2.0, r.p);
            c.that(proj.energy_savings_pct == r.savings, name + " energy savings");
            c.that(proj.water_savings_pct == r.savings, name + " water savings");
            c.that(proj.accuracy_retention_pct == r.retention, name + " accuracy retention");
        }
    }
}

void sampling_sensitivity(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const double rates[] = {1.0, 2.0, 5.0, 100.0};
    int ordered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const PowerTrace dense =
            collect(SamplerSpec::synthetic(profile::Bursty{20.0, 200.0, 200.0, 1000.0}, seed), 60.0, 100.0);
        const auto rows = sensitivity_analysis(dense, rates, 0.4, 1.0);
        const double e1 = std::fabs(rows[0].relative_error_pct);
        const double e2 = std::fabs(rows[1].relative_error_pct);
        const double e5 = std::fabs(rows[2].relative_error_pct);
        ordered += e1 > e2 && e2 > e5;
    }
    const double elapsed = seconds_since(t0);
    c.that(ordered >= 95, std::to_string(ordered) + "/100 seeds ordered");
    c.that(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s >= 10 s");
    c.note = std::to_string(ordered) + "/100 seeds ordered, " + std::to_string(elapsed) + " s";
}

void ess_properties(Check& c) {
    Gen g(6);
    for (int i = 0; i < 200; ++i) {
        const double m = g.uniform(1e-3, 1e5), k = g.uniform(1e-3, 1e3), grams = g.uniform(1e-6, 1e4);
        const EmissionEstimate em{grams / 1000, grams, 0.4, 1.2};
        c.close("homogeneity", ess({k * m, 1.0}, em).ess, k * ess({m, 1.0}, em).ess, 1e-12);
    }
    c.throws(ErrorCode::kUndefinedEss, "zero grams", [] { ess({10.0, 1.0}, {0.0, 0.0, 0.4, 1.2}); });

    const PowerTrace trace = collect(SamplerSpec::synthetic(profile::Sine{90.0, 30.0, 40.0}), 300.0, 5.0);
    ResolvedContext ctx;
    ctx.hardware = make_hardware_profile("A100");
    ctx.region = RegionProfile{"ZZ", "test", 2.0, 0.4, "acceptance"};
    double fp32 = 0, fp16 = 0, int8 = 0;
    for (const Precision p : {Precision::kFp32, Precision::kFp16, Precision::kInt8}) {
        SessionConfig cfg;
        cfg.model_params = 7'000'000'000ULL;
        cfg.quantization = QuantizationSpec::uniform(cfg.model_params, p);
        cfg.sample_count = 50;
        const double v = build_report(trace, cfg, ctx).ess.value().ess;
        (p == Precision::kFp32 ? fp32 : p == Precision::kFp16 ? fp16 : int8) = v;
    }
    c.that(int8 > fp16 && fp16 > fp32, "ESS ordering INT8 > FP16 > FP32: got INT8 " + std::to_string(int8) +
                                           ", FP16 " + std::to_string(fp16) + ", FP32 " + std::to_string(fp32) +
                                           " MP/g (effective parameters N * QF shrink with precision)");
}

PowerTrace temps_trace(std::size_t seconds, double watts, const std::function<std::optional<double>(std::size_t)>& gpu,
                       const std::function<std::optional<double>(std::size_t)>& cpu) {
    PowerTrace t;
    for (std::size_t i = 0; i <= seconds; ++i) t.push_back({static_cast<double>(i), watts, gpu(i), cpu(i)});
    return t;
}

void thermal(Check& c) {
    const HardwareProfile h = make_hardware_profile("A100");
    const auto none = [](std::size_t) { return std::optional<double>{}; };
    const auto at = [](double v) { return [v](std::size_t) { return std::optional<double>(v); }; };

    const auto cool = thermal_flags(temps_trace(600, 100, at(70.0), at(85.0)), h);
    c.that(cool.flagged_intervals.empty(), "70 C GPU / 85 C CPU flags nothing");
    c.that(cool.cooling_energy_adjustment_kwh == 0.0, "below threshold adjustment is 0");

    const auto hour = thermal_flags(temps_trace(3600, 100, at(85.0), none), h);
    c.that(hour.flagged_intervals.size() == 1 &&
               hour.flagged_intervals[0] == FlaggedInterval{0.0, 3600.0, 85.0, ThermalDomain::kGpu},
           "hot hour is one GPU interval [0, 3600]");
    c.close("hot hour adjustment", hour.cooling_energy_adjustment_kwh, 0.01, 1e-12);

    const auto minute = thermal_flags(
        temps_trace(600, 100, none, [](std::size_t i) { return std::optional<double>(i >= 300 && i <= 360 ? 86 : 80); }),
        h);
    c.that(minute.flagged_intervals.size() == 1 &&
               minute.flagged_intervals[0] == FlaggedInterval{300.0, 360.0, 86.0, ThermalDomain::kCpu},
           "CPU minute is one interval [300, 360]");

    // Two GPU runs and one CPU run, with a run touching each end of the trace.
    const auto gpu = [](std::size_t i) {
        return std::optional<double>((i <= 9) || (i >= 50 && i <= 59) ? 80.5 + (i % 5) : 80.0);
    };
    const auto cpu = [](std::size_t i) { return std::optional<double>(i >= 95 ? 85.0 + 0.1 * (i - 94) : 84.0); };
    const auto mixed = thermal_flags(temps_trace(100, 50, gpu, cpu), h);
    const std::vector<FlaggedInterval> expected{{0.0, 9.0, 84.5, ThermalDomain::kGpu},
                                                {50.0, 59.0, 84.5, ThermalDomain::kGpu},
                                                {95.0, 100.0, 85.0 + 0.1 * 6, ThermalDomain::kCpu}};
    c.that(mixed.flagged_intervals == expected, "mixed trace yields exactly the three maximal runs");
    c.that(mixed.cooling_energy_adjustment_kwh > 0.0, "mixed trace has an adjustment");
}

void region_db(Check& c) {
    const auto all = list_regions();
    c.that(all.size() >= 25, "at least 25 regions (have " + std::to_string(all.size()) + ")");
    c.that(lookup("IS").water_intensity == 1.2, "IS = 1.2 L/kWh");
    c.that(lookup("ME").water_intensity == 4.8, "ME = 4.8 L/kWh");
    for (const auto& r : all) {
        c.that(r.water_intensity >= 1.2 && r.water_intensity <= 4.8, r.region_id + " water intensity in range");
    }

    const auto sig = [](std::optional<std::string> o, std::map<std::string, std::string> cloud,
                        std::optional<std::string> tz, std::optional<std::string> loc) {
        DetectionSignals s;
        s.explicit_override = std::move(o);
        s.cloud_env = std::move(cloud);
        s.timezone = std::move(tz);
        s.locale = std::move(loc);
        return s;
    };
    const std::map<std::string, std::string> aws{{"AWS_REGION", "eu-central-1"}};
    const std::map<std::string, std::string> gcp{{"GOOGLE_CLOUD_REGION", "asia-northeast1"}};
    const std::map<std::string, std::string> junk{{"AWS_REGION", "nowhere-9"}};
    struct Case {
        const char* name;
        DetectionSignals s;
        const char* want;
    };
    const Case cases[] = {
        {"no signals", sig({}, {}, {}, {}), "GLOBAL"},
        {"override alone", sig("IS", {}, {}, {}), "IS"},
        {"override vs conflicting timezone", sig("IS", {}, "Asia/Dubai", {}), "IS"},
        {"override vs everything", sig("ME", aws, "Atlantic/Reykjavik", "en_US.UTF-8"), "ME"},
        {"cloud vs timezone", sig({}, aws, "Atlantic/Reykjavik", {}), "DE"},
        {"cloud vs locale", sig({}, gcp, {}, "en_US.UTF-8"), "JP"},
        {"unmapped cloud falls to timezone", sig({}, junk, "Atlantic/Reykjavik", {}), "IS"},
        {"timezone alone", sig({}, {}, "Atlantic/Reykjavik", {}), "IS"},
        {"timezone vs locale", sig({}, {}, "Europe/Paris", "de_DE.UTF-8"), "FR"},
        {"locale alone", sig({}, {}, {}, "en_GB.UTF-8"), "GB"},
        {"unknown timezone falls to locale", sig({}, {}, "Mars/Olympus", "ja_JP"), "JP"},
        {"unusable signals fall to default", sig("XX", junk, "Mars/Olympus", "C"), "GLOBAL"},
    };
    for (const Case& k : cases) {
        const std::string got = detect_region(k.s);
        c.that(got == k.want, std::string(k.name) + ": got " + got + ", want " + k.want);
    }
}

std::pair<int, std::string> cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

void round_trips(Check& c) {
    Gen g(9);
    for (int i = 0; i < 10; ++i) {
        const auto [config, ctx] = ecoprof::testing::random_session(g);
        const SessionReport r = run_session(config, ctx);
        c.that(parse_report_json(serialize_report(r, ReportFormat::kJson)) == r, "report JSON identity");

        const PowerTrace t = collect_session_trace(config);
        std::stringstream buf;
        write_trace_csv(buf, t);
        c.that(read_trace_csv(buf).same_samples(t), "trace CSV identity");
    }

    ecoprof::testing::TempDir dir;
    int k = 0;
    for (const std::string profile : {"constant:120", "ramp:10:300", "bursty:20:200:200:1000"}) {
        const std::string trace = (dir / ("trace" + std::to_string(k++) + ".csv")).string();
        const std::vector<std::string> meta{"--samples", "250", "--params", "3000000000", "--precision", "fp16",
                                            "--region", "SE", "--device", "Tesla V100"};
        std::vector<std::string> mon{"monitor", "--simulate", profile, "--duration", "30", "--seed", "2",
                                     "--trace-out", trace};
        mon.insert(mon.end(), meta.begin(), meta.end());
        std::vector<std::string> ana{"analyze", trace};
        ana.insert(ana.end(), meta.begin(), meta.end());
        const auto [mc, mout] = cli(mon);
        const auto [ac, aout] = cli(ana);
        c.that(mc == 0 && ac == 0, profile + ": monitor and analyze succeed");
        c.that(!mout.empty() && mout == aout, profile + ": analyze reproduces the monitor report");
        if (mc == 0 && ac == 0) {
            c.that(parse_report_json(mout) == parse_report_json(aout), profile + ": parsed reports are equal");
        }
    }

    FrontierDataset d;
    d.points = {{"m/int8", 1e-6, 3.5}};
    c.that(frontier_to_csv(d) == "label,co2_kg_per_inference,ess_mp_per_g\nm/int8,1e-06,3.5\n",
           "frontier CSV layout");
}

void oracle_equivalence(Check& c) {
    Gen g(10);
    for (int i = 0; i < 20; ++i) {
        const auto [config, ctx] = ecoprof::testing::random_session(g);
        const SessionReport r = run_session(config, ctx);
        for (const auto& bad : ecoprof::testing::oracle_mismatches(r, config, ctx, collect_session_trace(config))) {
            c.that(false, "config " + std::to_string(i) + ": " + bad);
        }
        c.that(true, "config " + std::to_string(i));
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        void (*run)(Check&);
    };
    const Criterion criteria[] = {
        {1, "formula exactness", formula_exactness},
        {2, "integration accuracy", integration_accuracy},
        {3, "PUE and overhead tables", tier_tables},
        {4, "quantization projections", projections},
        {5, "sampling sensitivity ordering", sampling_sensitivity},
        {6, "ESS properties", ess_properties},
        {7, "thermal flagging", thermal},
        {8, "region database and detection", region_db},
        {9, "round trips", round_trips},
        {10, "oracle equivalence", oracle_equivalence},
    };
    int failed = 0;
    for (const Criterion& cr : criteria) {
        Check c;
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.that(false, std::string("unexpected exception: ") + e.what());
        }
        std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title << " ("
                  << c.total() - c.failures().size() << "/" << c.total() << " checks"
                  << (c.note.empty() ? "" : "; " + c.note) << ")\n";
        for (const auto& f : c.failures()) std::cout << "    " << f << "\n";
        failed += !c.ok();
    }
    return failed == 0 ? 0 : 1;
}
