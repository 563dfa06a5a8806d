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

#include "ecoprof/region.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecoprof/error.hpp"
#include "regions_data.hpp"
#include "text.hpp"

namespace ecoprof {
namespace {

std::string to_upper(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

constexpr std::array<std::string_view, 9> kCloudRegionVariables{
    "AWS_REGION",
    "AWS_DEFAULT_REGION",
    "GOOGLE_CLOUD_REGION",
    "CLOUDSDK_COMPUTE_REGION",
    "FUNCTION_REGION",
    "AZURE_REGION",
    "AZURE_LOCATION",
    "REGION_NAME",
    "CLOUD_REGION",
};

struct PrefixRule {
    std::string_view prefix;
    std::string_view region;
};

// Provider region names, lower-cased. Longest matching prefix wins.
constexpr PrefixRule kCloudRegionPrefixes[] = {
    // AWS
    {"us-", "US"}, {"ca-", "CA"}, {"sa-east-", "BR"}, {"mx-", "MX"},
    {"eu-north-", "SE"}, {"eu-west-1", "IE"}, {"eu-west-2", "GB"}, {"eu-west-3", "FR"},
    {"eu-central-1", "DE"}, {"eu-central-2", "CH"}, {"eu-south-1", "IT"}, {"eu-south-2", "ES"},
    {"ap-northeast-1", "JP"}, {"ap-northeast-2", "KR"}, {"ap-northeast-3", "JP"},
    {"ap-southeast-1", "SG"}, {"ap-southeast-2", "AU"}, {"ap-southeast-3", "ID"}, {"ap-southeast-4", "AU"},
    {"ap-south-", "IN"}, {"af-south-", "ZA"}, {"me-central-", "AE"}, {"me-south-", "ME"},
    {"il-central-", "ME"}, {"cn-", "CN"},
    // Google Cloud
    {"northamerica-northeast", "CA"}, {"northamerica-south", "MX"}, {"southamerica-", "BR"},
    {"europe-north1", "FI"}, {"europe-west1", "NL"}, {"europe-west2", "GB"}, {"europe-west3", "DE"},
    {"europe-west4", "NL"}, {"europe-west6", "CH"}, {"europe-west8", "IT"}, {"europe-west9", "FR"},
    {"europe-southwest1", "ES"}, {"europe-central2", "PL"},
    {"asia-northeast1", "JP"}, {"asia-northeast2", "JP"}, {"asia-northeast3", "KR"},
    {"asia-southeast1", "SG"}, {"asia-southeast2", "ID"}, {"asia-south", "IN"}, {"asia-east", "CN"},
    {"australia-", "AU"}, {"africa-south", "ZA"}, {"me-west1", "ME"}, {"me-central1", "ME"},
    {"me-central2", "SA"},
    // Azure
    {"eastus", "US"}, {"westus", "US"}, {"centralus", "US"}, {"northcentralus", "US"},
    {"southcentralus", "US"}, {"westcentralus", "US"}, {"canada", "CA"}, {"brazil", "BR"},
    {"mexico", "MX"}, {"northeurope", "IE"}, {"westeurope", "NL"}, {"uk", "GB"}, {"france", "FR"},
    {"germany", "DE"}, {"switzerland", "CH"}, {"norway", "NO"}, {"sweden", "SE"}, {"poland", "PL"},
    {"italy", "IT"}, {"spain", "ES"}, {"japan", "JP"}, {"korea", "KR"}, {"southeastasia", "SG"},
    {"centralindia", "IN"}, {"southindia", "IN"}, {"westindia", "IN"}, {"australia", "AU"},
    {"southafrica", "ZA"}, {"uae", "AE"}, {"qatar", "ME"}, {"israel", "ME"}, {"china", "CN"},
};

// Exact zone names, or prefixes ending in '/'.
constexpr PrefixRule kTimezoneRules[] = {
    {"Atlantic/Reykjavik", "IS"}, {"Europe/Oslo", "NO"}, {"Europe/Stockholm", "SE"},
    {"Europe/Helsinki", "FI"}, {"Europe/Paris", "FR"}, {"Europe/Zurich", "CH"},
    {"Europe/Berlin", "DE"}, {"Europe/London", "GB"}, {"Europe/Dublin", "IE"},
    {"Europe/Madrid", "ES"}, {"Europe/Rome", "IT"}, {"Europe/Amsterdam", "NL"},
    {"Europe/Warsaw", "PL"}, {"Europe/Moscow", "RU"},
    {"America/New_York", "US"}, {"America/Chicago", "US"}, {"America/Denver", "US"},
    {"America/Los_Angeles", "US"}, {"America/Phoenix", "US"}, {"America/Anchorage", "US"},
    {"America/Detroit", "US"}, {"Pacific/Honolulu", "US"}, {"US/", "US"},
    {"America/Toronto", "CA"}, {"America/Vancouver", "CA"}, {"America/Montreal", "CA"},
    {"America/Edmonton", "CA"}, {"America/Winnipeg", "CA"}, {"America/Halifax", "CA"}, {"Canada/", "CA"},
    {"America/Mexico_City", "MX"}, {"America/Sao_Paulo", "BR"},
    {"Asia/Tokyo", "JP"}, {"Asia/Seoul", "KR"}, {"Asia/Shanghai", "CN"}, {"Asia/Chongqing", "CN"},
    {"Asia/Kolkata", "IN"}, {"Asia/Calcutta", "IN"}, {"Asia/Singapore", "SG"}, {"Asia/Jakarta", "ID"},
    {"Australia/", "AU"}, {"Africa/Johannesburg", "ZA"}, {"Asia/Riyadh", "SA"}, {"Asia/Dubai", "AE"},
    {"Asia/Qatar", "ME"}, {"Asia/Bahrain", "ME"}, {"Asia/Kuwait", "ME"}, {"Asia/Tehran", "ME"},
    {"Asia/Baghdad", "ME"}, {"Asia/Muscat", "ME"}, {"Asia/Jerusalem", "ME"}, {"Asia/Amman", "ME"},
};

std::optional<std::string_view> match_cloud_region(std::string_view value) {
    const std::string lower = to_lower(detail::trim(value));
    std::optional<std::string_view> best;
    std::size_t best_len = 0;
    for (const auto& rule : kCloudRegionPrefixes) {
        if (lower.starts_with(rule.prefix) && rule.prefix.size() > best_len) {
            best = rule.region;
            best_len = rule.prefix.size();
        }
    }
    return best;
}

std::optional<std::string_view> match_timezone(std::string_view tz) {
    tz = detail::trim(tz);
    if (tz.starts_with(':')) {
        tz.remove_prefix(1);
    }
    // Accept full paths such as /usr/share/zoneinfo/Europe/Berlin.
    if (const auto pos = tz.find("zoneinfo/"); pos != std::string_view::npos) {
        tz.remove_prefix(pos + 9);
    }
    for (const auto& rule : kTimezoneRules) {
        const bool is_prefix = rule.prefix.ends_with('/');
        if (is_prefix ? tz.starts_with(rule.prefix) : tz == rule.prefix) {
            return rule.region;
        }
    }
    return std::nullopt;
}

// "en_US.UTF-8" -> "US"; "C" and "POSIX" carry no country.
std::optional<std::string> locale_country(std::string_view locale) {
    locale = detail::trim(locale);
    const auto underscore = locale.find('_');
    if (underscore == std::string_view::npos) {
        return std::nullopt;
    }
    std::string_view country = locale.substr(underscore + 1);
    country = country.substr(0, country.find_first_of(".@"));
    if (country.size() != 2) {
        return std::nullopt;
    }
    return to_upper(country);
}

std::optional<std::string> env(const char* name) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') {
        return std::string(v);
    }
    return std::nullopt;
}

}  // namespace

std::span<const std::string_view> cloud_region_variables() { return kCloudRegionVariables; }

DetectionSignals DetectionSignals::from_environment() {
    DetectionSignals signals;
    signals.explicit_override = env(std::string(kRegionOverrideEnv).c_str());
    for (const char* name : {"LC_ALL", "LC_MESSAGES", "LANG"}) {
        if (auto v = env(name)) {
            signals.locale = std::move(v);
            break;
        }
    }
    signals.timezone = env("TZ");
    if (!signals.timezone) {
        std::ifstream in("/etc/timezone");
        std::string line;
        if (in && std::getline(in, line) && !detail::trim(line).empty()) {
            signals.timezone = std::string(detail::trim(line));
        } else {
            std::error_code ec;
            const auto target = std::filesystem::read_symlink("/etc/localtime", ec);
            if (!ec) {
                signals.timezone = target.string();
            }
        }
    }
    for (const auto name : kCloudRegionVariables) {
        if (auto v = env(std::string(name).c_str())) {
            signals.cloud_env.emplace(std::string(name), std::move(*v));
        }
    }
    return signals;
}

RegionDatabase::RegionDatabase(std::vector<RegionProfile> regions) : regions_(std::move(regions)) {
    for (auto& r : regions_) {
        r.region_id = to_upper(detail::trim(r.region_id));
        const auto bad = [&](const std::string& what) {
            throw Error(ErrorCode::kInvalidParameter, "region '" + r.region_id + "': " + what);
        };
        if (r.region_id.empty()) {
            throw Error(ErrorCode::kInvalidParameter, "region with empty id");
        }
        if (!(r.water_intensity >= kMinWaterIntensity && r.water_intensity <= kMaxWaterIntensity)) {
            bad("water intensity outside [1.2, 4.8] L/kWh");
        }
        if (!(r.carbon_intensity > 0.0 && r.carbon_intensity <= kMaxCarbonIntensity)) {
            bad("carbon intensity outside (0, 1.5] kg/kWh");
        }
        if (r.provenance.empty()) {
            bad("missing provenance note");
        }
    }
    std::sort(regions_.begin(), regions_.end(),
              [](const RegionProfile& a, const RegionProfile& b) { return a.region_id < b.region_id; });
    const auto dup = std::adjacent_find(regions_.begin(), regions_.end(),
                                        [](const auto& a, const auto& b) { return a.region_id == b.region_id; });
    if (dup != regions_.end()) {
        throw Error(ErrorCode::kInvalidParameter, "duplicate region id '" + dup->region_id + "'");
    }
}

const RegionDatabase& RegionDatabase::shipped() {
    static const RegionDatabase db = [] {
        std::istringstream in(detail::kShippedRegionsCsv);
        return from_csv(in);
    }();
    return db;
}

RegionDatabase RegionDatabase::from_csv(std::istream& in) {
    std::vector<RegionProfile> regions;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) {
            view.remove_prefix(3);
        }
        view = detail::trim(view);
        if (view.empty()) {
            continue;
        }
        if (!saw_header) {
            if (view != kRegionCsvHeader) {
                throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected header '" +
                                                   std::string(kRegionCsvHeader) + "'");
            }
            saw_header = true;
            continue;
        }
        const auto fields = detail::split(view, ',');
        if (fields.size() < 5) {
            throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 5 fields");
        }
        RegionProfile r;
        r.region_id = std::string(detail::trim(fields[0]));
        r.display_name = std::string(detail::trim(fields[1]));
        const auto wi = detail::parse_double(fields[2]);
        const auto ci = detail::parse_double(fields[3]);
        if (!wi || !ci) {
            throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": invalid intensity value");
        }
        r.water_intensity = *wi;
        r.carbon_intensity = *ci;
        // Provenance is the remainder of the row and may contain commas.
        const auto provenance_start = fields[4].data() - view.data();
        r.provenance = std::string(detail::trim(view.substr(static_cast<std::size_t>(provenance_start))));
        regions.push_back(std::move(r));
    }
    if (!saw_header) {
        throw Error(ErrorCode::kParse, "region file is empty");
    }
    return RegionDatabase(std::move(regions));
}

RegionDatabase RegionDatabase::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open region file " + path.string());
    }
    return from_csv(in);
}

const RegionProfile* RegionDatabase::find(std::string_view region_id) const {
    const std::string key = to_upper(detail::trim(region_id));
    const auto it = std::lower_bound(regions_.begin(), regions_.end(), key,
                                     [](const RegionProfile& r, const std::string& k) { return r.region_id < k; });
    return it != regions_.end() && it->region_id == key ? &*it : nullptr;
}

const RegionProfile& RegionDatabase::lookup(std::string_view region_id) const {
    if (const RegionProfile* r = find(region_id)) {
        return *r;
    }
    std::string ids;
    for (const auto& r : regions_) {
        ids += (ids.empty() ? "" : ", ") + r.region_id;
    }
    throw Error(ErrorCode::kUnknownRegion, "unknown region '" + std::string(region_id) + "'; available: " + ids);
}

std::string RegionDatabase::detect(const DetectionSignals& signals) const {
    const auto known = [&](std::string_view id) -> std::optional<std::string> {
        if (const RegionProfile* r = find(id)) {
            return r->region_id;
        }
        return std::nullopt;
    };
    if (signals.explicit_override) {
        if (auto id = known(*signals.explicit_override)) {
            return *id;
        }
    }
    for (const auto name : kCloudRegionVariables) {
        const auto it = signals.cloud_env.find(std::string(name));
        if (it == signals.cloud_env.end()) {
            continue;
        }
        if (const auto region = match_cloud_region(it->second)) {
            if (auto id = known(*region)) {
                return *id;
            }
        }
    }
    if (signals.timezone) {
        if (const auto region = match_timezone(*signals.timezone)) {
            if (auto id = known(*region)) {
                return *id;
            }
        }
    }
    if (signals.locale) {
        if (const auto country = locale_country(*signals.locale)) {
            if (auto id = known(*country)) {
                return *id;
            }
        }
    }
    return std::string(kGlobalRegionId);
}

const RegionProfile& lookup(std::string_view region_id) { return RegionDatabase::shipped().lookup(region_id); }

std::vector<RegionProfile> list_regions() {
    const auto all = RegionDatabase::shipped().list();
    return {all.begin(), all.end()};
}

std::string detect_region(const DetectionSignals& signals) { return RegionDatabase::shipped().detect(signals); }

void write_region_csv(std::ostream& out, std::span<const RegionProfile> regions) {
    out << kRegionCsvHeader << '\n';
    for (const auto& r : regions) {
        out << r.region_id << ',' << r.display_name << ',' << detail::format_double(r.water_intensity) << ','
            << detail::format_double(r.carbon_intensity) << ',' << r.provenance << '\n';
    }
}

}  // namespace ecoprof
