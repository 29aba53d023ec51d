// Copyright 2026 The uavsec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uavsec/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include "uavsec/errors.hpp"

namespace uavsec::cli {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

struct Quantity {
    double value = 0.0;
    std::string unit;
};

Quantity parse_quantity(std::string_view text, std::string_view field) {
    text = trim(text);
    Quantity q;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, q.value);
    if (ec != std::errc() || !std::isfinite(q.value))
        throw ConfigError(std::string(field) + ": not a number: '" + std::string(text) + "'");
    q.unit = std::string(trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr))));
    return q;
}

double to_watts(const Quantity& q, std::string_view field) {
    double w = 0.0;
    if (q.unit == "dBm") w = dbm_to_watts(q.value);
    else if (q.unit.empty() || q.unit == "W") w = q.value;
    else throw ConfigError(std::string(field) + ": unit '" + q.unit + "' not allowed (use dBm or W)");
    if (!(w > 0.0) || !std::isfinite(w))
        throw ConfigError(std::string(field) + ": power must be positive");
    return w;
}

double to_linear(const Quantity& q, std::string_view field) {
    double v = 0.0;
    if (q.unit == "dB") v = db_to_linear(q.value);
    else if (q.unit.empty()) v = q.value;
    else throw ConfigError(std::string(field) + ": unit '" + q.unit + "' not allowed (use dB or linear)");
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string(field) + ": ratio must be positive");
    return v;
}

int parse_count(std::string_view text, std::string_view field) {
    const Quantity q = parse_quantity(text, field);
    if (!q.unit.empty())
        throw ConfigError(std::string(field) + ": counts take no unit, got '" + q.unit + "'");
    if (q.value != std::floor(q.value) || q.value < 0 || q.value > 1e6)
        throw ConfigError(std::string(field) + ": expected a non-negative integer");
    return static_cast<int>(q.value);
}

/// Display value of one sweep token.
double display_value(const Quantity& q, SweepAxis axis, std::string_view field) {
    switch (axis) {
        case SweepAxis::P0:
        case SweepAxis::Sigma2:
            return q.unit == "dBm" ? q.value : watts_to_dbm(to_watts(q, field));
        case SweepAxis::Gamma:
            return q.unit == "dB" ? q.value : linear_to_db(to_linear(q, field));
        case SweepAxis::W:
            if (!q.unit.empty() && q.unit != "Hz")
                throw ConfigError(std::string(field) + ": unit '" + q.unit + "' not allowed (use Hz)");
            return q.value;
        case SweepAxis::Alpha:
            if (!q.unit.empty())
                throw ConfigError(std::string(field) + ": axis alpha takes no unit, got '" + q.unit + "'");
            return q.value;
        default:
            if (!q.unit.empty())
                throw ConfigError(std::string(field) + ": axis " + std::string(to_string(axis)) +
                                  " takes no unit, got '" + q.unit + "'");
            if (q.value != std::floor(q.value))
                throw ConfigError(std::string(field) + ": axis " + std::string(to_string(axis)) +
                                  " takes integer counts, got " + std::to_string(q.value));
            return q.value;
    }
}

std::string as_text(const json& v, std::string_view field) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
        return std::string(buf, ptr);
    }
    throw ConfigError(std::string(field) + ": expected a number or a string");
}

Interval interval_from(const json& v, std::string_view field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(std::string(field) + ": expected [lo, hi]");
    return {v[0].get<double>(), v[1].get<double>()};
}

template <typename Parse>
auto scheme_list(const json& v, std::string_view field, Parse parse) {
    using Scheme = typename decltype(parse(std::string_view{}))::value_type;
    std::vector<Scheme> out;
    const json list = v.is_string() ? json::array({v}) : v;
    if (!list.is_array()) throw ConfigError(std::string(field) + ": expected a list of names");
    for (const json& item : list) {
        if (!item.is_string()) throw ConfigError(std::string(field) + ": expected scheme names");
        const std::string name = item.get<std::string>();
        auto s = parse(name);
        if (!s) throw ConfigError(std::string(field) + ": unknown scheme '" + name + "'");
        out.push_back(*s);
    }
    return out;
}

template <typename Scheme, typename Parse>
std::vector<Scheme> scheme_flags(const std::vector<std::string>& names, std::string_view field,
                                 Parse parse) {
    std::vector<Scheme> out;
    for (const std::string& joined : names)
        for (std::string_view name : split(joined, ',')) {
            auto s = parse(name);
            if (!s) throw ConfigError(std::string(field) + ": unknown scheme '" + std::string(name) + "'");
            out.push_back(*s);
        }
    return out;
}

SweepAxis axis_from(std::string_view name, std::string_view field) {
    auto a = parse_axis(trim(name));
    if (!a) throw ConfigError(std::string(field) + ": unknown sweep axis '" + std::string(name) + "'");
    return *a;
}

void sweep_from_json(const json& j, SweepSpec& sweep) {
    if (!j.is_object()) throw ConfigError("sweep: expected an object");
    for (const auto& [key, v] : j.items()) {
        if (key == "axis") {
            if (!v.is_string()) throw ConfigError("sweep.axis: expected a name");
            sweep.axis = axis_from(v.get<std::string>(), "sweep.axis");
        } else if (key != "values" && key != "quota_schedule") {
            throw ConfigError("sweep." + key + ": unknown key");
        }
    }
    if (j.contains("values")) {
        const json& v = j["values"];
        if (v.is_string()) {
            sweep.values = parse_sweep_values(v.get<std::string>(), sweep.axis);
        } else if (v.is_array()) {
            std::string joined;
            for (const json& item : v) joined += (joined.empty() ? "" : ",") + as_text(item, "sweep.values");
            sweep.values = parse_sweep_values(joined, sweep.axis);
        } else {
            throw ConfigError("sweep.values: expected a list or a string");
        }
    }
    if (j.contains("quota_schedule")) {
        const json& v = j["quota_schedule"];
        sweep.quota_schedule.clear();
        if (v.is_string()) {
            sweep.quota_schedule = parse_int_list(v.get<std::string>(), "sweep.quota_schedule");
        } else if (v.is_array()) {
            for (const json& item : v)
                sweep.quota_schedule.push_back(parse_count(as_text(item, "sweep.quota_schedule"),
                                                           "sweep.quota_schedule"));
        } else {
            throw ConfigError("sweep.quota_schedule: expected a list");
        }
    }
}

}  // namespace

double parse_power(std::string_view text, std::string_view field) {
    return to_watts(parse_quantity(text, field), field);
}

double parse_ratio(std::string_view text, std::string_view field) {
    return to_linear(parse_quantity(text, field), field);
}

std::vector<int> parse_int_list(std::string_view text, std::string_view field) {
    std::vector<int> out;
    for (std::string_view tok : split(text, ',')) out.push_back(parse_count(tok, field));
    return out;
}

std::vector<double> parse_sweep_values(std::string_view text, SweepAxis axis, std::string_view field) {
    if (axis == SweepAxis::None) throw ConfigError(std::string(field) + ": no sweep axis given");
    std::vector<std::string_view> tokens = split(text, ',');
    if (tokens.empty() || (tokens.size() == 1 && tokens[0].empty()))
        throw ConfigError(std::string(field) + ": empty list");

    // "lo..hi"
    if (tokens.size() == 1 && tokens[0].find("..") != std::string_view::npos) {
        const std::size_t dots = tokens[0].find("..");
        Quantity lo = parse_quantity(tokens[0].substr(0, dots), field);
        const Quantity hi = parse_quantity(tokens[0].substr(dots + 2), field);
        if (lo.unit.empty()) lo.unit = hi.unit;
        if (lo.unit != hi.unit) throw ConfigError(std::string(field) + ": mixed units in range");
        if (hi.value < lo.value) throw ConfigError(std::string(field) + ": empty range");
        std::vector<double> out;
        for (double v = lo.value; v <= hi.value + 1e-9; v += 1.0)
            out.push_back(display_value({v, lo.unit}, axis, field));
        return out;
    }

    std::vector<Quantity> items;
    std::optional<std::size_t> ellipsis;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (tokens[t] == "...") {
            if (ellipsis || t < 2 || t + 1 != tokens.size() - 1)
                throw ConfigError(std::string(field) + ": '...' must follow two values and precede the last");
            ellipsis = items.size();
            continue;
        }
        items.push_back(parse_quantity(tokens[t], field));
    }
    const std::string trailing = items.back().unit;
    for (Quantity& q : items) {
        if (q.unit.empty()) q.unit = trailing;
        if (q.unit != trailing) throw ConfigError(std::string(field) + ": mixed units in list");
    }
    if (ellipsis) {
        const std::size_t k = *ellipsis;
        const double a = items[k - 2].value;
        const double step = items[k - 1].value - a;
        const double end = items[k].value;
        if (!(step > 0.0) || end < items[k - 1].value)
            throw ConfigError(std::string(field) + ": '...' needs an increasing progression");
        std::vector<Quantity> expanded(items.begin(), items.begin() + static_cast<long>(k - 2));
        for (long i = 0;; ++i) {
            const double v = a + static_cast<double>(i) * step;
            if (v > end + 1e-9 * std::abs(step)) break;
            expanded.push_back({v, trailing});
        }
        if (std::abs(expanded.back().value - end) > 1e-9 * std::abs(step))
            throw ConfigError(std::string(field) + ": last value is not on the progression");
        expanded.back().value = end;
        items = std::move(expanded);
    }
    std::vector<double> out;
    for (const Quantity& q : items) out.push_back(display_value(q, axis, field));
    return out;
}

SweepSpec parse_sweep_expr(std::string_view text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("sweep: expected AXIS=VALUES, e.g. M=2..7");
    SweepSpec spec;
    spec.axis = axis_from(text.substr(0, eq), "sweep");
    if (spec.axis == SweepAxis::None) throw ConfigError("sweep: axis must not be none");
    spec.values = parse_sweep_values(text.substr(eq + 1), spec.axis, "sweep");
    return spec;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    if (j.is_null()) return c;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    DeploymentConfig& d = c.deployment;
    for (const auto& [key, v] : j.items()) {
        if (key == "N") d.num_uts = parse_count(as_text(v, key), key);
        else if (key == "M") d.num_urs = parse_count(as_text(v, key), key);
        else if (key == "S" || key == "R") d.num_ues = parse_count(as_text(v, key), key);
        else if (key == "Q") d.quota = parse_count(as_text(v, key), key);
        else if (key == "P0") d.params.power_budget = parse_power(as_text(v, key), key);
        else if (key == "sigma2") d.params.noise_power = parse_power(as_text(v, key), key);
        else if (key == "gamma") d.params.snr_threshold = parse_ratio(as_text(v, key), key);
        else if (key == "alpha") d.params.path_loss_exponent = parse_ratio(as_text(v, key), key);
        else if (key == "W") {
            const Quantity q = parse_quantity(as_text(v, key), key);
            if (!q.unit.empty() && q.unit != "Hz") throw ConfigError("W: unit '" + q.unit + "' not allowed (use Hz)");
            d.params.bandwidth = q.value;
        } else if (key == "region") {
            if (!v.is_object()) throw ConfigError("region: expected an object");
            for (const auto& [rk, rv] : v.items()) {
                const std::string f = "region." + rk;
                if (rk == "x") d.region.x = interval_from(rv, f);
                else if (rk == "y") d.region.y = interval_from(rv, f);
                else if (rk == "ut_z") d.region.ut_z = interval_from(rv, f);
                else if (rk == "ur_z") d.region.ur_z = interval_from(rv, f);
                else if (rk == "ue_z") d.region.ue_z = interval_from(rv, f);
                else throw ConfigError(f + ": unknown key");
            }
        } else if (key == "repetitions") {
            c.repetitions = parse_count(as_text(v, key), key);
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
            c.master_seed = v.get<std::uint64_t>();
        } else if (key == "threads") {
            c.threads = parse_count(as_text(v, key), key);
        } else if (key == "dcs_max_q") {
            c.dcs_max_q = parse_count(as_text(v, key), key);
        } else if (key == "delta") {
            if (!v.is_number()) throw ConfigError("delta: expected a number");
            c.matching.delta = v.get<double>();
        } else if (key == "stage1") {
            c.stage1 = scheme_list(v, key, parse_stage1);
        } else if (key == "stage2") {
            c.stage2 = scheme_list(v, key, parse_stage2);
        } else if (key == "sweep") {
            sweep_from_json(v, c.sweep);
        } else {
            throw ConfigError(key + ": unknown key");
        }
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    const DeploymentConfig& d = c.deployment;
    json j;
    j["N"] = d.num_uts;
    j["M"] = d.num_urs;
    j["S"] = d.num_ues;
    j["Q"] = d.quota;
    j["P0"] = d.params.power_budget;
    j["sigma2"] = d.params.noise_power;
    j["gamma"] = d.params.snr_threshold;
    j["alpha"] = d.params.path_loss_exponent;
    j["W"] = d.params.bandwidth;
    auto iv = [](const Interval& i) { return json::array({i.lo, i.hi}); };
    j["region"] = {{"x", iv(d.region.x)},       {"y", iv(d.region.y)},
                   {"ut_z", iv(d.region.ut_z)}, {"ur_z", iv(d.region.ur_z)},
                   {"ue_z", iv(d.region.ue_z)}};
    j["repetitions"] = c.repetitions;
    j["seed"] = c.master_seed;
    j["threads"] = c.threads;
    j["dcs_max_q"] = c.dcs_max_q;
    j["delta"] = c.matching.delta;
    j["stage1"] = json::array();
    for (Stage1Scheme s : c.stage1) j["stage1"].push_back(std::string(to_string(s)));
    j["stage2"] = json::array();
    for (Stage2Scheme s : c.stage2) j["stage2"].push_back(std::string(to_string(s)));
    if (c.sweep.axis != SweepAxis::None) {
        // Display units carried explicitly so the file parses back unchanged.
        std::string unit;
        if (c.sweep.axis == SweepAxis::P0 || c.sweep.axis == SweepAxis::Sigma2) unit = "dBm";
        if (c.sweep.axis == SweepAxis::Gamma) unit = "dB";
        json values = json::array();
        for (double v : c.sweep.values) {
            char buf[64];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            values.push_back(std::string(buf, ptr) + unit);
        }
        j["sweep"] = {{"axis", std::string(to_string(c.sweep.axis))}, {"values", values}};
        if (!c.sweep.quota_schedule.empty()) j["sweep"]["quota_schedule"] = c.sweep.quota_schedule;
    }
    return j;
}

ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file, const Flags& f) {
    json j = json::object();
    if (file) {
        std::ifstream in(*file);
        if (!in) throw IoError("cannot read config file " + file->string());
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config: " + file->string() + ": " + e.what());
        }
    }
    ExperimentConfig c = config_from_json(j);
    DeploymentConfig& d = c.deployment;
    if (f.num_uts) d.num_uts = parse_count(*f.num_uts, "N");
    if (f.num_urs) d.num_urs = parse_count(*f.num_urs, "M");
    if (f.num_ues) d.num_ues = parse_count(*f.num_ues, "S");
    if (f.quota) d.quota = parse_count(*f.quota, "Q");
    if (f.power) d.params.power_budget = parse_power(*f.power, "P0");
    if (f.noise) d.params.noise_power = parse_power(*f.noise, "sigma2");
    if (f.threshold) d.params.snr_threshold = parse_ratio(*f.threshold, "gamma");
    if (f.alpha) d.params.path_loss_exponent = parse_ratio(*f.alpha, "alpha");
    if (f.bandwidth) {
        const Quantity q = parse_quantity(*f.bandwidth, "W");
        if (!q.unit.empty() && q.unit != "Hz") throw ConfigError("W: unit '" + q.unit + "' not allowed (use Hz)");
        d.params.bandwidth = q.value;
    }
    if (f.repetitions) c.repetitions = *f.repetitions;
    if (f.seed) c.master_seed = *f.seed;
    if (f.threads) c.threads = *f.threads;
    if (!f.stage1.empty()) c.stage1 = scheme_flags<Stage1Scheme>(f.stage1, "stage1", parse_stage1);
    if (!f.stage2.empty()) c.stage2 = scheme_flags<Stage2Scheme>(f.stage2, "stage2", parse_stage2);
    if (f.sweep) {
        if (f.axis || f.values) throw ConfigError("sweep: give either --sweep or --axis/--values");
        c.sweep = parse_sweep_expr(*f.sweep);
    }
    if (f.axis) {
        c.sweep.axis = axis_from(*f.axis, "axis");
        c.sweep.values.clear();
        c.sweep.quota_schedule.clear();
    }
    if (f.values) c.sweep.values = parse_sweep_values(*f.values, c.sweep.axis, "values");
    if (f.quota_schedule) c.sweep.quota_schedule = parse_int_list(*f.quota_schedule, "quota_schedule");
    c.validate();
    return c;
}

}  // namespace uavsec::cli
