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

#include "uavsec/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "uavsec/cli/config.hpp"

namespace uavsec::cli {

namespace {

using nlohmann::json;

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Splits one CSV record; quoted fields may contain commas and "".
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                out.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back();
        } else if (ch != '\r') {
            out.back() += ch;
        }
    }
    if (quoted) throw IoError("csv: unterminated quote");
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

json utility_json(const Utility& u) {
    return u.is_infeasible() ? json(nullptr) : json(u.value());
}

json position_list(const std::vector<Position3D>& ps) {
    json out = json::array();
    for (const Position3D& p : ps) out.push_back({p.x, p.y, p.z});
    return out;
}

}  // namespace

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<OutputRow> make_table(const ExperimentResult& result) {
    std::vector<OutputRow> rows;
    for (const PointResult& p : result.points)
        for (const SchemeSummary& s : p.schemes)
            for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
                const MetricStats& m = s.metrics[k];
                rows.push_back({p.sweep_value, s.scheme.label(), std::string(kMetricNames[k]),
                                m.n > 0 ? m.mean : 0.0, m.n > 1 ? m.stddev : 0.0, m.n});
            }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<OutputRow>& rows, bool timestamp) {
    if (timestamp) out << "# generated " << utc_now() << '\n';
    out << kCsvHeader << '\n';
    for (const OutputRow& r : rows)
        out << number(r.sweep_value) << ',' << csv_escape(r.scheme) << ',' << csv_escape(r.metric)
            << ',' << number(r.mean) << ',' << number(r.std) << ',' << r.n << '\n';
}

std::vector<OutputRow> read_csv(std::istream& in) {
    std::vector<OutputRow> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kCsvHeader && line != std::string(kCsvHeader) + "\r")
                throw IoError("csv: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        const std::vector<std::string> f = split_record(line);
        if (f.size() != 6)
            throw IoError("csv line " + std::to_string(lineno) + ": expected 6 fields");
        OutputRow r;
        r.sweep_value = to_double(f[0], lineno);
        r.scheme = f[1];
        r.metric = f[2];
        r.mean = to_double(f[3], lineno);
        r.std = to_double(f[4], lineno);
        r.n = static_cast<int>(to_double(f[5], lineno));
        rows.push_back(std::move(r));
    }
    if (!header) throw IoError("csv: missing header");
    return rows;
}

json summary_json(const ExperimentResult& result, const ExperimentConfig& config, bool timestamp) {
    json j;
    if (timestamp) j["generated"] = utc_now();
    j["config"] = config_to_json(config);
    j["axis"] = std::string(to_string(result.axis));
    j["points"] = json::array();
    for (const PointResult& p : result.points) {
        json point;
        point["sweep_value"] = p.sweep_value;
        point["N"] = p.deployment.num_uts;
        point["M"] = p.deployment.num_urs;
        point["S"] = p.deployment.num_ues;
        point["Q"] = p.deployment.quota;
        point["schemes"] = json::array();
        for (const SchemeSummary& s : p.schemes) {
            json entry{{"scheme", s.scheme.label()},
                       {"trials", s.trials},
                       {"failed", s.failed},
                       {"sentinel", s.sentinel}};
            for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
                const MetricStats& m = s.metrics[k];
                entry["metrics"][std::string(kMetricNames[k])] = {
                    {"mean", m.mean}, {"std", m.stddev}, {"n", m.n}};
            }
            point["schemes"].push_back(std::move(entry));
        }
        j["points"].push_back(std::move(point));
    }
    return j;
}

json trial_json(const TrialRecord& r) {
    json j;
    j["point"] = r.point_index;
    j["trial"] = r.trial_index;
    j["seed"] = r.seeds.trial;
    j["uts"] = position_list(r.scenario.uts);
    j["urs"] = position_list(r.scenario.urs);
    j["ues"] = position_list(r.scenario.ues);
    if (r.error) j["error"] = *r.error;
    j["wall_seconds"] = r.wall_seconds;
    j["schemes"] = json::array();
    for (const TrialMetrics& m : r.metrics) {
        json s;
        s["scheme"] = m.scheme.label();
        s["matching"] = m.matching;
        json structure = json::array();
        for (UtSet c : m.structure) structure.push_back(c.members());
        s["structure"] = std::move(structure);
        json per_ut = json::array();
        for (const Utility& u : m.per_ut) per_ut.push_back(utility_json(u));
        s["per_ut"] = std::move(per_ut);
        s["total"] = utility_json(m.total);
        s["average"] = m.sentinel ? json(nullptr) : json(m.average);
        s["social_welfare"] = m.social_welfare;
        s["sentinel"] = m.sentinel;
        if (m.error) s["error"] = *m.error;
        s["wall_seconds"] = m.wall_seconds;
        j["schemes"].push_back(std::move(s));
    }
    return j;
}

std::vector<std::filesystem::path> emit_results(const ExperimentResult& result,
                                                const ExperimentConfig& config,
                                                const std::filesystem::path& dir,
                                                const std::string& stem, OutputFormat format,
                                                bool timestamp) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        return out;
    };
    if (format != OutputFormat::Json) {
        const auto path = dir / (stem + ".csv");
        std::ofstream out = open(path);
        write_csv(out, make_table(result), timestamp);
        if (!out.flush()) throw IoError("write failed: " + path.string());
        written.push_back(path);
    }
    if (format != OutputFormat::Csv) {
        const auto path = dir / (stem + ".json");
        std::ofstream out = open(path);
        out << summary_json(result, config, timestamp).dump(2) << '\n';
        if (!out.flush()) throw IoError("write failed: " + path.string());
        written.push_back(path);
    }
    return written;
}

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("UAVSEC_OUTPUT_DIR"); env && *env) return env;
    return std::filesystem::current_path();
}

}  // namespace uavsec::cli
