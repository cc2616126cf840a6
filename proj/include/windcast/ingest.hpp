#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/timeutil.hpp"

namespace windcast::ingest {

// One 10-minute SCADA row. Only power is ever used as a learning target;
// the remaining measured channels are parsed and carried through untouched.
struct ScadaRecord {
    std::string turbine_id;
    TimePoint timestamp = 0;
    double power_kw = 0.0;
    double wind_speed_ms = 0.0;
    double nacelle_dir_deg = 0.0;
    double wind_dir_deg = 0.0;
    double temp_c = 0.0;
};

// One NWP forecast row: issued at issue_time, valid at valid_time.
struct NwpRecord {
    TimePoint issue_time = 0;
    TimePoint valid_time = 0;
    std::int64_t lead_minutes = 0;  // valid - issue, always in [0, 72*60]
    double wind_speed_ms = 0.0;
    double wind_gust_ms = 0.0;
    double temp_c = 0.0;
    double wind_dir_deg = 0.0;
    double radiance_wm2 = 0.0;
    double precip_mm = 0.0;
};

inline constexpr std::int64_t kMaxLeadMinutes = 72 * 60;

inline constexpr const char* kScadaHeader =
    "turbine_id,timestamp,power_kw,wind_speed_ms,nacelle_dir_deg,wind_dir_deg,temp_c";
inline constexpr const char* kNwpHeader =
    "issue_time,valid_time,wind_speed_ms,wind_gust_ms,temp_c,wind_dir_deg,radiance_wm2,precip_mm";

struct RowIssue {
    std::size_t line = 0;  // 1-based line number in the stream
    std::string message;
};

template <typename Record>
struct ParseResult {
    std::vector<Record> records;
    std::vector<RowIssue> issues;
    std::size_t data_rows = 0;  // non-empty rows after the header
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

// Malformed rows are collected, not fatal -- unless they exceed 10% of the
// data rows, in which case the file itself is considered broken and the
// error names the first offenders.
template <typename Record>
void enforce_error_budget(const ParseResult<Record>& r, const char* what) {
    if (r.data_rows == 0 || r.issues.empty()) return;
    if (static_cast<double>(r.issues.size()) <= 0.10 * static_cast<double>(r.data_rows)) return;
    std::ostringstream os;
    os << what << ": " << r.issues.size() << " of " << r.data_rows
       << " rows malformed (>10%); first offenders:";
    const std::size_t n = std::min<std::size_t>(r.issues.size(), 20);
    for (std::size_t i = 0; i < n; ++i)
        os << "\n  line " << r.issues[i].line << ": " << r.issues[i].message;
    throw DataError(os.str());
}

}  // namespace detail

// Parses the documented SCADA format. Returns records sorted by
// (turbine_id, timestamp) plus per-row diagnostics for malformed lines.
inline ParseResult<ScadaRecord> parse_scada(std::istream& in) {
    ParseResult<ScadaRecord> result;
    std::string line;
    if (!std::getline(in, line)) throw DataError("scada: empty stream, header missing");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kScadaHeader)
        throw DataError("scada: bad header, expected '" + std::string(kScadaHeader) + "'");

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        ++result.data_rows;
        const auto f = detail::split_csv(line);
        if (f.size() != 7) {
            result.issues.push_back({lineno, "expected 7 fields, got " + std::to_string(f.size())});
            continue;
        }
        ScadaRecord rec;
        rec.turbine_id = f[0];
        if (rec.turbine_id.empty()) {
            result.issues.push_back({lineno, "empty turbine_id"});
            continue;
        }
        if (!try_parse_iso8601(f[1], rec.timestamp)) {
            result.issues.push_back({lineno, "bad timestamp '" + f[1] + "'"});
            continue;
        }
        if (!detail::parse_double(f[2], rec.power_kw) ||
            !detail::parse_double(f[3], rec.wind_speed_ms) ||
            !detail::parse_double(f[4], rec.nacelle_dir_deg) ||
            !detail::parse_double(f[5], rec.wind_dir_deg) ||
            !detail::parse_double(f[6], rec.temp_c)) {
            result.issues.push_back({lineno, "unparseable numeric field"});
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    detail::enforce_error_budget(result, "scada");

    std::stable_sort(result.records.begin(), result.records.end(),
                     [](const ScadaRecord& a, const ScadaRecord& b) {
                         if (a.turbine_id != b.turbine_id) return a.turbine_id < b.turbine_id;
                         return a.timestamp < b.timestamp;
                     });
    for (std::size_t i = 1; i < result.records.size(); ++i) {
        const auto& p = result.records[i - 1];
        const auto& c = result.records[i];
        if (p.turbine_id == c.turbine_id && p.timestamp == c.timestamp)
            throw DataError("scada: duplicate timestamp " + format_iso8601(c.timestamp) +
                            " for turbine " + c.turbine_id);
    }
    return result;
}

inline ParseResult<NwpRecord> parse_nwp(std::istream& in) {
    ParseResult<NwpRecord> result;
    std::string line;
    if (!std::getline(in, line)) throw DataError("nwp: empty stream, header missing");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kNwpHeader)
        throw DataError("nwp: bad header, expected '" + std::string(kNwpHeader) + "'");

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        ++result.data_rows;
        const auto f = detail::split_csv(line);
        if (f.size() != 8) {
            result.issues.push_back({lineno, "expected 8 fields, got " + std::to_string(f.size())});
            continue;
        }
        NwpRecord rec;
        if (!try_parse_iso8601(f[0], rec.issue_time)) {
            result.issues.push_back({lineno, "bad issue_time '" + f[0] + "'"});
            continue;
        }
        if (!try_parse_iso8601(f[1], rec.valid_time)) {
            result.issues.push_back({lineno, "bad valid_time '" + f[1] + "'"});
            continue;
        }
        rec.lead_minutes = (rec.valid_time - rec.issue_time) / kSecondsPerMinute;
        if (rec.lead_minutes < 0 || rec.lead_minutes > kMaxLeadMinutes) {
            result.issues.push_back({lineno, "lead time out of range"});
            continue;
        }
        if (!detail::parse_double(f[2], rec.wind_speed_ms) ||
            !detail::parse_double(f[3], rec.wind_gust_ms) ||
            !detail::parse_double(f[4], rec.temp_c) ||
            !detail::parse_double(f[5], rec.wind_dir_deg) ||
            !detail::parse_double(f[6], rec.radiance_wm2) ||
            !detail::parse_double(f[7], rec.precip_mm)) {
            result.issues.push_back({lineno, "unparseable numeric field"});
            continue;
        }
        result.records.push_back(rec);
    }
    detail::enforce_error_budget(result, "nwp");

    std::stable_sort(result.records.begin(), result.records.end(),
                     [](const NwpRecord& a, const NwpRecord& b) {
                         if (a.issue_time != b.issue_time) return a.issue_time < b.issue_time;
                         return a.valid_time < b.valid_time;
                     });
    return result;
}

namespace detail {

inline void put_num(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    os << buf;
}

}  // namespace detail

inline void write_scada(std::ostream& os, const std::vector<ScadaRecord>& records) {
    os << kScadaHeader << "\n";
    for (const auto& r : records) {
        os << r.turbine_id << ',' << format_iso8601(r.timestamp) << ',';
        detail::put_num(os, r.power_kw);
        os << ',';
        detail::put_num(os, r.wind_speed_ms);
        os << ',';
        detail::put_num(os, r.nacelle_dir_deg);
        os << ',';
        detail::put_num(os, r.wind_dir_deg);
        os << ',';
        detail::put_num(os, r.temp_c);
        os << '\n';
    }
}

inline void write_nwp(std::ostream& os, const std::vector<NwpRecord>& records) {
    os << kNwpHeader << "\n";
    for (const auto& r : records) {
        os << format_iso8601(r.issue_time) << ',' << format_iso8601(r.valid_time) << ',';
        detail::put_num(os, r.wind_speed_ms);
        os << ',';
        detail::put_num(os, r.wind_gust_ms);
        os << ',';
        detail::put_num(os, r.temp_c);
        os << ',';
        detail::put_num(os, r.wind_dir_deg);
        os << ',';
        detail::put_num(os, r.radiance_wm2);
        os << ',';
        detail::put_num(os, r.precip_mm);
        os << '\n';
    }
}

}  // namespace windcast::ingest
