#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "windcast/common.hpp"

namespace windcast {

// All timestamps are UTC, seconds since the Unix epoch. Local time enters
// only through an explicit fixed UTC offset (diurnal features, bias bins).
using TimePoint = std::int64_t;

inline constexpr std::int64_t kSecondsPerMinute = 60;
inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
};

// Door number 63 of chrono folklore: days <-> {y,m,d} without a table.
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int year, int month) {
    static constexpr int lens[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lens[month - 1];
}

inline TimePoint make_time(int year, int month, int day, int hour = 0, int minute = 0,
                           int second = 0) {
    return days_from_civil(year, month, day) * kSecondsPerDay + hour * kSecondsPerHour +
           minute * kSecondsPerMinute + second;
}

// Floor division keeps pre-1970 instants on the correct civil day.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
    return a - floor_div(a, b) * b;
}

inline CivilDate civil_date_of(TimePoint t) {
    return civil_from_days(floor_div(t, kSecondsPerDay));
}

inline int second_of_day(TimePoint t) {
    return static_cast<int>(floor_mod(t, kSecondsPerDay));
}

// 1-based day of year.
inline int day_of_year(TimePoint t) {
    const CivilDate c = civil_date_of(t);
    return static_cast<int>(floor_div(t, kSecondsPerDay) - days_from_civil(c.year, 1, 1)) + 1;
}

inline TimePoint shift_to_local(TimePoint utc, double tz_offset_hours) {
    return utc + static_cast<std::int64_t>(tz_offset_hours * kSecondsPerHour);
}

// Hour of day including the minute fraction, e.g. 13.25 for 13:15.
inline double hour_of_day(TimePoint t) {
    return static_cast<double>(second_of_day(t)) / kSecondsPerHour;
}

inline std::string format_iso8601(TimePoint t) {
    const CivilDate c = civil_date_of(t);
    const int s = second_of_day(t);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  s / 3600, (s / 60) % 60, s % 60);
    return std::string(buf);
}

// Strict "YYYY-MM-DDTHH:MM:SSZ". Returns false on anything else.
inline bool try_parse_iso8601(std::string_view sv, TimePoint& out) {
    if (sv.size() != 20 || sv[4] != '-' || sv[7] != '-' || sv[10] != 'T' || sv[13] != ':' ||
        sv[16] != ':' || sv[19] != 'Z')
        return false;
    auto num = [&](std::size_t pos, std::size_t len, int& v) {
        v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (sv[i] < '0' || sv[i] > '9') return false;
            v = v * 10 + (sv[i] - '0');
        }
        return true;
    };
    int y, mo, d, h, mi, s;
    if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, h) || !num(14, 2, mi) ||
        !num(17, 2, s))
        return false;
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 || mi > 59 || s > 59)
        return false;
    out = make_time(y, mo, d, h, mi, s);
    return true;
}

inline TimePoint parse_iso8601(const std::string& s) {
    TimePoint t;
    if (!try_parse_iso8601(s, t)) throw InputError("bad ISO-8601 timestamp: '" + s + "'");
    return t;
}

// "YYYY-MM-DD" key of the UTC day an instant falls on; split maps use this.
inline std::string day_key(TimePoint t) {
    const CivilDate c = civil_date_of(t);
    char buf[40];  // sized generously so extreme years cannot truncate
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    return std::string(buf);
}

}  // namespace windcast
