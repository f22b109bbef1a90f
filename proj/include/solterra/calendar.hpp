#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "solterra/errors.hpp"

namespace solterra::ts {

/// Civil (proleptic Gregorian) calendar date. No time of day, no timezone.
using Date = std::chrono::year_month_day;

inline Date make_date(int year, unsigned month, unsigned day) {
    Date d{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!d.ok())
        throw Error(Errc::bad_value, "invalid calendar date " + std::to_string(year) + "-" +
                                         std::to_string(month) + "-" + std::to_string(day));
    return d;
}

inline std::chrono::sys_days to_days(const Date& d) { return std::chrono::sys_days(d); }

inline unsigned month_of(const Date& d) { return static_cast<unsigned>(d.month()); }
inline int year_of(const Date& d) { return static_cast<int>(d.year()); }
inline unsigned day_of(const Date& d) { return static_cast<unsigned>(d.day()); }

/// Parses "YYYY-MM-DD". Returns nullopt on any syntactic or calendar violation.
inline std::optional<Date> parse_date(std::string_view text) {
    if (text.size() < 8) return std::nullopt;
    auto field = [&](std::size_t from, std::size_t to, int& out) {
        auto [ptr, ec] = std::from_chars(text.data() + from, text.data() + to, out);
        return ec == std::errc{} && ptr == text.data() + to;
    };
    // fixed layout: 4-2-2 with dashes
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!field(0, 4, y) || !field(5, 7, m) || !field(8, 10, d)) return std::nullopt;
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_of(d), month_of(d), day_of(d));
    return buf;
}

inline const char* month_abbrev(unsigned month) {
    static const char* names[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    return names[(month - 1) % 12];
}

/// Closed interval of civil dates.
struct DateInterval {
    Date start;
    Date end;

    bool contains(const Date& d) const { return !(d < start) && !(end < d); }
};

}  // namespace solterra::ts
