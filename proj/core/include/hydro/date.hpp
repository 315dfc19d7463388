#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace hydro {

/// Calendar date in the proleptic Gregorian calendar, stored as a day count.
class Date {
public:
    constexpr Date() = default;
    Date(int year, unsigned month, unsigned day);
    explicit constexpr Date(std::chrono::sys_days days) : days_(days) {}

    /// Parses `YYYY-MM-DD`. Throws ParseError on malformed or invalid dates.
    static Date parse(std::string_view text);

    int year() const;
    unsigned month() const;
    unsigned day() const;

    /// Seasonal slot in 1..366 on a leap-year calendar: Feb 29 is slot 60 and
    /// Mar 1 is always slot 61, so a slot names the same month/day every year.
    int day_of_year() const;

    /// Conventional ordinal day within the year (1..365 or 1..366).
    int ordinal_day() const;

    bool is_leap_year() const;

    std::string to_string() const;

    Date operator+(long long days) const { return Date(days_ + std::chrono::days(days)); }
    Date operator-(long long days) const { return Date(days_ - std::chrono::days(days)); }
    long long operator-(const Date& other) const { return (days_ - other.days_).count(); }

    constexpr auto operator<=>(const Date&) const = default;

    std::chrono::sys_days sys_days() const { return days_; }

private:
    std::chrono::sys_days days_{};
};

/// Number of seasonal slots returned by Date::day_of_year().
inline constexpr int kDaysPerYearSlots = 366;
/// Seasonal slot of Feb 29.
inline constexpr int kLeapDaySlot = 60;

}  // namespace hydro
