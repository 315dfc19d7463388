#include "hydro/date.hpp"

#include <charconv>
#include <cstdio>

#include "hydro/errors.hpp"

namespace hydro {

namespace {

using namespace std::chrono;

year_month_day ymd(sys_days d) { return year_month_day{d}; }

template <typename T>
bool parse_field(std::string_view text, T& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

constexpr int kCumulativeLeapYearDays[12] = {0, 31, 60, 91, 121, 152, 182, 213, 244, 274, 305, 335};

}  // namespace

Date::Date(int y, unsigned m, unsigned d) {
    std::chrono::year_month_day value{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!value.ok()) {
        throw ParseError("invalid calendar date " + std::to_string(y) + "-" + std::to_string(m) +
                         "-" + std::to_string(d));
    }
    days_ = std::chrono::sys_days{value};
}

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ParseError("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (!parse_field(text.substr(0, 4), y) || !parse_field(text.substr(5, 2), m) ||
        !parse_field(text.substr(8, 2), d)) {
        throw ParseError("malformed date '" + std::string(text) + "'");
    }
    return Date(y, m, d);
}

int Date::year() const { return static_cast<int>(ymd(days_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(ymd(days_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(ymd(days_).day()); }

bool Date::is_leap_year() const { return ymd(days_).year().is_leap(); }

int Date::day_of_year() const {
    const auto v = ymd(days_);
    return kCumulativeLeapYearDays[static_cast<unsigned>(v.month()) - 1] +
           static_cast<int>(static_cast<unsigned>(v.day()));
}

int Date::ordinal_day() const {
    const auto v = ymd(days_);
    const std::chrono::sys_days jan1{v.year() / std::chrono::January / 1};
    return static_cast<int>((days_ - jan1).count()) + 1;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

}  // namespace hydro
