#include <map>

#include "doctest.h"
#include "hydro/errors.hpp"
#include "hydro/reduction.hpp"
#include "test_support.hpp"

using namespace hydro;
using hydro::testing::make_series;
using hydro::testing::random_series;

namespace {

struct OracleWindow {
    std::size_t channel;
    std::size_t first_day;
};

// Slides a w-day window over every multiple of s and files each window
// under the channel whose offset is congruent to its start modulo w.
std::vector<OracleWindow> enumerate_windows(std::size_t T, std::size_t w, std::size_t s) {
    std::vector<OracleWindow> out;
    for (std::size_t d = 0; d + w <= T; d += s) out.push_back({(d % w) / s, d});
    return out;
}

}  // namespace

TEST_CASE("w = 1 is the identity") {
    const auto s = random_series(1, Date(2000, 1, 1), 30, {1, 2}, {"a", "b"});
    const auto r = reduce(s, {1, 1});
    REQUIRE(r.channels.size() == 1);
    CHECK(r.channels[0].length == 30);
    CHECK(std::equal(r.channels[0].values.begin(), r.channels[0].values.end(), s.values().begin()));
}

TEST_CASE("T = 28 examples") {
    const auto s = make_series(Date(2000, 1, 1), 28, {1}, {"a"}, [](auto t, auto, auto) { return double(t); });
    const auto weekly = reduce(s, {7, 7});
    REQUIRE(weekly.channels.size() == 1);
    CHECK(weekly.channels[0].length == 4);
    CHECK(weekly.channels[0].at(1, 0, 0) == doctest::Approx(10.0));  // mean of 7..13

    const auto daily_stride = reduce(s, {7, 1});
    REQUIRE(daily_stride.channels.size() == 7);
    const std::size_t expected[] = {4, 3, 3, 3, 3, 3, 3};
    for (std::size_t c = 0; c < 7; ++c) {
        CHECK(daily_stride.channels[c].length == expected[c]);
        CHECK(daily_stride.channels[c].offset == c);
        CHECK(daily_stride.channels[c].start_date == Date(2000, 1, 1) + static_cast<long long>(c));
    }
}

TEST_CASE("channels match brute-force enumeration") {
    for (std::size_t w = 1; w <= 28; ++w) {
        for (std::size_t s = 1; s <= w; ++s) {
            if (w % s != 0) continue;
            for (std::size_t T : {w, w + 1, 2 * w + 3, std::size_t{200}}) {
                if (T < w || T > 200) continue;
                const auto series = make_series(Date(2000, 1, 1), T, {1}, {"a"},
                                                [](auto t, auto, auto) { return double(t * t % 101); });
                const auto r = reduce(series, {w, s});
                std::map<std::size_t, std::vector<std::size_t>> oracle;
                for (const auto& win : enumerate_windows(T, w, s)) oracle[win.channel].push_back(win.first_day);
                REQUIRE(r.channels.size() == w / s);
                for (const auto& ch : r.channels) {
                    CHECK(ch.offset == ch.id * s);
                    const auto& starts = oracle[ch.id];
                    REQUIRE(ch.length == starts.size());
                    for (std::size_t k = 0; k < ch.length; ++k) {
                        CHECK(ch.first_day(k) == starts[k]);
                        double sum = 0.0;
                        for (std::size_t d = 0; d < w; ++d) sum += series.at(starts[k] + d, 0, 0);
                        CHECK(ch.at(k, 0, 0) == doctest::Approx(sum / w).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("coverage bounds") {
    for (std::size_t w : {2, 6, 12}) {
        for (std::size_t s = 1; s < w; ++s) {
            if (w % s) continue;
            const std::size_t T = 5 * w;
            const auto series = random_series(w + s, Date(2000, 1, 1), T, {1}, {"a"});
            const auto r = reduce(series, {w, s});
            std::size_t covered_days = 0;
            std::vector<bool> covered(T, false);
            for (const auto& ch : r.channels) {
                covered_days += ch.length * w;
                for (std::size_t k = 0; k < ch.length; ++k) {
                    for (std::size_t d = 0; d < w; ++d) covered[ch.first_day(k) + d] = true;
                }
            }
            CHECK(covered_days <= (w / s) * T);
            CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
        }
    }
}

TEST_CASE("reduce rejects bad configs") {
    const auto s = random_series(2, Date(2000, 1, 1), 10, {1}, {"a"});
    CHECK_THROWS_AS(reduce(s, {7, 3}), ConfigError);
    CHECK_THROWS_AS(reduce(s, {14, 7}), RangeError);
    CHECK_THROWS_AS(reduce(s, {0, 1}), ConfigError);
}

TEST_CASE("operation ratio follows the timestep table") {
    CHECK(operation_ratio(1, 1) == Ratio{1, 1});
    CHECK(operation_ratio(7, 1) == Ratio{1, 7});
    CHECK(operation_ratio(7, 7) == Ratio{1, 49});
    CHECK(operation_ratio(14, 1) == Ratio{1, 14});
    CHECK(operation_ratio(14, 14) == Ratio{1, 196});
    CHECK(operation_ratio(28, 1) == Ratio{1, 28});
    CHECK(operation_ratio(28, 28) == Ratio{1, 784});
    CHECK(operation_ratio(28, 28).to_string() == "1/784");
    CHECK(operation_ratio(1, 1).to_string() == "1");
    CHECK_THROWS_AS(operation_ratio(7, 2), ConfigError);
}
