#include <sstream>

#include "doctest.h"
#include "hydro/date.hpp"
#include "hydro/errors.hpp"
#include "hydro/series.hpp"
#include "test_support.hpp"

using namespace hydro;
using hydro::testing::make_series;
using hydro::testing::random_series;

TEST_CASE("dates parse and use seasonal slots") {
    CHECK(Date::parse("2012-02-29").day_of_year() == 60);
    CHECK(Date::parse("2012-03-01").day_of_year() == 61);
    CHECK(Date::parse("2013-03-01").day_of_year() == 61);
    CHECK(Date::parse("2013-02-28").day_of_year() == 59);
    CHECK(Date::parse("2013-12-31").day_of_year() == 366);
    CHECK(Date::parse("2013-01-01").day_of_year() == 1);
    CHECK(Date::parse("2013-12-31").ordinal_day() == 365);
    CHECK(Date::parse("2012-12-31").ordinal_day() == 366);
    CHECK(Date::parse("1997-09-30").to_string() == "1997-09-30");
    CHECK(Date::parse("2000-01-01") - Date::parse("1999-12-31") == 1);
    CHECK_THROWS_AS(Date::parse("2013-02-29"), ParseError);
    CHECK_THROWS_AS(Date::parse("2013-2-01"), ParseError);
    CHECK_THROWS_AS(Date::parse("abcd-ef-gh"), ParseError);
}

TEST_CASE("the watershed record spans 31,046 days") {
    CHECK(Date::parse("2013-12-31") - Date::parse("1929-01-01") + 1 == 31046);
}

TEST_CASE("ingest_csv builds the dense tensor") {
    std::istringstream in(
        "date,subbasin,stream_flow,soil_water,precipitation,min_temperature,max_temperature\n"
        "2000-01-02,1,6,7,8,9,10\n"
        "2000-01-01,1,1,2,3,4,5e0\n");
    const auto s = read_csv(in);
    CHECK(s.days() == 2);
    CHECK(s.subbasin_count() == 1);
    CHECK(s.feature_count() == 5);
    CHECK(s.start_date() == Date(2000, 1, 1));
    CHECK(s.at(0, 0, 4) == 5.0);
    CHECK(s.at(1, 0, 0) == 6.0);
}

TEST_CASE("ingest_csv orders subbasins and checks the grid") {
    SUBCASE("sorted by id") {
        std::istringstream in("date,subbasin,a\n2000-01-01,7,1\n2000-01-01,3,2\n");
        const auto s = read_csv(in);
        CHECK(s.subbasin_ids() == std::vector<int>{3, 7});
        CHECK(s.at(0, 0, 0) == 2.0);
    }
    SUBCASE("missing row") {
        std::istringstream in("date,subbasin,a\n2000-01-01,1,1\n2000-01-01,2,1\n2000-01-02,1,1\n");
        try {
            (void)read_csv(in);
            FAIL("expected GridError");
        } catch (const GridError& e) {
            CHECK(std::string(e.what()).find("incomplete grid") != std::string::npos);
            CHECK(std::string(e.what()).find("2000-01-02, 2") != std::string::npos);
        }
    }
    SUBCASE("missing day") {
        std::istringstream in("date,subbasin,a\n2000-01-01,1,1\n2000-01-03,1,1\n");
        CHECK_THROWS_AS(read_csv(in), GridError);
    }
    SUBCASE("duplicate key") {
        std::istringstream in("date,subbasin,a\n2000-01-01,1,1\n2000-01-01,1,2\n");
        try {
            (void)read_csv(in);
            FAIL("expected GridError");
        } catch (const GridError& e) {
            CHECK(std::string(e.what()).find("duplicate key") != std::string::npos);
        }
    }
}

TEST_CASE("ingest_csv reports row-level errors with line numbers") {
    std::istringstream bad_number("date,subbasin,a\n2000-01-01,1,1\n2000-01-02,1,x1\n");
    try {
        (void)read_csv(bad_number);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream bad_date("date,subbasin,a\n2000-13-01,1,1\n");
    try {
        (void)read_csv(bad_date);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream nan_value("date,subbasin,a\n2000-01-01,1,nan\n");
    CHECK_THROWS_AS(read_csv(nan_value), ParseError);
}

TEST_CASE("schema remaps column names") {
    std::istringstream in("Day,SUB,SW\n2000-01-01,4,2.5\n");
    const auto s = read_csv(in, CsvSchema::parse("date=Day,subbasin=SUB,soil_water=SW"));
    CHECK(s.feature_names() == std::vector<std::string>{"soil_water"});
    CHECK(s.subbasin_ids() == std::vector<int>{4});
    CHECK_THROWS_AS(CsvSchema::parse("date"), ConfigError);
}

TEST_CASE("CSV round trip is bit exact") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto s = random_series(seed, Date(1999, 12, 25), 40, {2, 5, 9}, {"a", "b"});
        std::vector<double> v(s.values().begin(), s.values().end());
        v[0] = 1e-300;
        v[1] = -123456789.123456789;
        v[2] = 0.1 + 0.2;
        const SpatioTemporalSeries tweaked(s.start_date(), s.subbasin_ids(), s.feature_names(), v);
        std::stringstream io;
        write_csv(io, tweaked);
        CHECK(read_csv(io) == tweaked);
    }
}

TEST_CASE("split_by_date partitions the day axis") {
    const auto s = make_series(Date(2001, 1, 1), 10, {1, 2}, {"a"},
                               [](std::size_t t, std::size_t sb, std::size_t) { return t * 10.0 + sb; });
    const auto parts = split_by_date(s, {s.date(5), s.date(8)});
    CHECK(parts.train.days() == 6);
    CHECK(parts.val.days() == 3);
    CHECK(parts.test.days() == 1);
    CHECK(parts.val.start_date() == s.date(6));
    CHECK(parts.test.start_date() == s.date(9));

    // Pieces concatenate back to the original.
    std::vector<double> joined;
    for (const auto* p : {&parts.train, &parts.val, &parts.test}) {
        joined.insert(joined.end(), p->values().begin(), p->values().end());
    }
    CHECK(std::equal(joined.begin(), joined.end(), s.values().begin(), s.values().end()));

    CHECK_THROWS_AS(split_by_date(s, {s.date(5), s.date(9)}), RangeError);
    CHECK_THROWS_AS(split_by_date(s, {s.date(6), s.date(5)}), RangeError);
    CHECK_THROWS_AS(split_by_date(s, {s.date(5), s.date(8), s.date(0) - 1}), RangeError);
}

TEST_CASE("water-year split of the 1929-2013 record") {
    const Date start(1929, 1, 1);
    const auto s = make_series(start, 31046, {1}, {"a"}, [](auto t, auto, auto) { return double(t); });
    CHECK(s.end_date() == Date(2013, 12, 31));
    const DateSplit split{Date(1997, 9, 30), Date(2005, 9, 30), Date(1929, 10, 1), Date(2013, 9, 30)};
    const auto parts = split_by_date(s, split);
    CHECK(parts.train.start_date() == Date(1929, 10, 1));
    CHECK(parts.train.end_date() == Date(1997, 9, 30));
    CHECK(parts.val.start_date() == Date(1997, 10, 1));
    CHECK(parts.val.end_date() == Date(2005, 9, 30));
    CHECK(parts.test.start_date() == Date(2005, 10, 1));
    CHECK(parts.test.end_date() == Date(2013, 9, 30));
}

TEST_CASE("select_subbasin slices one subbasin") {
    const auto s = random_series(11, Date(2001, 1, 1), 20, {1, 2, 3}, {"a", "b"});
    const auto one = select_subbasin(s, 2);
    CHECK(one.subbasin_count() == 1);
    CHECK(one.days() == s.days());
    CHECK(one.feature_names() == s.feature_names());
    CHECK(one.at(7, 0, 1) == s.at(7, 1, 1));
    CHECK(select_subbasin(one, 2) == one);
    CHECK_THROWS_AS(select_subbasin(s, 9999), LookupError);

    // Commutes with split_by_date.
    const DateSplit split{s.date(9), s.date(14)};
    const auto a = split_by_date(one, split);
    const auto b = split_by_date(s, split);
    CHECK(a.train == select_subbasin(b.train, 2));
    CHECK(a.val == select_subbasin(b.val, 2));
    CHECK(a.test == select_subbasin(b.test, 2));
}

TEST_CASE("series invariants are enforced") {
    CHECK_THROWS_AS(SpatioTemporalSeries(Date(2000, 1, 1), {1, 1}, {"a"}, {1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(SpatioTemporalSeries(Date(2000, 1, 1), {1}, {"a", "a"}, {1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(SpatioTemporalSeries(Date(2000, 1, 1), {1}, {"a"}, {}), DimensionError);
    CHECK_THROWS_AS(SpatioTemporalSeries(Date(2000, 1, 1), {1}, {"a"}, {std::nan("")}), NumericalError);
}
