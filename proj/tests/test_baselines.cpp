#include <cmath>
#include <random>

#include "doctest.h"
#include "hydro/baselines.hpp"
#include "hydro/errors.hpp"

using namespace hydro;

TEST_CASE("naive forecast repeats the last observed responses") {
    const WindowSpec spec{3, 2, {"date", "x", "y"}, {"y", "x"}};
    const std::vector<double> window{0.1, 1, 2, 0.2, 3, 4, 0.3, 5, 6};
    const auto f = naive_forecast(window, spec);
    REQUIRE(f.rows() == 2);
    REQUIRE(f.cols() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(f(j, 0) == 6.0);
        CHECK(f(j, 1) == 5.0);
    }
    const WindowSpec missing{3, 2, {"date", "x"}, {"y"}};
    CHECK_THROWS_AS(naive_forecast(std::vector<double>(6, 0.0), missing), ConfigError);
}

TEST_CASE("arima order parsing") {
    const auto o = ArimaOrder::parse("3,1,0");
    CHECK(o.p == 3);
    CHECK(o.d == 1);
    CHECK(o.to_string() == "3,1,0");
    CHECK_THROWS_AS(ArimaOrder::parse("3,1"), ConfigError);
    CHECK_THROWS_AS(ArimaOrder::parse("2,0,1"), ConfigError);
    CHECK(arima_min_history(ArimaOrder{}) == 16);
}

TEST_CASE("AR(1) coefficient recovery") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> e(0.0, 1.0);
    std::vector<double> x{0.0};
    for (int t = 1; t < 1000; ++t) x.push_back(0.8 * x.back() + e(rng));
    const auto m = arima_fit(x, {1, 0, 0});
    CHECK(std::abs(m.phi[0] - 0.8) <= 0.05);
}

TEST_CASE("noise-free AR(2) is recovered exactly") {
    std::vector<double> x{1.0, 0.5};
    for (int t = 2; t < 40; ++t) x.push_back(0.5 * x[t - 1] - 0.3 * x[t - 2] + 2.0);
    const auto m = arima_fit(x, {2, 0, 0});
    CHECK(std::abs(m.phi[0] - 0.5) < 1e-6);
    CHECK(std::abs(m.phi[1] + 0.3) < 1e-6);
    CHECK(std::abs(m.intercept - 2.0) < 1e-6);
}

TEST_CASE("closed-form forecasts") {
    SUBCASE("AR(1) without intercept decays geometrically") {
        const ArimaModel m{{1, 0, 0}, {0.6}, 0.0};
        const std::vector<double> h{3.0, 2.0};
        const auto f = arima_forecast(m, h, 4);
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(f[k] - 2.0 * std::pow(0.6, k + 1)) < 1e-12);
    }
    SUBCASE("random walk with drift under d = 1") {
        const ArimaModel m{{1, 1, 0}, {0.0}, 0.5};
        const std::vector<double> h{1.0, 4.0, 10.0};
        const auto f = arima_forecast(m, h, 3);
        for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(f[k] - (10.0 + 0.5 * static_cast<double>(k + 1))) < 1e-12);
    }
    SUBCASE("linear trend with d = 1 continues") {
        std::vector<double> h;
        for (int t = 0; t < 20; ++t) h.push_back(3.0 + 2.0 * t);
        const auto m = arima_fit(h, {2, 1, 0});
        CHECK(m.phi[0] == 0.0);
        CHECK(m.intercept == 2.0);
        const auto f = arima_forecast(m, h, 5);
        for (std::size_t k = 0; k < 5; ++k) CHECK(f[k] == doctest::Approx(3.0 + 2.0 * (19 + k + 1)).epsilon(1e-14));
    }
}

TEST_CASE("arima_fit input checks") {
    CHECK_THROWS_AS(arima_fit(std::vector<double>(15, 1.0), ArimaOrder{}), RangeError);
    CHECK_NOTHROW(arima_fit(std::vector<double>(16, 1.0), ArimaOrder{}));
    std::vector<double> bad(20, 1.0);
    bad[3] = std::nan("");
    CHECK_THROWS(arima_fit(bad, {1, 0, 0}));
}
