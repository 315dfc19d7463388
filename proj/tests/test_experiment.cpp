#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hydro/errors.hpp"
#include "hydro/experiment.hpp"
#include "test_support.hpp"

using namespace hydro;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.synth.n_days = 4 * 365;
    c.window.input_steps = 4;
    c.window.output_steps = 2;
    c.hidden = 4;
    c.train.epochs = 2;
    c.train.batch_size = 32;
    return c;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("hydro_test_" + name)).string();
}

SpatioTemporalSeries test_support_series() {
    return testing::random_series(1, Date(2000, 1, 1), 1200, {1}, {"x"});
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("apply maps flag names onto the config") {
    ExperimentConfig c;
    c.apply({{"w", "14"}, {"s", "7"}, {"input_steps", "6"}, {"--output-steps", "2"}, {"model", "arima"},
             {"arima-order", "3,1,0"}, {"responses", "soil_water"}, {"epochs", "9"}, {"lr", "0.5"},
             {"train-end", "2000-09-30"}, {"val-end", "2001-09-30"}, {"eval-subbasin", "3"}, {"seed", "4"}});
    CHECK(c.reduction.window == 14);
    CHECK(c.reduction.stride == 7);
    CHECK(c.window.input_steps == 6);
    CHECK(c.window.output_steps == 2);
    CHECK(c.model == ModelKind::Arima);
    CHECK(c.arima.to_string() == "3,1,0");
    CHECK(c.window.responses == std::vector<std::string>{"soil_water"});
    CHECK(c.train.epochs == 9);
    CHECK(c.train.lr0 == 0.5);
    REQUIRE(c.split.has_value());
    CHECK(c.split->val_end == Date(2001, 9, 30));
    CHECK(c.eval_subbasins == std::vector<int>{3});
    CHECK(c.seed == 4);
    CHECK_THROWS_AS(c.apply({{"nonsense", "1"}}), ConfigError);
    CHECK_THROWS_AS(c.apply({{"hidden", "abc"}}), ConfigError);
    ExperimentConfig d;
    CHECK_THROWS_AS(d.apply({{"train-end", "2000-09-30"}}), ConfigError);
    CHECK(parse_model_kind("naive") == ModelKind::Naive);
    CHECK_THROWS_AS(parse_model_kind("lstm"), ConfigError);
}

TEST_CASE("default split divides 10:1:1") {
    const auto s = test_support_series();
    const auto split = default_split(s);
    CHECK(split.train_end == s.date(1200 * 10 / 12 - 1));
    CHECK(split.val_end == split.train_end + 100);
}

TEST_CASE("naive transductive run") {
    auto c = small_config();
    c.model = ModelKind::Naive;
    const auto data = load_series(c);
    const auto r = run_transductive(c, data);
    CHECK(r.report.responses == c.window.responses);
    CHECK(r.test_samples > 0);
    CHECK(r.report.sample_count == r.test_samples);
    CHECK(r.timesteps.size() == r.test_samples * 2 * 2);
    CHECK(!r.checkpoint.has_value());
    for (double v : r.report.nrmse) CHECK(v > 0.0);
}

TEST_CASE("errors carry their stage") {
    auto c = small_config();
    c.model = ModelKind::Naive;
    const auto data = load_series(c);

    auto bad = c;
    bad.reduction = {7, 2};
    try {
        (void)run_transductive(bad, data);
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "config");
    }

    bad = c;
    bad.train_subbasin = 99;
    try {
        (void)run_transductive(bad, data);
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "split");
    }

    bad = c;
    bad.model = ModelKind::Arima;
    bad.arima = {5, 1, 0};
    CHECK_THROWS_AS(run_transductive(bad, data), StageError);

    bad = c;
    bad.window.input_steps = 40;
    try {
        (void)run_transductive(bad, data);
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "window");
    }

    bad = c;
    bad.eval_subbasins = {1};
    CHECK_THROWS_AS(run_inductive(bad, data), StageError);
}

TEST_CASE("arima pipeline run") {
    auto c = small_config();
    c.model = ModelKind::Arima;
    c.window.input_steps = 12;
    const auto r = run_transductive(c);
    CHECK(r.report.nrmse.size() == 2);
}

TEST_CASE("blstm checkpoint resume reproduces the report") {
    auto c = small_config();
    const auto data = load_series(c);
    c.checkpoint_out = temp_path("ckpt.txt");
    c.report_out = temp_path("report.csv");
    c.stats_out = temp_path("stats.txt");
    c.timesteps_out = temp_path("timesteps.csv");
    int epochs = 0;
    const auto first = run_transductive(c, data, [&](const EpochRecord&) { ++epochs; });
    CHECK(epochs == 2);
    REQUIRE(first.checkpoint.has_value());
    write_outputs(c, first);
    const auto report = slurp(c.report_out);
    CHECK(!report.empty());
    CHECK(slurp(c.timesteps_out).rfind("date,subbasin,", 0) == 0);

    auto resume = small_config();
    resume.checkpoint_in = c.checkpoint_out;
    resume.window.input_steps = 9;  // overridden by the checkpoint
    resume.report_out = temp_path("report2.csv");
    const auto second = run_transductive(resume, data);
    CHECK(second.history.empty());
    write_outputs(resume, second);
    CHECK(slurp(resume.report_out) == report);

    for (const auto& p : {c.checkpoint_out, c.report_out, c.stats_out, c.timesteps_out, resume.report_out}) {
        std::remove(p.c_str());
    }
}

TEST_CASE("inductive run uses the evaluated subbasin's statistics") {
    auto c = small_config();
    c.model = ModelKind::Naive;
    c.eval_subbasins = {2};
    const auto data = load_series(c);
    const auto r = run_inductive(c, data);
    CHECK(r.eval_subbasin == 2);
    CHECK(r.eval_stats.subbasin_ids == std::vector<int>{2});
    CHECK(r.train_stats.subbasin_ids == std::vector<int>{1});
}

TEST_CASE("reduction sweep") {
    CHECK(reduced_steps(7, 84, 28) == std::pair<std::size_t, std::size_t>{12, 4});
    CHECK(reduced_steps(28, 84, 28) == std::pair<std::size_t, std::size_t>{3, 1});
    CHECK_THROWS_AS(reduced_steps(5, 84, 28), ConfigError);

    auto c = small_config();
    c.model = ModelKind::Naive;
    const auto rows = run_reduction_sweep(c, {{7, 1}, {14, 7}}, 28, 14);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].model_timesteps == "4→2");
    CHECK(rows[0].operation_ratio.to_string() == "1/7");
    CHECK(rows[1].model_timesteps == "2→1");
    CHECK(rows[1].operation_ratio.to_string() == "1/98");
    CHECK(rows[0].train_samples > rows[1].train_samples);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    CHECK(csv.str().rfind("w,s,model_timesteps,operation_ratio,train_samples,nrmse_soil_water,nrmse_stream_flow\n", 0) == 0);
}
