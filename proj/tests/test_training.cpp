#include <algorithm>
#include <random>

#include "doctest.h"
#include "gradient_check.hpp"
#include "hydro/errors.hpp"
#include "hydro/training.hpp"
#include "hydro/windowing.hpp"

using namespace hydro;

namespace {

WindowDataset constant_dataset(std::size_t n, double target, std::uint64_t seed) {
    WindowDataset d;
    d.input_steps = 3;
    d.output_steps = 2;
    d.predictors = {"a", "b"};
    d.responses = {"r"};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < 6; ++k) d.inputs.push_back(g(rng));
        d.targets.push_back(target);
        d.targets.push_back(target);
        d.provenance.push_back({0, 1, i, Date(2000, 1, 1) + static_cast<long long>(i), i});
    }
    return d;
}

}  // namespace

TEST_CASE("training fits a constant target") {
    const auto tr = constant_dataset(64, 0.7, 1);
    const auto va = constant_dataset(16, 0.7, 2);
    TrainConfig tc;
    tc.epochs = 50;
    tc.batch_size = 8;
    tc.lr0 = 0.1;
    tc.seed = 3;
    const auto model = BlstmModel::initialize({2, 4, 3, 2, 1}, 5);
    const double before = dataset_mse(va, model);
    int calls = 0;
    const auto result = train(model, tr, va, tc, [&](const EpochRecord&) { ++calls; });
    CHECK(calls == 50);
    REQUIRE(result.history.size() == 50);
    CHECK(result.best_val_mse < 1e-3);
    CHECK(result.best_val_mse < before);

    const auto best = std::min_element(result.history.begin(), result.history.end(),
                                       [](const auto& a, const auto& b) { return a.val_mse < b.val_mse; });
    CHECK(result.best_epoch == best->epoch);
    CHECK(result.best_val_mse == best->val_mse);
    CHECK(dataset_mse(va, result.best) == doctest::Approx(result.best_val_mse).epsilon(1e-12));

    const auto again = train(model, tr, va, tc);
    CHECK(again.best == result.best);
    for (std::size_t e = 0; e < 50; ++e) {
        CHECK(again.history[e].train_mse == result.history[e].train_mse);
        CHECK(again.history[e].val_mse == result.history[e].val_mse);
    }
}

TEST_CASE("training config validation and divergence") {
    TrainConfig tc;
    tc.batch_size = 0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);
    tc = {};
    tc.epochs = 0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);
    tc = {};
    tc.lr0 = -1.0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);

    auto tr = constant_dataset(8, 1e200, 1);
    const auto va = constant_dataset(4, 0.0, 2);
    tc = {};
    tc.epochs = 3;
    tc.batch_size = 4;
    CHECK_THROWS_AS(train(BlstmModel::initialize({2, 2, 3, 2, 1}, 1), tr, va, tc), TrainingError);
}

TEST_CASE("mismatched datasets are rejected") {
    const auto tr = constant_dataset(8, 0.0, 1);
    TrainConfig tc;
    tc.epochs = 1;
    CHECK_THROWS(train(BlstmModel::initialize({3, 2, 3, 2, 1}, 1), tr, tr, tc));
}
