#include "hydro/windowing.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "hydro/errors.hpp"

namespace hydro {

void WindowSpec::validate() const {
    if (output_steps < 1 || input_steps < output_steps) {
        throw ConfigError("window spec needs I >= O >= 1 (got I=" + std::to_string(input_steps) +
                          ", O=" + std::to_string(output_steps) + ")");
    }
    if (predictors.empty()) throw ConfigError("window spec has no predictors");
    if (responses.empty()) throw ConfigError("window spec has no responses");
    if (std::set<std::string>(predictors.begin(), predictors.end()).size() != predictors.size()) {
        throw ConfigError("duplicate predictor name");
    }
    if (std::set<std::string>(responses.begin(), responses.end()).size() != responses.size()) {
        throw ConfigError("duplicate response name");
    }
    for (const auto& r : responses) {
        if (r == kDatePredictor) throw ConfigError("'date' cannot be a response");
    }
}

double date_feature(Date period_start) {
    return static_cast<double>(period_start.day_of_year() - 1) / kDaysPerYearSlots;
}

std::size_t expected_sample_count(const ReducedChannelSet& channels, const WindowSpec& spec) {
    const std::size_t span = spec.input_steps + spec.output_steps;
    std::size_t n = 0;
    for (const auto& ch : channels.channels) {
        if (ch.length >= span) n += (ch.length - span + 1) * ch.subbasins;
    }
    return n;
}

WindowDataset extract_windows(const ReducedChannelSet& channels, const WindowSpec& spec) {
    spec.validate();
    const std::size_t I = spec.input_steps;
    const std::size_t O = spec.output_steps;
    const std::size_t span = I + O;

    auto feature_column = [&](const std::string& name) -> std::ptrdiff_t {
        auto it = std::find(channels.feature_names.begin(), channels.feature_names.end(), name);
        if (it == channels.feature_names.end()) throw LookupError("unknown feature '" + name + "'");
        return it - channels.feature_names.begin();
    };
    std::vector<std::ptrdiff_t> pred_cols;  // -1 marks the date predictor
    for (const auto& p : spec.predictors) {
        pred_cols.push_back(p == kDatePredictor ? -1 : feature_column(p));
    }
    std::vector<std::size_t> resp_cols;
    for (const auto& r : spec.responses) resp_cols.push_back(static_cast<std::size_t>(feature_column(r)));

    const bool any_long_enough = std::any_of(channels.channels.begin(), channels.channels.end(),
                                             [&](const ReducedChannel& c) { return c.length >= span; });
    if (!any_long_enough) {
        throw RangeError("insufficient data: windows need " + std::to_string(span) +
                         " reduced steps (" + std::to_string(span * channels.config.window) +
                         " days) but no channel is that long");
    }

    WindowDataset ds;
    ds.input_steps = I;
    ds.output_steps = O;
    ds.window_days = channels.config.window;
    ds.predictors = spec.predictors;
    ds.responses = spec.responses;
    const std::size_t total = expected_sample_count(channels, spec);
    ds.inputs.reserve(total * I * spec.p());
    ds.targets.reserve(total * O * spec.r());
    ds.provenance.reserve(total);

    for (const auto& ch : channels.channels) {
        if (ch.length < span) continue;
        std::vector<double> date_values(ch.length);
        for (std::size_t k = 0; k < ch.length; ++k) date_values[k] = date_feature(ch.period_start(k));
        for (std::size_t s = 0; s < ch.subbasins; ++s) {
            for (std::size_t start = 0; start + span <= ch.length; ++start) {
                for (std::size_t k = start; k < start + I; ++k) {
                    for (auto col : pred_cols) {
                        ds.inputs.push_back(col < 0 ? date_values[k]
                                                    : ch.at(k, s, static_cast<std::size_t>(col)));
                    }
                }
                for (std::size_t k = start + I; k < start + span; ++k) {
                    for (auto col : resp_cols) ds.targets.push_back(ch.at(k, s, col));
                }
                ds.provenance.push_back({ch.id, channels.subbasin_ids[s], start,
                                         ch.period_start(start), ch.first_day(start)});
            }
        }
    }
    return ds;
}

std::vector<std::vector<std::size_t>> batch_iter(std::size_t sample_count, std::size_t batch_size,
                                                 std::uint64_t shuffle_seed) {
    if (batch_size < 1) throw ConfigError("batch size must be at least 1");
    if (sample_count == 0) throw ConfigError("cannot batch an empty dataset");
    std::vector<std::size_t> order(sample_count);
    for (std::size_t i = 0; i < sample_count; ++i) order[i] = i;

    // Fisher-Yates with explicit rejection sampling so the order depends only
    // on the mt19937_64 stream, not on library distribution internals.
    std::mt19937_64 rng(shuffle_seed);
    for (std::size_t i = sample_count - 1; i > 0; --i) {
        const std::uint64_t bound = i + 1;
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
        std::uint64_t x = 0;
        do {
            x = rng();
        } while (x >= limit);
        std::swap(order[i], order[static_cast<std::size_t>(x % bound)]);
    }

    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t i = 0; i < sample_count; i += batch_size) {
        const std::size_t end = std::min(sample_count, i + batch_size);
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                             order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return batches;
}

std::vector<std::vector<std::size_t>> batch_iter(const WindowDataset& dataset,
                                                 std::size_t batch_size,
                                                 std::uint64_t shuffle_seed) {
    return batch_iter(dataset.size(), batch_size, shuffle_seed);
}

}  // namespace hydro
