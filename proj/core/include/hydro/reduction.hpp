#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hydro/series.hpp"

namespace hydro {

enum class Aggregator { Mean };

/// Window size and stride in days; the stride must divide the window.
struct ReductionConfig {
    std::size_t window = 7;
    std::size_t stride = 1;
    Aggregator aggregator = Aggregator::Mean;

    void validate() const;
    std::size_t channel_count() const { return window / stride; }
};

/// One reduced series: timestep k averages daily indices
/// [offset + k * window, offset + (k + 1) * window) of the source.
struct ReducedChannel {
    std::size_t id = 0;
    std::size_t offset = 0;
    std::size_t window = 1;
    Date start_date;  // date of daily index `offset`
    std::size_t length = 0;
    std::size_t subbasins = 0;
    std::size_t features = 0;
    std::vector<double> values;  // length x subbasins x features

    double at(std::size_t k, std::size_t s, std::size_t f) const {
        return values[(k * subbasins + s) * features + f];
    }
    /// First daily index (in the source series) covered by step k.
    std::size_t first_day(std::size_t k) const { return offset + k * window; }
    Date period_start(std::size_t k) const {
        return start_date + static_cast<long long>(k * window);
    }
};

struct ReducedChannelSet {
    ReductionConfig config;
    Date source_start;
    std::size_t source_days = 0;
    std::vector<int> subbasin_ids;
    std::vector<std::string> feature_names;
    std::vector<ReducedChannel> channels;
};

/// Builds window/stride offset channels, each a plain stride-w mean reduction.
/// Trailing days that do not fill a whole window are dropped.
ReducedChannelSet reduce(const SpatioTemporalSeries& series, const ReductionConfig& config);

/// Reduced-form fraction num/den.
struct Ratio {
    std::uint64_t num = 1;
    std::uint64_t den = 1;

    std::string to_string() const;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Ratio&) const = default;
};

/// Per-epoch work relative to unreduced daily data: sequences are w times
/// shorter and the pooled sample count shrinks to 1/s, giving 1/(w*s).
Ratio operation_ratio(std::size_t window, std::size_t stride);

}  // namespace hydro
