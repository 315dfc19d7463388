#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydro/reduction.hpp"

namespace hydro {

/// Name of the synthetic predictor holding the scaled day of year.
inline const std::string kDatePredictor = "date";

struct WindowSpec {
    std::size_t input_steps = 12;
    std::size_t output_steps = 4;
    std::vector<std::string> predictors;
    std::vector<std::string> responses;

    std::size_t p() const { return predictors.size(); }
    std::size_t r() const { return responses.size(); }
    void validate() const;
};

struct SampleProvenance {
    std::size_t channel_id = 0;
    int subbasin_id = 0;
    std::size_t start_index = 0;   // first input step within the channel
    Date start_date;               // first day covered by the first input step
    std::size_t first_day = 0;     // same day as an index into the source series
};

/// Pooled windows: inputs N x I x P and targets N x O x R, row-major.
struct WindowDataset {
    std::size_t input_steps = 0;
    std::size_t output_steps = 0;
    std::size_t window_days = 1;  // days per reduced step
    std::vector<std::string> predictors;
    std::vector<std::string> responses;
    std::vector<double> inputs;
    std::vector<double> targets;
    std::vector<SampleProvenance> provenance;

    std::size_t size() const noexcept { return provenance.size(); }
    bool empty() const noexcept { return provenance.empty(); }
    std::size_t p() const noexcept { return predictors.size(); }
    std::size_t r() const noexcept { return responses.size(); }

    std::span<const double> input(std::size_t n) const {
        return {inputs.data() + n * input_steps * p(), input_steps * p()};
    }
    std::span<const double> target(std::size_t n) const {
        return {targets.data() + n * output_steps * r(), output_steps * r()};
    }
    /// First day covered by output step j of sample n.
    Date target_date(std::size_t n, std::size_t j) const {
        return provenance[n].start_date + static_cast<long long>((input_steps + j) * window_days);
    }
};

/// Scaled day-of-year predictor value in [0, 1).
double date_feature(Date period_start);

/// Stride-1 sliding windows over each channel and subbasin, pooled in
/// (channel, subbasin, start) order.
WindowDataset extract_windows(const ReducedChannelSet& channels, const WindowSpec& spec);

/// Closed-form sample count: sum over channels of max(0, L - (I + O) + 1) per subbasin.
std::size_t expected_sample_count(const ReducedChannelSet& channels, const WindowSpec& spec);

/// Shuffled mini-batches of sample indices; every index appears exactly once
/// and the final batch may be short. Deterministic for a given seed.
std::vector<std::vector<std::size_t>> batch_iter(std::size_t sample_count, std::size_t batch_size,
                                                 std::uint64_t shuffle_seed);
std::vector<std::vector<std::size_t>> batch_iter(const WindowDataset& dataset,
                                                 std::size_t batch_size,
                                                 std::uint64_t shuffle_seed);

}  // namespace hydro
