#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hydro/series.hpp"

namespace hydro {

/// Seasonal curve plus AR(1) noise for one feature.
struct FeatureSynth {
    std::string name;
    double base = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;  // days
    double rho = 0.0;    // AR(1) coefficient in [0, 1)
    double noise_std = 0.0;
    bool spikes = false;  // receives extreme-event pulses
};

struct SynthConfig {
    std::size_t n_days = 24 * 365 + 6;
    std::size_t n_subbasins = 3;
    int first_subbasin_id = 1;
    Date start_date{1990, 1, 1};
    std::uint64_t seed = 7;
    double spike_rate = 2.0;       // expected pulses per year
    double spike_magnitude = 3.0;  // in stationary noise standard deviations
    std::vector<double> subbasin_scales;  // empty means all 1
    std::vector<FeatureSynth> features;

    /// Five watershed features with Midwest-like seasonal shapes.
    static SynthConfig watershed_defaults();

    /// Applies `key = value` overrides (see README for keys).
    void apply(const std::map<std::string, std::string, std::less<>>& values);

    void validate() const;
};

/// x_t = scale_s * (base + amp * sin(2 pi (doy + phase) / 365.25) + e_t) with
/// e_t = rho * e_{t-1} + eps_t, plus Poisson-timed pulses of
/// +/- magnitude * sd(e) injected into e_t for spike-enabled features.
SpatioTemporalSeries generate(const SynthConfig& config);

}  // namespace hydro
