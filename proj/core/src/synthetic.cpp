#include "hydro/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hydro/errors.hpp"
#include "hydro/text_io.hpp"

namespace hydro {

SynthConfig SynthConfig::watershed_defaults() {
    SynthConfig cfg;
    cfg.features = {
        {features::kStreamFlow, 50.0, 30.0, 40.0, 0.9, 8.0, true},
        {features::kSoilWater, 100.0, 40.0, 0.0, 0.97, 3.0, true},
        {features::kPrecipitation, 3.0, 1.0, 60.0, 0.3, 2.0, false},
        {features::kMinTemperature, 5.0, 12.0, -110.0, 0.7, 3.0, false},
        {features::kMaxTemperature, 17.0, 13.0, -110.0, 0.7, 3.0, false},
    };
    return cfg;
}

void SynthConfig::validate() const {
    if (n_days < 366) throw ConfigError("synthetic series needs at least 366 days");
    if (n_subbasins < 1) throw ConfigError("synthetic series needs at least one subbasin");
    if (features.empty()) throw ConfigError("synthetic series needs at least one feature");
    if (!subbasin_scales.empty() && subbasin_scales.size() != n_subbasins) {
        throw ConfigError("subbasin_scales has " + std::to_string(subbasin_scales.size()) +
                          " entries for " + std::to_string(n_subbasins) + " subbasins");
    }
    if (spike_rate < 0.0) throw ConfigError("spike rate must be non-negative");
    for (const auto& f : features) {
        if (!(f.rho >= 0.0 && f.rho < 1.0)) throw ConfigError(f.name + ": rho must be in [0, 1)");
        if (f.noise_std < 0.0) throw ConfigError(f.name + ": noise std must be non-negative");
    }
}

void SynthConfig::apply(const std::map<std::string, std::string, std::less<>>& values) {
    for (const auto& [key, value] : values) {
        if (key == "n_days") {
            n_days = static_cast<std::size_t>(text::parse_int(value));
        } else if (key == "n_subbasins") {
            n_subbasins = static_cast<std::size_t>(text::parse_int(value));
        } else if (key == "first_subbasin_id") {
            first_subbasin_id = static_cast<int>(text::parse_int(value));
        } else if (key == "start_date") {
            start_date = Date::parse(value);
        } else if (key == "seed") {
            seed = static_cast<std::uint64_t>(text::parse_int(value));
        } else if (key == "spike_rate") {
            spike_rate = text::parse_double(value);
        } else if (key == "spike_magnitude") {
            spike_magnitude = text::parse_double(value);
        } else if (key == "subbasin_scales") {
            subbasin_scales.clear();
            for (auto tok : text::split(value, ',')) subbasin_scales.push_back(text::parse_double(tok));
        } else if (auto dot = key.find('.'); dot != std::string::npos) {
            const std::string name = key.substr(0, dot);
            const std::string field = key.substr(dot + 1);
            FeatureSynth* target = nullptr;
            for (auto& f : features) {
                if (f.name == name) target = &f;
            }
            if (!target) {
                features.push_back({name});
                target = &features.back();
            }
            if (field == "base") target->base = text::parse_double(value);
            else if (field == "amplitude") target->amplitude = text::parse_double(value);
            else if (field == "phase") target->phase = text::parse_double(value);
            else if (field == "rho") target->rho = text::parse_double(value);
            else if (field == "noise_std") target->noise_std = text::parse_double(value);
            else if (field == "spikes") target->spikes = value == "1" || value == "true";
            else throw ConfigError("unknown synthetic feature field '" + field + "'");
        } else {
            throw ConfigError("unknown synthetic config key '" + key + "'");
        }
    }
}

SpatioTemporalSeries generate(const SynthConfig& config) {
    config.validate();
    const std::size_t T = config.n_days;
    const std::size_t S = config.n_subbasins;
    const std::size_t F = config.features.size();
    const double spike_prob = config.spike_rate / 365.25;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> values(T * S * F, 0.0);
    std::vector<double> seasonal(T);
    for (std::size_t s = 0; s < S; ++s) {
        const double scale = config.subbasin_scales.empty() ? 1.0 : config.subbasin_scales[s];
        for (std::size_t f = 0; f < F; ++f) {
            const auto& fs = config.features[f];
            // Independent stream per (subbasin, feature).
            std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                              static_cast<std::uint32_t>(config.seed >> 32),
                              static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(f)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> noise(0.0, 1.0);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double stationary_sd = fs.noise_std / std::sqrt(1.0 - fs.rho * fs.rho);
            double e = 0.0;
            for (std::size_t t = 0; t < T; ++t) {
                const Date day = config.start_date + static_cast<long long>(t);
                const double season =
                    fs.base + fs.amplitude * std::sin(two_pi * (day.ordinal_day() + fs.phase) / 365.25);
                if (fs.noise_std > 0.0) {
                    e = fs.rho * e + fs.noise_std * noise(rng);
                }
                if (fs.spikes && spike_prob > 0.0 && unit(rng) < spike_prob) {
                    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
                    e += sign * config.spike_magnitude * stationary_sd;
                }
                values[(t * S + s) * F + f] = scale * (season + e);
            }
        }
    }
    std::vector<int> ids(S);
    for (std::size_t s = 0; s < S; ++s) ids[s] = config.first_subbasin_id + static_cast<int>(s);
    std::vector<std::string> names;
    for (const auto& f : config.features) names.push_back(f.name);
    return {config.start_date, std::move(ids), std::move(names), std::move(values)};
}

}  // namespace hydro
