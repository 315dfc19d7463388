#include "hydro/reduction.hpp"

#include "hydro/errors.hpp"

namespace hydro {

void ReductionConfig::validate() const {
    if (window < 1 || stride < 1) throw ConfigError("window and stride must be at least 1");
    if (window % stride != 0) {
        throw ConfigError("stride " + std::to_string(stride) + " does not evenly divide window " +
                          std::to_string(window));
    }
}

ReducedChannelSet reduce(const SpatioTemporalSeries& series, const ReductionConfig& config) {
    config.validate();
    const std::size_t T = series.days();
    if (T < config.window) {
        throw RangeError("series too short: " + std::to_string(T) + " days < window " +
                         std::to_string(config.window));
    }
    const std::size_t n_s = series.subbasin_count();
    const std::size_t n_f = series.feature_count();
    const std::size_t w = config.window;

    ReducedChannelSet out;
    out.config = config;
    out.source_start = series.start_date();
    out.source_days = T;
    out.subbasin_ids = series.subbasin_ids();
    out.feature_names = series.feature_names();
    out.channels.reserve(config.channel_count());

    for (std::size_t c = 0; c < config.channel_count(); ++c) {
        ReducedChannel ch;
        ch.id = c;
        ch.offset = c * config.stride;
        ch.window = w;
        ch.start_date = series.date(ch.offset);
        ch.length = (T - ch.offset) / w;
        ch.subbasins = n_s;
        ch.features = n_f;
        ch.values.assign(ch.length * n_s * n_f, 0.0);
        for (std::size_t k = 0; k < ch.length; ++k) {
            const std::size_t day0 = ch.first_day(k);
            for (std::size_t s = 0; s < n_s; ++s) {
                for (std::size_t f = 0; f < n_f; ++f) {
                    double sum = 0.0;
                    for (std::size_t d = 0; d < w; ++d) sum += series.at(day0 + d, s, f);
                    ch.values[(k * n_s + s) * n_f + f] = sum / static_cast<double>(w);
                }
            }
        }
        out.channels.push_back(std::move(ch));
    }
    return out;
}

std::string Ratio::to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Ratio operation_ratio(std::size_t window, std::size_t stride) {
    ReductionConfig{window, stride}.validate();
    const std::uint64_t den = static_cast<std::uint64_t>(window) * stride;
    return {1, den};
}

}  // namespace hydro
