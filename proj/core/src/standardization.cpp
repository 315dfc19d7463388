#include "hydro/standardization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hydro/errors.hpp"
#include "hydro/text_io.hpp"

namespace hydro {

namespace {

constexpr std::string_view kMagic = "hydro-standardization-stats 1";

void check_doy(int doy) {
    if (doy < 1 || doy > kDaysPerYearSlots) {
        throw LookupError("day-of-year " + std::to_string(doy) + " outside 1..366");
    }
}

}  // namespace

std::size_t StandardizationStats::subbasin_index(int id) const {
    auto it = std::find(subbasin_ids.begin(), subbasin_ids.end(), id);
    if (it == subbasin_ids.end()) throw LookupError("stats have no subbasin " + std::to_string(id));
    return static_cast<std::size_t>(it - subbasin_ids.begin());
}

std::size_t StandardizationStats::feature_index(const std::string& name) const {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) throw LookupError("stats have no feature '" + name + "'");
    return static_cast<std::size_t>(it - feature_names.begin());
}

StandardizationStats fit_stats(const SpatioTemporalSeries& train,
                               std::vector<std::string>* warnings) {
    if (train.days() == 0) throw FitError("cannot fit statistics on an empty series");
    const std::size_t n_s = train.subbasin_count();
    const std::size_t n_f = train.feature_count();
    const std::size_t slots = kDaysPerYearSlots;

    StandardizationStats stats;
    stats.subbasin_ids = train.subbasin_ids();
    stats.feature_names = train.feature_names();
    stats.mean.assign(slots * n_s * n_f, 0.0);
    stats.stddev.assign(slots * n_s * n_f, 1.0);
    stats.counts.assign(slots * n_s, 0.0);

    std::vector<int> slot_of_day(train.days());
    for (std::size_t t = 0; t < train.days(); ++t) slot_of_day[t] = train.date(t).day_of_year();

    // Two passes per group: mean first, then centred sum of squares.
    std::vector<double> sum(slots * n_s * n_f, 0.0);
    for (std::size_t t = 0; t < train.days(); ++t) {
        const int doy = slot_of_day[t];
        for (std::size_t s = 0; s < n_s; ++s) {
            stats.counts[static_cast<std::size_t>(doy - 1) * n_s + s] += 1.0;
            for (std::size_t f = 0; f < n_f; ++f) sum[stats.flat(doy, s, f)] += train.at(t, s, f);
        }
    }
    for (int doy = 1; doy <= kDaysPerYearSlots; ++doy) {
        for (std::size_t s = 0; s < n_s; ++s) {
            const double n = stats.count_at(doy, s);
            if (n == 0.0) continue;
            for (std::size_t f = 0; f < n_f; ++f) stats.mean[stats.flat(doy, s, f)] = sum[stats.flat(doy, s, f)] / n;
        }
    }
    std::vector<double> ss(slots * n_s * n_f, 0.0);
    for (std::size_t t = 0; t < train.days(); ++t) {
        const int doy = slot_of_day[t];
        for (std::size_t s = 0; s < n_s; ++s) {
            for (std::size_t f = 0; f < n_f; ++f) {
                const auto i = stats.flat(doy, s, f);
                const double d = train.at(t, s, f) - stats.mean[i];
                ss[i] += d * d;
            }
        }
    }

    std::size_t sparse_slots = 0;
    for (int doy = 1; doy <= kDaysPerYearSlots; ++doy) {
        for (std::size_t s = 0; s < n_s; ++s) {
            const double n = stats.count_at(doy, s);
            if (n < 2.0) {
                if (doy != kLeapDaySlot && s == 0) ++sparse_slots;
                continue;
            }
            for (std::size_t f = 0; f < n_f; ++f) {
                const auto i = stats.flat(doy, s, f);
                stats.stddev[i] = std::max(std::sqrt(ss[i] / (n - 1.0)), StandardizationStats::kStdFloor);
            }
        }
    }

    // Sparse Feb 29 borrows the Feb 28 statistics.
    for (std::size_t s = 0; s < n_s; ++s) {
        if (stats.count_at(kLeapDaySlot, s) >= 2.0) continue;
        for (std::size_t f = 0; f < n_f; ++f) {
            stats.mean[stats.flat(kLeapDaySlot, s, f)] = stats.mean[stats.flat(kLeapDaySlot - 1, s, f)];
            stats.stddev[stats.flat(kLeapDaySlot, s, f)] = stats.stddev[stats.flat(kLeapDaySlot - 1, s, f)];
        }
    }

    if (warnings && sparse_slots > 0) {
        warnings->push_back(std::to_string(sparse_slots) +
                            " day-of-year slot(s) have fewer than 2 training samples; "
                            "their standard deviation defaults to 1");
    }
    return stats;
}

SpatioTemporalSeries standardize(const SpatioTemporalSeries& series,
                                 const StandardizationStats& stats) {
    const std::size_t n_s = series.subbasin_count();
    const std::size_t n_f = series.feature_count();
    std::vector<std::size_t> s_map(n_s);
    std::vector<std::size_t> f_map(n_f);
    for (std::size_t s = 0; s < n_s; ++s) s_map[s] = stats.subbasin_index(series.subbasin_ids()[s]);
    for (std::size_t f = 0; f < n_f; ++f) f_map[f] = stats.feature_index(series.feature_names()[f]);

    std::vector<double> out;
    out.reserve(series.values().size());
    for (std::size_t t = 0; t < series.days(); ++t) {
        const int doy = series.date(t).day_of_year();
        for (std::size_t s = 0; s < n_s; ++s) {
            for (std::size_t f = 0; f < n_f; ++f) {
                const auto i = stats.flat(doy, s_map[s], f_map[f]);
                out.push_back((series.at(t, s, f) - stats.mean[i]) / stats.stddev[i]);
            }
        }
    }
    return {series.start_date(), series.subbasin_ids(), series.feature_names(), std::move(out)};
}

double destandardize(double value, const StandardizationStats& stats, int doy,
                     std::size_t subbasin_index, std::size_t feature_index) {
    check_doy(doy);
    if (subbasin_index >= stats.subbasin_count() || feature_index >= stats.feature_count()) {
        throw LookupError("destandardize index out of range");
    }
    const auto i = stats.flat(doy, subbasin_index, feature_index);
    return value * stats.stddev[i] + stats.mean[i];
}

std::vector<double> destandardize(std::span<const double> values,
                                  const StandardizationStats& stats, int doy, int subbasin_id,
                                  const std::string& feature) {
    const auto s = stats.subbasin_index(subbasin_id);
    const auto f = stats.feature_index(feature);
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(destandardize(v, stats, doy, s, f));
    return out;
}

void save_stats(std::ostream& out, const StandardizationStats& stats) {
    text::DocumentWriter w(out, kMagic);
    std::vector<std::string> ids;
    for (int id : stats.subbasin_ids) ids.push_back(std::to_string(id));
    w.field("subbasins", ids);
    w.field("features", stats.feature_names);
    const std::size_t n_s = stats.subbasin_count();
    const std::size_t n_f = stats.feature_count();
    const std::size_t slots = kDaysPerYearSlots;
    const std::size_t tensor_dims[] = {slots, n_s, n_f};
    const std::size_t count_dims[] = {slots, n_s};
    w.array("mean", tensor_dims, stats.mean);
    w.array("std", tensor_dims, stats.stddev);
    w.array("counts", count_dims, stats.counts);
}

StandardizationStats load_stats(std::istream& in) {
    const auto doc = text::read_document(in, kMagic);
    StandardizationStats stats;
    for (const auto& id : doc.field("subbasins")) {
        stats.subbasin_ids.push_back(static_cast<int>(text::parse_int(id)));
    }
    stats.feature_names = doc.field("features");
    const std::size_t n_s = stats.subbasin_count();
    const std::size_t n_f = stats.feature_count();
    const std::size_t slots = kDaysPerYearSlots;
    auto take = [&](std::string_view name, std::vector<std::size_t> dims) {
        const auto& arr = doc.array(name);
        if (arr.dims != dims) throw ParseError("array '" + std::string(name) + "' has wrong dimensions");
        return arr.values;
    };
    stats.mean = take("mean", {slots, n_s, n_f});
    stats.stddev = take("std", {slots, n_s, n_f});
    stats.counts = take("counts", {slots, n_s});
    for (double v : stats.stddev) {
        if (!(v > 0.0)) throw ParseError("stats file contains non-positive standard deviation");
    }
    return stats;
}

void save_stats_file(const std::string& path, const StandardizationStats& stats) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write stats file '" + path + "'");
    save_stats(out, stats);
}

StandardizationStats load_stats_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stats file '" + path + "'");
    return load_stats(in);
}

}  // namespace hydro
