#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hydro/series.hpp"

namespace hydro {

/// Seasonal statistics indexed by (day-of-year slot, subbasin, feature).
///
/// Slots follow Date::day_of_year(). Means and standard deviations are
/// 366 x S x F tensors; counts are 366 x S.
struct StandardizationStats {
    std::vector<int> subbasin_ids;
    std::vector<std::string> feature_names;
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<double> counts;

    static constexpr double kStdFloor = 1e-8;

    std::size_t subbasin_count() const noexcept { return subbasin_ids.size(); }
    std::size_t feature_count() const noexcept { return feature_names.size(); }

    std::size_t subbasin_index(int id) const;
    std::size_t feature_index(const std::string& name) const;

    /// `doy` is 1-based.
    double mean_at(int doy, std::size_t s, std::size_t f) const { return mean[flat(doy, s, f)]; }
    double std_at(int doy, std::size_t s, std::size_t f) const { return stddev[flat(doy, s, f)]; }
    double count_at(int doy, std::size_t s) const {
        return counts[static_cast<std::size_t>(doy - 1) * subbasin_count() + s];
    }

    std::size_t flat(int doy, std::size_t s, std::size_t f) const {
        return (static_cast<std::size_t>(doy - 1) * subbasin_count() + s) * feature_count() + f;
    }

    bool operator==(const StandardizationStats&) const = default;
};

/// Fits per-slot sample mean and sample standard deviation (n - 1 divisor).
///
/// Slots with fewer than two samples get a unit standard deviation; for the
/// Feb 29 slot the Feb 28 statistics are copied instead. Sparse non-leap
/// slots are reported through `warnings` when it is non-null.
StandardizationStats fit_stats(const SpatioTemporalSeries& train,
                               std::vector<std::string>* warnings = nullptr);

/// (x - mean[doy]) / std[doy] per subbasin and feature, matched by id and name.
SpatioTemporalSeries standardize(const SpatioTemporalSeries& series,
                                 const StandardizationStats& stats);

/// Inverse of standardize at one coordinate: v * std + mean.
std::vector<double> destandardize(std::span<const double> values,
                                  const StandardizationStats& stats, int doy, int subbasin_id,
                                  const std::string& feature);
double destandardize(double value, const StandardizationStats& stats, int doy,
                     std::size_t subbasin_index, std::size_t feature_index);

void save_stats(std::ostream& out, const StandardizationStats& stats);
StandardizationStats load_stats(std::istream& in);
void save_stats_file(const std::string& path, const StandardizationStats& stats);
StandardizationStats load_stats_file(const std::string& path);

}  // namespace hydro
