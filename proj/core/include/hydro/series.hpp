#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydro/date.hpp"

namespace hydro {

/// Dense T x S x F tensor of daily values (days x subbasins x features).
///
/// Day t corresponds to start_date() + t. Values are stored row-major with
/// the feature index varying fastest. Immutable after construction.
class SpatioTemporalSeries {
public:
    SpatioTemporalSeries(Date start_date, std::vector<int> subbasin_ids,
                         std::vector<std::string> feature_names, std::vector<double> values);

    std::size_t days() const noexcept { return days_; }
    std::size_t subbasin_count() const noexcept { return subbasin_ids_.size(); }
    std::size_t feature_count() const noexcept { return feature_names_.size(); }

    Date start_date() const noexcept { return start_; }
    Date end_date() const noexcept { return start_ + static_cast<long long>(days_ - 1); }
    Date date(std::size_t t) const { return start_ + static_cast<long long>(t); }

    const std::vector<int>& subbasin_ids() const noexcept { return subbasin_ids_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

    double at(std::size_t t, std::size_t s, std::size_t f) const {
        return values_[(t * subbasin_count() + s) * feature_count() + f];
    }
    std::span<const double> values() const noexcept { return values_; }

    /// Index of a subbasin id / feature name; throws LookupError when absent.
    std::size_t subbasin_index(int id) const;
    std::size_t feature_index(const std::string& name) const;

    /// Contiguous day range [first, first + count).
    SpatioTemporalSeries slice_days(std::size_t first, std::size_t count) const;

    bool operator==(const SpatioTemporalSeries&) const = default;

private:
    Date start_;
    std::size_t days_ = 0;
    std::vector<int> subbasin_ids_;
    std::vector<std::string> feature_names_;
    std::vector<double> values_;
};

/// Inclusive end dates of the training and validation periods. The optional
/// bounds trim the series before the training period and after the test period
/// (water-year aligned splits); they default to the series' own range.
struct DateSplit {
    Date train_end;
    Date val_end;
    std::optional<Date> train_start;
    std::optional<Date> test_end;
};

struct SplitSeries {
    SpatioTemporalSeries train;
    SpatioTemporalSeries val;
    SpatioTemporalSeries test;
};

/// Maps canonical column names ("date", "subbasin", feature names) to the
/// names used in a particular file.
struct CsvSchema {
    std::map<std::string, std::string> columns;

    /// Parses "canonical=file,canonical=file".
    static CsvSchema parse(const std::string& text);
    std::string file_column(const std::string& canonical) const;
    std::string canonical_column(const std::string& file_name) const;
};

SpatioTemporalSeries read_csv(std::istream& in, const CsvSchema& schema = {});
SpatioTemporalSeries ingest_csv(const std::string& path, const CsvSchema& schema = {});

void write_csv(std::ostream& out, const SpatioTemporalSeries& series);
void write_csv_file(const std::string& path, const SpatioTemporalSeries& series);

SplitSeries split_by_date(const SpatioTemporalSeries& series, const DateSplit& split);

SpatioTemporalSeries select_subbasin(const SpatioTemporalSeries& series, int subbasin_id);

/// Feature names used by the watershed data set.
namespace features {
inline const std::string kStreamFlow = "stream_flow";
inline const std::string kSoilWater = "soil_water";
inline const std::string kPrecipitation = "precipitation";
inline const std::string kMinTemperature = "min_temperature";
inline const std::string kMaxTemperature = "max_temperature";
}  // namespace features

}  // namespace hydro
