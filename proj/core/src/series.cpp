#include "hydro/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "hydro/errors.hpp"
#include "hydro/text_io.hpp"

namespace hydro {

SpatioTemporalSeries::SpatioTemporalSeries(Date start_date, std::vector<int> subbasin_ids,
                                           std::vector<std::string> feature_names,
                                           std::vector<double> values)
    : start_(start_date),
      subbasin_ids_(std::move(subbasin_ids)),
      feature_names_(std::move(feature_names)),
      values_(std::move(values)) {
    if (subbasin_ids_.empty() || feature_names_.empty()) {
        throw DimensionError("series needs at least one subbasin and one feature");
    }
    const std::size_t stride = subbasin_ids_.size() * feature_names_.size();
    if (values_.empty() || values_.size() % stride != 0) {
        throw DimensionError("series value count " + std::to_string(values_.size()) +
                             " is not a positive multiple of S*F = " + std::to_string(stride));
    }
    days_ = values_.size() / stride;
    if (std::set<int>(subbasin_ids_.begin(), subbasin_ids_.end()).size() != subbasin_ids_.size()) {
        throw ConfigError("duplicate subbasin id");
    }
    if (std::set<std::string>(feature_names_.begin(), feature_names_.end()).size() !=
        feature_names_.size()) {
        throw ConfigError("duplicate feature name");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw NumericalError("non-finite value at day " + std::to_string(i / stride));
        }
    }
}

std::size_t SpatioTemporalSeries::subbasin_index(int id) const {
    auto it = std::find(subbasin_ids_.begin(), subbasin_ids_.end(), id);
    if (it == subbasin_ids_.end()) throw LookupError("unknown subbasin " + std::to_string(id));
    return static_cast<std::size_t>(it - subbasin_ids_.begin());
}

std::size_t SpatioTemporalSeries::feature_index(const std::string& name) const {
    auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
    if (it == feature_names_.end()) throw LookupError("unknown feature '" + name + "'");
    return static_cast<std::size_t>(it - feature_names_.begin());
}

SpatioTemporalSeries SpatioTemporalSeries::slice_days(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > days_) {
        throw RangeError("day slice [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") outside series of " +
                         std::to_string(days_) + " days");
    }
    const std::size_t stride = subbasin_count() * feature_count();
    std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(first * stride),
                            values_.begin() + static_cast<std::ptrdiff_t>((first + count) * stride));
    return {date(first), subbasin_ids_, feature_names_, std::move(out)};
}

CsvSchema CsvSchema::parse(const std::string& text) {
    CsvSchema schema;
    if (text::trim(text).empty()) return schema;
    for (auto item : text::split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("schema entry '" + std::string(item) + "' is not canonical=column");
        }
        schema.columns[std::string(text::trim(item.substr(0, eq)))] =
            std::string(text::trim(item.substr(eq + 1)));
    }
    return schema;
}

std::string CsvSchema::file_column(const std::string& canonical) const {
    auto it = columns.find(canonical);
    return it == columns.end() ? canonical : it->second;
}

std::string CsvSchema::canonical_column(const std::string& file_name) const {
    for (const auto& [canonical, file] : columns) {
        if (file == file_name) return canonical;
    }
    return file_name;
}

namespace {

struct Row {
    long long day;
    int subbasin;
    std::size_t line;
    std::size_t offset;  // into the flat feature buffer
};

}  // namespace

SpatioTemporalSeries read_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input", 1);
    const auto header = text::split(text::trim(line), ',');
    const std::string date_col = schema.file_column("date");
    const std::string sub_col = schema.file_column("subbasin");
    std::ptrdiff_t date_idx = -1;
    std::ptrdiff_t sub_idx = -1;
    std::vector<std::size_t> feature_cols;
    std::vector<std::string> feature_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name(text::trim(header[i]));
        if (name == date_col) {
            date_idx = static_cast<std::ptrdiff_t>(i);
        } else if (name == sub_col) {
            sub_idx = static_cast<std::ptrdiff_t>(i);
        } else {
            feature_cols.push_back(i);
            feature_names.push_back(schema.canonical_column(name));
        }
    }
    if (date_idx < 0) throw ParseError("header lacks date column '" + date_col + "'", 1);
    if (sub_idx < 0) throw ParseError("header lacks subbasin column '" + sub_col + "'", 1);
    if (feature_cols.empty()) throw ParseError("header has no feature columns", 1);

    const std::size_t n_features = feature_cols.size();
    std::vector<Row> rows;
    std::vector<double> buffer;
    std::size_t line_no = 1;
    Date origin{};
    bool have_origin = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = text::trim(line);
        if (body.empty()) continue;
        const auto cells = text::split(body, ',');
        if (cells.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " columns, found " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        Row row{};
        row.line = line_no;
        row.offset = buffer.size();
        try {
            const Date d = Date::parse(text::trim(cells[static_cast<std::size_t>(date_idx)]));
            if (!have_origin) {
                origin = d;
                have_origin = true;
            }
            row.day = d - origin;
            row.subbasin =
                static_cast<int>(text::parse_int(cells[static_cast<std::size_t>(sub_idx)]));
            for (auto col : feature_cols) {
                const double v = text::parse_double(cells[col]);
                if (!std::isfinite(v)) throw ParseError("non-finite value");
                buffer.push_back(v);
            }
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw ParseError("CSV has no data rows", line_no);

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.day != b.day ? a.day < b.day : a.subbasin < b.subbasin;
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].day == rows[i - 1].day && rows[i].subbasin == rows[i - 1].subbasin) {
            throw GridError("duplicate key (" + (origin + rows[i].day).to_string() + ", " +
                            std::to_string(rows[i].subbasin) + ") at line " +
                            std::to_string(rows[i].line));
        }
    }

    std::set<int> subbasin_set;
    for (const auto& r : rows) subbasin_set.insert(r.subbasin);
    const std::vector<int> subbasins(subbasin_set.begin(), subbasin_set.end());
    const long long first_day = rows.front().day;
    const long long last_day = rows.back().day;
    const std::size_t n_days = static_cast<std::size_t>(last_day - first_day + 1);
    const std::size_t n_sub = subbasins.size();

    // Walk the sorted rows against the expected dense grid.
    std::vector<double> values;
    values.reserve(n_days * n_sub * n_features);
    std::size_t r = 0;
    for (std::size_t t = 0; t < n_days; ++t) {
        const long long day = first_day + static_cast<long long>(t);
        for (int id : subbasins) {
            if (r >= rows.size() || rows[r].day != day || rows[r].subbasin != id) {
                throw GridError("incomplete grid: missing (" + (origin + day).to_string() + ", " +
                                std::to_string(id) + ")");
            }
            const auto* src = buffer.data() + rows[r].offset;
            values.insert(values.end(), src, src + n_features);
            ++r;
        }
    }
    return {origin + first_day, subbasins, feature_names, std::move(values)};
}

SpatioTemporalSeries ingest_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file '" + path + "'");
    return read_csv(in, schema);
}

void write_csv(std::ostream& out, const SpatioTemporalSeries& series) {
    out << "date,subbasin";
    for (const auto& name : series.feature_names()) out << ',' << name;
    out << '\n';
    for (std::size_t t = 0; t < series.days(); ++t) {
        const std::string date = series.date(t).to_string();
        for (std::size_t s = 0; s < series.subbasin_count(); ++s) {
            out << date << ',' << series.subbasin_ids()[s];
            for (std::size_t f = 0; f < series.feature_count(); ++f) {
                out << ',' << text::format_double(series.at(t, s, f));
            }
            out << '\n';
        }
    }
}

void write_csv_file(const std::string& path, const SpatioTemporalSeries& series) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write CSV file '" + path + "'");
    write_csv(out, series);
}

SplitSeries split_by_date(const SpatioTemporalSeries& series, const DateSplit& split) {
    const Date first = split.train_start.value_or(series.start_date());
    const Date last = split.test_end.value_or(series.end_date());
    if (first < series.start_date() || last > series.end_date()) {
        throw RangeError("split bounds " + first.to_string() + ".." + last.to_string() +
                         " outside series range " + series.start_date().to_string() + ".." +
                         series.end_date().to_string());
    }
    if (!(first <= split.train_end && split.train_end < split.val_end && split.val_end < last)) {
        throw RangeError("split dates (train_end " + split.train_end.to_string() + ", val_end " +
                         split.val_end.to_string() + ") must satisfy " + first.to_string() +
                         " <= train_end < val_end < " + last.to_string());
    }
    const auto offset = static_cast<std::size_t>(first - series.start_date());
    const auto train_days = static_cast<std::size_t>(split.train_end - first + 1);
    const auto val_days = static_cast<std::size_t>(split.val_end - split.train_end);
    const auto test_days = static_cast<std::size_t>(last - split.val_end);
    return {series.slice_days(offset, train_days), series.slice_days(offset + train_days, val_days),
            series.slice_days(offset + train_days + val_days, test_days)};
}

SpatioTemporalSeries select_subbasin(const SpatioTemporalSeries& series, int subbasin_id) {
    const std::size_t s = series.subbasin_index(subbasin_id);
    const std::size_t n_f = series.feature_count();
    std::vector<double> out;
    out.reserve(series.days() * n_f);
    for (std::size_t t = 0; t < series.days(); ++t) {
        for (std::size_t f = 0; f < n_f; ++f) out.push_back(series.at(t, s, f));
    }
    return {series.start_date(), {subbasin_id}, series.feature_names(), std::move(out)};
}

}  // namespace hydro
