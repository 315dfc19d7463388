#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hydro/standardization.hpp"
#include "hydro/windowing.hpp"

namespace hydro {

/// RMSE divided by the range of `truth`. Throws RangeError on a zero range.
double nrmse(std::span<const double> pred, std::span<const double> truth);

enum class Severity { Normal = 0, Moderate = 1, Severe = 2, Extreme = 3 };
enum class EventSign { None, Low, High };

inline constexpr std::size_t kSeverityCount = 4;
/// Normal plus low/high variants of the three non-normal severities.
inline constexpr std::size_t kSignedClassCount = 7;

struct EventClass {
    Severity severity = Severity::Normal;
    EventSign sign = EventSign::None;

    /// 0 = normal, 1..3 = low moderate..extreme, 4..6 = high moderate..extreme.
    std::size_t signed_index() const;
    std::string to_string() const;
    bool operator==(const EventClass&) const = default;
};

/// |z| <= 1 normal, (1, 1.5] moderate, (1.5, 2] severe, beyond 2 extreme;
/// negative z is tagged low, positive high.
EventClass classify_event(double z);

std::string severity_name(Severity s);
std::string signed_class_name(std::size_t signed_index);

struct EvalReport {
    std::vector<std::string> responses;
    std::vector<double> nrmse;  // per response, original units
    std::array<std::array<std::size_t, kSeverityCount>, kSeverityCount> confusion{};  // truth x pred
    std::array<std::array<std::size_t, kSignedClassCount>, kSignedClassCount> signed_confusion{};
    std::array<double, kSeverityCount> precision{};
    std::array<double, kSeverityCount> recall{};
    std::size_t sample_count = 0;    // windows
    std::size_t timestep_count = 0;  // scored (window, output step, response) triples
};

/// One scored output value, in original units and as z-scores.
struct TimestepRecord {
    Date date;
    int subbasin = 0;
    std::string feature;
    std::size_t lead = 0;
    double truth = 0.0;
    double pred = 0.0;
    double z_truth = 0.0;
    double z_pred = 0.0;
    EventClass class_truth;
    EventClass class_pred;
};

/// Maps a standardized value covering `days` days from `start` back to
/// original units: the mean over those days of v * std + mean.
double destandardize_period(double value, const StandardizationStats& stats, Date start,
                            std::size_t days, std::size_t subbasin_index,
                            std::size_t feature_index);

/// Scores standardized predictions (N x O x R, aligned with `truth`) against
/// the dataset's targets: NRMSE per response after destandardization, and
/// event classes from the standardized values.
EvalReport evaluate_run(std::span<const double> predictions, const WindowDataset& truth,
                        const StandardizationStats& stats,
                        std::vector<TimestepRecord>* timesteps = nullptr);

void write_report_text(std::ostream& out, const EvalReport& report);
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_timesteps_csv(std::ostream& out, std::span<const TimestepRecord> records);

}  // namespace hydro
