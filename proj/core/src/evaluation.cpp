#include "hydro/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hydro/errors.hpp"
#include "hydro/text_io.hpp"

namespace hydro {

double nrmse(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw DimensionError("nrmse: length mismatch");
    if (truth.empty()) throw DimensionError("nrmse: empty input");
    const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) throw RangeError("nrmse: degenerate truth range (max == min)");
    double ss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(pred.size())) / range;
}

EventClass classify_event(double z) {
    if (!std::isfinite(z)) throw NumericalError("classify_event: z is not finite");
    const double a = std::abs(z);
    if (a <= 1.0) return {Severity::Normal, EventSign::None};
    const EventSign sign = z < 0.0 ? EventSign::Low : EventSign::High;
    if (a <= 1.5) return {Severity::Moderate, sign};
    if (a <= 2.0) return {Severity::Severe, sign};
    return {Severity::Extreme, sign};
}

std::size_t EventClass::signed_index() const {
    if (severity == Severity::Normal) return 0;
    const auto s = static_cast<std::size_t>(severity);
    return sign == EventSign::Low ? s : s + 3;
}

std::string severity_name(Severity s) {
    switch (s) {
        case Severity::Normal: return "normal";
        case Severity::Moderate: return "moderate";
        case Severity::Severe: return "severe";
        case Severity::Extreme: return "extreme";
    }
    return "?";
}

std::string signed_class_name(std::size_t i) {
    if (i == 0) return "normal";
    const bool low = i <= 3;
    const auto sev = static_cast<Severity>(low ? i : i - 3);
    return severity_name(sev) + (low ? "-low" : "-high");
}

std::string EventClass::to_string() const { return signed_class_name(signed_index()); }

double destandardize_period(double value, const StandardizationStats& stats, Date start,
                            std::size_t days, std::size_t subbasin_index,
                            std::size_t feature_index) {
    if (days == 0) throw RangeError("destandardize_period: empty period");
    double acc = 0.0;
    for (std::size_t d = 0; d < days; ++d) {
        const Date day = start + static_cast<long long>(d);
        acc += destandardize(value, stats, day.day_of_year(), subbasin_index, feature_index);
    }
    return days == 1 ? acc : acc / static_cast<double>(days);
}

EvalReport evaluate_run(std::span<const double> predictions, const WindowDataset& truth,
                        const StandardizationStats& stats, std::vector<TimestepRecord>* timesteps) {
    const std::size_t N = truth.size();
    const std::size_t O = truth.output_steps;
    const std::size_t R = truth.r();
    if (N == 0) throw DimensionError("evaluate_run: no samples to evaluate");
    if (truth.targets.size() != N * O * R) {
        throw DimensionError("evaluate_run: alignment error, dataset targets do not match its provenance");
    }
    if (predictions.size() != N * O * R) {
        throw DimensionError("evaluate_run: alignment error, got " + std::to_string(predictions.size()) +
                             " predictions for " + std::to_string(N * O * R) + " targets");
    }

    std::vector<std::size_t> f_idx(R);
    for (std::size_t r = 0; r < R; ++r) f_idx[r] = stats.feature_index(truth.responses[r]);

    EvalReport report;
    report.responses = truth.responses;
    report.sample_count = N;
    std::vector<std::vector<double>> pred_orig(R), truth_orig(R);
    for (auto& v : pred_orig) v.reserve(N * O);
    for (auto& v : truth_orig) v.reserve(N * O);
    if (timesteps) timesteps->reserve(timesteps->size() + N * O * R);

    for (std::size_t n = 0; n < N; ++n) {
        const auto& prov = truth.provenance[n];
        const std::size_t s_idx = stats.subbasin_index(prov.subbasin_id);
        const auto target = truth.target(n);
        for (std::size_t j = 0; j < O; ++j) {
            const Date start = truth.target_date(n, j);
            for (std::size_t r = 0; r < R; ++r) {
                const double z_true = target[j * R + r];
                const double z_pred = predictions[(n * O + j) * R + r];
                const double y_true = destandardize_period(z_true, stats, start, truth.window_days, s_idx, f_idx[r]);
                const double y_pred = destandardize_period(z_pred, stats, start, truth.window_days, s_idx, f_idx[r]);
                truth_orig[r].push_back(y_true);
                pred_orig[r].push_back(y_pred);
                const EventClass ct = classify_event(z_true);
                const EventClass cp = classify_event(z_pred);
                ++report.confusion[static_cast<std::size_t>(ct.severity)][static_cast<std::size_t>(cp.severity)];
                ++report.signed_confusion[ct.signed_index()][cp.signed_index()];
                ++report.timestep_count;
                if (timesteps) {
                    timesteps->push_back({start, prov.subbasin_id, truth.responses[r], j + 1, y_true,
                                          y_pred, z_true, z_pred, ct, cp});
                }
            }
        }
    }
    for (std::size_t r = 0; r < R; ++r) report.nrmse.push_back(nrmse(pred_orig[r], truth_orig[r]));

    for (std::size_t c = 0; c < kSeverityCount; ++c) {
        std::size_t row = 0, col = 0;
        for (std::size_t k = 0; k < kSeverityCount; ++k) {
            row += report.confusion[c][k];
            col += report.confusion[k][c];
        }
        const double hit = static_cast<double>(report.confusion[c][c]);
        report.recall[c] = row == 0 ? 0.0 : hit / static_cast<double>(row);
        report.precision[c] = col == 0 ? 0.0 : hit / static_cast<double>(col);
    }
    return report;
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

void write_report_text(std::ostream& out, const EvalReport& report) {
    out << "windows: " << report.sample_count << "  scored values: " << report.timestep_count << '\n';
    out << "NRMSE\n";
    for (std::size_t r = 0; r < report.responses.size(); ++r) {
        out << "  " << report.responses[r] << ": " << fixed(report.nrmse[r], 6) << '\n';
    }
    out << "event confusion (rows truth, cols predicted)\n";
    out << "  " << std::string(10, ' ');
    for (std::size_t c = 0; c < kSeverityCount; ++c) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%10s", severity_name(static_cast<Severity>(c)).c_str());
        out << buf;
    }
    out << "  precision    recall\n";
    for (std::size_t t = 0; t < kSeverityCount; ++t) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "  %-10s", severity_name(static_cast<Severity>(t)).c_str());
        out << buf;
        for (std::size_t c = 0; c < kSeverityCount; ++c) {
            std::snprintf(buf, sizeof buf, "%10zu", report.confusion[t][c]);
            out << buf;
        }
        out << "  " << fixed(report.precision[t], 6) << "  " << fixed(report.recall[t], 6) << '\n';
    }
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "kind,row,col,value\n";
    out << "windows,,," << report.sample_count << '\n';
    out << "scored_values,,," << report.timestep_count << '\n';
    for (std::size_t r = 0; r < report.responses.size(); ++r) {
        out << "nrmse," << report.responses[r] << ",," << text::format_double(report.nrmse[r]) << '\n';
    }
    for (std::size_t t = 0; t < kSeverityCount; ++t) {
        for (std::size_t c = 0; c < kSeverityCount; ++c) {
            out << "confusion," << severity_name(static_cast<Severity>(t)) << ','
                << severity_name(static_cast<Severity>(c)) << ',' << report.confusion[t][c] << '\n';
        }
    }
    for (std::size_t t = 0; t < kSignedClassCount; ++t) {
        for (std::size_t c = 0; c < kSignedClassCount; ++c) {
            out << "confusion_signed," << signed_class_name(t) << ',' << signed_class_name(c) << ','
                << report.signed_confusion[t][c] << '\n';
        }
    }
    for (std::size_t c = 0; c < kSeverityCount; ++c) {
        out << "precision," << severity_name(static_cast<Severity>(c)) << ",,"
            << text::format_double(report.precision[c]) << '\n';
        out << "recall," << severity_name(static_cast<Severity>(c)) << ",,"
            << text::format_double(report.recall[c]) << '\n';
    }
}

void write_timesteps_csv(std::ostream& out, std::span<const TimestepRecord> records) {
    out << "date,subbasin,feature,lead,truth,pred,z_truth,z_pred,class_truth,class_pred\n";
    for (const auto& rec : records) {
        out << rec.date.to_string() << ',' << rec.subbasin << ',' << rec.feature << ',' << rec.lead
            << ',' << text::format_double(rec.truth) << ',' << text::format_double(rec.pred) << ','
            << text::format_double(rec.z_truth) << ',' << text::format_double(rec.z_pred) << ','
            << rec.class_truth.to_string() << ',' << rec.class_pred.to_string() << '\n';
    }
}

}  // namespace hydro
