#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hydro/baselines.hpp"
#include "hydro/checkpoint.hpp"
#include "hydro/evaluation.hpp"
#include "hydro/reduction.hpp"
#include "hydro/series.hpp"
#include "hydro/standardization.hpp"
#include "hydro/synthetic.hpp"
#include "hydro/training.hpp"
#include "hydro/windowing.hpp"

namespace hydro {

enum class ModelKind { Naive, Arima, Blstm };

ModelKind parse_model_kind(const std::string& text);
std::string to_string(ModelKind kind);

struct ExperimentConfig {
    // Data source: a CSV path, or the synthetic generator when empty.
    std::string data_path;
    CsvSchema schema;
    SynthConfig synth = SynthConfig::watershed_defaults();

    ReductionConfig reduction{7, 1};
    WindowSpec window{12, 4,
                      {kDatePredictor, features::kMinTemperature, features::kMaxTemperature,
                       features::kPrecipitation, features::kSoilWater, features::kStreamFlow},
                      {features::kSoilWater, features::kStreamFlow}};

    ModelKind model = ModelKind::Blstm;
    std::size_t hidden = 256;
    TrainConfig train;
    ArimaOrder arima{2, 0, 0};

    /// Unset split dates fall back to a 10:1:1 division of the series.
    std::optional<DateSplit> split;

    int train_subbasin = 1;
    std::vector<int> eval_subbasins;  // empty means the training subbasin
    std::uint64_t seed = 0;

    std::string checkpoint_out;
    std::string checkpoint_in;
    std::string stats_out;
    std::string stats_in;
    std::string report_out;
    std::string timesteps_out;

    /// Applies flat key/value settings; keys are flag names without leading
    /// dashes, with '_' and '-' interchangeable.
    void apply(const std::map<std::string, std::string, std::less<>>& values);
};

struct ExperimentResult {
    EvalReport report;
    int eval_subbasin = 0;
    StandardizationStats train_stats;  // fitted on the training subbasin
    StandardizationStats eval_stats;   // used to standardize the evaluated subbasin
    std::optional<Checkpoint> checkpoint;
    std::vector<EpochRecord> history;
    std::vector<TimestepRecord> timesteps;
    std::size_t train_samples = 0;
    std::size_t val_samples = 0;
    std::size_t test_samples = 0;
};

/// Loads the configured series (CSV or synthetic).
SpatioTemporalSeries load_series(const ExperimentConfig& config);

/// Split used when none is configured: the first 10/12 of the days train,
/// the next 1/12 validate, and the rest test.
DateSplit default_split(const SpatioTemporalSeries& series);

/// Train and test on the same subbasin.
ExperimentResult run_transductive(const ExperimentConfig& config,
                                  const EpochCallback& on_epoch = {});
ExperimentResult run_transductive(const ExperimentConfig& config, const SpatioTemporalSeries& data,
                                  const EpochCallback& on_epoch = {});

/// Train on config.train_subbasin and test on config.eval_subbasins.front(),
/// standardizing the evaluated subbasin with its own training-period stats.
ExperimentResult run_inductive(const ExperimentConfig& config, const EpochCallback& on_epoch = {});
ExperimentResult run_inductive(const ExperimentConfig& config, const SpatioTemporalSeries& data,
                               const EpochCallback& on_epoch = {});

struct SweepRow {
    std::size_t window = 1;
    std::size_t stride = 1;
    std::size_t input_steps = 0;
    std::size_t output_steps = 0;
    std::string model_timesteps;  // e.g. "12→4"
    Ratio operation_ratio;
    std::size_t train_samples = 0;
    std::vector<std::string> responses;
    std::vector<double> nrmse;
};

/// One transductive run per (w, s), keeping the daily coverage of the
/// inputs and outputs fixed at input_days and output_days.
std::vector<SweepRow> run_reduction_sweep(const ExperimentConfig& config,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                          std::size_t input_days = 84, std::size_t output_days = 28,
                                          const SpatioTemporalSeries* data = nullptr);

/// Reduced model timesteps for a fixed daily coverage; throws ConfigError
/// when w does not divide the coverage.
std::pair<std::size_t, std::size_t> reduced_steps(std::size_t window, std::size_t input_days,
                                                  std::size_t output_days);

/// Writes whichever of checkpoint/stats/report/timesteps outputs are configured.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace hydro
