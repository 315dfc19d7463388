#include "hydro/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "hydro/errors.hpp"
#include "hydro/text_io.hpp"

namespace hydro {

namespace {

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.what());
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    for (auto tok : text::split(value, ',')) {
        auto t = text::trim(tok);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::string normalize_key(std::string key) {
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

struct Datasets {
    WindowDataset train;
    WindowDataset val;
    WindowDataset test;
};

Datasets prepare(const SplitSeries& parts, const StandardizationStats& stats,
                 const ExperimentConfig& config, bool need_train) {
    Datasets out;
    auto build = [&](const SpatioTemporalSeries& part) {
        const auto z = in_stage("standardize", [&] { return standardize(part, stats); });
        const auto channels = in_stage("reduce", [&] { return reduce(z, config.reduction); });
        return in_stage("window", [&] { return extract_windows(channels, config.window); });
    };
    if (need_train) {
        out.train = build(parts.train);
        out.val = build(parts.val);
    }
    out.test = build(parts.test);
    return out;
}

std::vector<double> predict(const ExperimentConfig& config, const std::optional<Checkpoint>& ckpt,
                            const WindowDataset& data) {
    const std::size_t O = data.output_steps;
    const std::size_t R = data.r();
    std::vector<double> out;
    out.reserve(data.size() * O * R);
    switch (config.model) {
        case ModelKind::Blstm:
            for (std::size_t n = 0; n < data.size(); ++n) {
                const Matrix pred = blstm_forward(data.input(n), ckpt->model);
                out.insert(out.end(), pred.values().begin(), pred.values().end());
            }
            break;
        case ModelKind::Naive:
            for (std::size_t n = 0; n < data.size(); ++n) {
                const Matrix pred = naive_forecast(data.input(n), config.window);
                out.insert(out.end(), pred.values().begin(), pred.values().end());
            }
            break;
        case ModelKind::Arima: {
            std::vector<std::size_t> cols;
            for (const auto& r : data.responses) {
                auto it = std::find(data.predictors.begin(), data.predictors.end(), r);
                if (it == data.predictors.end()) {
                    throw ConfigError("ARIMA needs response '" + r + "' among the predictors");
                }
                cols.push_back(static_cast<std::size_t>(it - data.predictors.begin()));
            }
            const std::size_t I = data.input_steps;
            const std::size_t P = data.p();
            std::vector<double> history(I);
            std::vector<double> block(O * R);
            for (std::size_t n = 0; n < data.size(); ++n) {
                const auto window = data.input(n);
                for (std::size_t r = 0; r < R; ++r) {
                    for (std::size_t k = 0; k < I; ++k) history[k] = window[k * P + cols[r]];
                    const auto model = arima_fit(history, config.arima);
                    const auto fc = arima_forecast(model, history, O);
                    for (std::size_t j = 0; j < O; ++j) block[j * R + r] = fc[j];
                }
                out.insert(out.end(), block.begin(), block.end());
            }
            break;
        }
    }
    return out;
}

/// Adopts the pipeline shape recorded in a checkpoint.
ExperimentConfig resolve(const ExperimentConfig& config, std::optional<Checkpoint>& loaded) {
    ExperimentConfig cfg = config;
    if (cfg.model == ModelKind::Blstm && !cfg.checkpoint_in.empty()) {
        loaded = in_stage("train", [&] { return load_checkpoint_file(cfg.checkpoint_in); });
        cfg.reduction.window = loaded->window;
        cfg.reduction.stride = loaded->stride;
        cfg.window.input_steps = loaded->model.config.input_steps;
        cfg.window.output_steps = loaded->model.config.output_steps;
        cfg.window.predictors = loaded->predictors;
        cfg.window.responses = loaded->responses;
        cfg.hidden = loaded->model.config.hidden;
    }
    in_stage("config", [&] {
        cfg.reduction.validate();
        cfg.window.validate();
        if (cfg.model == ModelKind::Blstm) cfg.train.validate();
        if (cfg.model == ModelKind::Arima) {
            cfg.arima.validate();
            if (cfg.window.input_steps < arima_min_history(cfg.arima)) {
                throw ConfigError("ARIMA(" + cfg.arima.to_string() + ") needs at least " +
                                  std::to_string(arima_min_history(cfg.arima)) +
                                  " input steps per window, have " +
                                  std::to_string(cfg.window.input_steps));
            }
        }
        return 0;
    });
    return cfg;
}

ExperimentResult run(const ExperimentConfig& base, const SpatioTemporalSeries& data, int eval_id,
                     const EpochCallback& on_epoch) {
    std::optional<Checkpoint> loaded;
    const ExperimentConfig config = resolve(base, loaded);
    const bool inductive = eval_id != config.train_subbasin;

    const DateSplit split = config.split ? *config.split : default_split(data);
    const auto train_parts = in_stage("split", [&] {
        return split_by_date(select_subbasin(data, config.train_subbasin), split);
    });

    std::optional<StandardizationStats> external;
    if (!config.stats_in.empty()) {
        external = in_stage("standardize", [&] { return load_stats_file(config.stats_in); });
    }
    auto has_subbasin = [](const StandardizationStats& s, int id) {
        return std::find(s.subbasin_ids.begin(), s.subbasin_ids.end(), id) != s.subbasin_ids.end();
    };

    ExperimentResult result;
    result.eval_subbasin = eval_id;
    result.train_stats = in_stage("standardize", [&] {
        return external && has_subbasin(*external, config.train_subbasin) ? *external
                                                                          : fit_stats(train_parts.train);
    });
    const bool need_training_data = !(config.model == ModelKind::Blstm && loaded);
    const Datasets train_data = prepare(train_parts, result.train_stats, config, need_training_data);
    result.train_samples = train_data.train.size();
    result.val_samples = train_data.val.size();

    if (config.model == ModelKind::Blstm) {
        if (loaded) {
            result.checkpoint = std::move(loaded);
        } else {
            in_stage("train", [&] {
                const BlstmConfig shape{config.window.p(), config.hidden, config.window.input_steps,
                                        config.window.output_steps, config.window.r()};
                TrainConfig tc = config.train;
                tc.seed = config.seed * 2 + 1;
                auto trained = train(BlstmModel::initialize(shape, config.seed * 2), train_data.train,
                                     train_data.val, tc, on_epoch);
                result.history = trained.history;
                result.checkpoint = Checkpoint{std::move(trained.best), trained.best_epoch,
                                               trained.best_val_mse,       config.reduction.window,
                                               config.reduction.stride,    config.window.predictors,
                                               config.window.responses};
                return 0;
            });
        }
    }

    WindowDataset test_set;
    if (!inductive) {
        result.eval_stats = result.train_stats;
        test_set = train_data.test;
    } else {
        const auto eval_parts = in_stage("split", [&] {
            return split_by_date(select_subbasin(data, eval_id), split);
        });
        result.eval_stats = in_stage("standardize", [&] {
            return external && has_subbasin(*external, eval_id) ? *external : fit_stats(eval_parts.train);
        });
        test_set = prepare(eval_parts, result.eval_stats, config, false).test;
    }
    result.test_samples = test_set.size();

    const auto predictions = in_stage("predict", [&] { return predict(config, result.checkpoint, test_set); });
    result.report = in_stage("evaluation", [&] {
        return evaluate_run(predictions, test_set, result.eval_stats, &result.timesteps);
    });
    return result;
}

}  // namespace

ModelKind parse_model_kind(const std::string& text) {
    if (text == "naive") return ModelKind::Naive;
    if (text == "arima") return ModelKind::Arima;
    if (text == "blstm") return ModelKind::Blstm;
    throw ConfigError("unknown model '" + text + "' (expected naive, arima or blstm)");
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Naive: return "naive";
        case ModelKind::Arima: return "arima";
        case ModelKind::Blstm: return "blstm";
    }
    return "?";
}

void ExperimentConfig::apply(const std::map<std::string, std::string, std::less<>>& values) {
    std::optional<Date> train_end, val_end, train_start, test_end;
    if (split) {
        train_end = split->train_end;
        val_end = split->val_end;
        train_start = split->train_start;
        test_end = split->test_end;
    }
    auto as_size = [](const std::string& key, const std::string& v) {
        const auto n = text::parse_int(v);
        if (n < 0) throw ConfigError(key + " must be non-negative");
        return static_cast<std::size_t>(n);
    };
    for (const auto& [raw_key, value] : values) {
        const std::string key = normalize_key(raw_key);
        try {
            if (key == "data") data_path = value;
            else if (key == "schema") schema = CsvSchema::parse(value);
            else if (key == "synth-config") synth.apply(text::read_key_values_file(value));
            else if (key == "w" || key == "window") reduction.window = as_size(key, value);
            else if (key == "s" || key == "stride") reduction.stride = as_size(key, value);
            else if (key == "input-steps") window.input_steps = as_size(key, value);
            else if (key == "output-steps") window.output_steps = as_size(key, value);
            else if (key == "predictors") window.predictors = split_list(value);
            else if (key == "responses") window.responses = split_list(value);
            else if (key == "model") model = parse_model_kind(value);
            else if (key == "hidden") hidden = as_size(key, value);
            else if (key == "epochs") train.epochs = static_cast<int>(text::parse_int(value));
            else if (key == "batch") train.batch_size = as_size(key, value);
            else if (key == "lr") train.lr0 = text::parse_double(value);
            else if (key == "lr-decay") train.lr_decay = text::parse_double(value);
            else if (key == "l2") train.l2 = text::parse_double(value);
            else if (key == "seed") seed = static_cast<std::uint64_t>(text::parse_int(value));
            else if (key == "arima-order") arima = ArimaOrder::parse(value);
            else if (key == "train-end") train_end = Date::parse(value);
            else if (key == "val-end") val_end = Date::parse(value);
            else if (key == "train-start") train_start = Date::parse(value);
            else if (key == "test-end") test_end = Date::parse(value);
            else if (key == "train-subbasin") train_subbasin = static_cast<int>(text::parse_int(value));
            else if (key == "eval-subbasin" || key == "eval-subbasins") {
                eval_subbasins.clear();
                for (const auto& id : split_list(value)) eval_subbasins.push_back(static_cast<int>(text::parse_int(id)));
            }
            else if (key == "checkpoint-out") checkpoint_out = value;
            else if (key == "checkpoint-in") checkpoint_in = value;
            else if (key == "stats-out") stats_out = value;
            else if (key == "stats-in") stats_in = value;
            else if (key == "report-out") report_out = value;
            else if (key == "timesteps-out") timesteps_out = value;
            else throw ConfigError("unknown setting '" + raw_key + "'");
        } catch (const ParseError& e) {
            throw ConfigError("setting '" + raw_key + "': " + e.what());
        }
    }
    if (train_end.has_value() != val_end.has_value()) {
        throw ConfigError("train-end and val-end must be given together");
    }
    if (train_end) split = DateSplit{*train_end, *val_end, train_start, test_end};
}

SpatioTemporalSeries load_series(const ExperimentConfig& config) {
    return in_stage("load", [&] {
        return config.data_path.empty() ? generate(config.synth)
                                        : ingest_csv(config.data_path, config.schema);
    });
}

DateSplit default_split(const SpatioTemporalSeries& series) {
    const std::size_t T = series.days();
    const std::size_t train_days = T * 10 / 12;
    const std::size_t val_days = T / 12;
    if (train_days == 0 || val_days == 0 || train_days + val_days >= T) {
        throw RangeError("series of " + std::to_string(T) + " days is too short for a default split");
    }
    const Date train_end = series.date(train_days - 1);
    return {train_end, train_end + static_cast<long long>(val_days), std::nullopt, std::nullopt};
}

ExperimentResult run_transductive(const ExperimentConfig& config, const EpochCallback& on_epoch) {
    return run_transductive(config, load_series(config), on_epoch);
}

ExperimentResult run_transductive(const ExperimentConfig& config, const SpatioTemporalSeries& data,
                                  const EpochCallback& on_epoch) {
    return run(config, data, config.train_subbasin, on_epoch);
}

ExperimentResult run_inductive(const ExperimentConfig& config, const EpochCallback& on_epoch) {
    return run_inductive(config, load_series(config), on_epoch);
}

ExperimentResult run_inductive(const ExperimentConfig& config, const SpatioTemporalSeries& data,
                               const EpochCallback& on_epoch) {
    if (config.eval_subbasins.empty()) {
        throw StageError("config", "inductive evaluation needs an eval subbasin");
    }
    const int eval_id = config.eval_subbasins.front();
    if (eval_id == config.train_subbasin) {
        throw StageError("config", "inductive evaluation needs an eval subbasin different from the training subbasin");
    }
    in_stage("load", [&] { return data.subbasin_index(eval_id); });
    return run(config, data, eval_id, on_epoch);
}

std::pair<std::size_t, std::size_t> reduced_steps(std::size_t window, std::size_t input_days,
                                                  std::size_t output_days) {
    if (window == 0 || input_days % window != 0 || output_days % window != 0) {
        throw ConfigError("window " + std::to_string(window) + " does not divide the " +
                          std::to_string(input_days) + "/" + std::to_string(output_days) +
                          "-day coverage");
    }
    return {input_days / window, output_days / window};
}

std::vector<SweepRow> run_reduction_sweep(const ExperimentConfig& config,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                          std::size_t input_days, std::size_t output_days,
                                          const SpatioTemporalSeries* data) {
    std::optional<SpatioTemporalSeries> loaded;
    if (!data) {
        loaded = load_series(config);
        data = &*loaded;
    }
    std::vector<SweepRow> rows;
    for (const auto& [w, s] : pairs) {
        SweepRow row;
        row.window = w;
        row.stride = s;
        in_stage("config", [&] {
            row.operation_ratio = operation_ratio(w, s);
            std::tie(row.input_steps, row.output_steps) = reduced_steps(w, input_days, output_days);
            return 0;
        });
        row.model_timesteps = std::to_string(row.input_steps) + "→" + std::to_string(row.output_steps);
        ExperimentConfig cfg = config;
        cfg.checkpoint_in.clear();
        cfg.reduction = {w, s};
        cfg.window.input_steps = row.input_steps;
        cfg.window.output_steps = row.output_steps;
        const auto result = run_transductive(cfg, *data);
        row.train_samples = result.train_samples;
        row.responses = result.report.responses;
        row.nrmse = result.report.nrmse;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
    in_stage("output", [&] {
        if (!config.checkpoint_out.empty()) {
            if (!result.checkpoint) throw ConfigError("--checkpoint-out requires the blstm model");
            save_checkpoint_file(config.checkpoint_out, *result.checkpoint);
        }
        if (!config.stats_out.empty()) save_stats_file(config.stats_out, result.eval_stats);
        if (!config.report_out.empty()) {
            std::ofstream out(config.report_out);
            if (!out) throw Error("cannot write report '" + config.report_out + "'");
            write_report_csv(out, result.report);
        }
        if (!config.timesteps_out.empty()) {
            std::ofstream out(config.timesteps_out);
            if (!out) throw Error("cannot write timesteps '" + config.timesteps_out + "'");
            write_timesteps_csv(out, result.timesteps);
        }
        return 0;
    });
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "w,s,model_timesteps,operation_ratio,train_samples";
    if (!rows.empty()) {
        for (const auto& r : rows.front().responses) out << ",nrmse_" << r;
    }
    out << '\n';
    for (const auto& row : rows) {
        out << row.window << ',' << row.stride << ',' << row.model_timesteps << ','
            << row.operation_ratio.to_string() << ',' << row.train_samples;
        for (double v : row.nrmse) out << ',' << text::format_double(v);
        out << '\n';
    }
}

}  // namespace hydro
