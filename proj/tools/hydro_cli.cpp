#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hydro/errors.hpp"
#include "hydro/experiment.hpp"
#include "hydro/text_io.hpp"

namespace {

using Settings = std::map<std::string, std::string, std::less<>>;

/// Pipeline flags shared by train, evaluate and sweep; each maps onto an
/// ExperimentConfig key of the same name.
class PipelineFlags {
public:
    void attach(CLI::App* app) {
        app->add_option("--config", config_path_, "key = value settings file; flags override it");
        add(app, "--data", "data", "daily CSV input (synthetic data when omitted)");
        add(app, "--schema", "schema", "column renames, e.g. stream_flow=FLOW_OUTcms,date=day");
        add(app, "--synth-config", "synth-config", "synthetic generator settings file");
        add(app, "-w,--window", "w", "reduction window in days");
        add(app, "-s,--stride", "s", "reduction stride in days (divides w)");
        add(app, "--input-steps", "input-steps", "reduced input timesteps I");
        add(app, "--output-steps", "output-steps", "reduced output timesteps O");
        add(app, "--predictors", "predictors", "comma-separated predictor features");
        add(app, "--responses", "responses", "comma-separated response features");
        add(app, "--model", "model", "naive, arima or blstm");
        add(app, "--arima-order", "arima-order", "p,d,q with q = 0");
        add(app, "--hidden", "hidden", "hidden units per direction");
        add(app, "--epochs", "epochs", "training epochs");
        add(app, "--batch", "batch", "mini-batch size");
        add(app, "--lr", "lr", "initial learning rate");
        add(app, "--lr-decay", "lr-decay", "inverse-time learning rate decay");
        add(app, "--l2", "l2", "L2 weight penalty");
        add(app, "--seed", "seed", "model and shuffle seed");
        add(app, "--train-start", "train-start", "first training day (YYYY-MM-DD)");
        add(app, "--train-end", "train-end", "last training day");
        add(app, "--val-end", "val-end", "last validation day");
        add(app, "--test-end", "test-end", "last test day");
        add(app, "--train-subbasin", "train-subbasin", "subbasin id used for training");
        add(app, "--eval-subbasin", "eval-subbasin", "subbasin id to evaluate (inductive when different)");
        add(app, "--checkpoint-out", "checkpoint-out", "write the trained model here");
        add(app, "--checkpoint-in", "checkpoint-in", "load a trained model instead of training");
        add(app, "--stats-out", "stats-out", "write standardization statistics here");
        add(app, "--stats-in", "stats-in", "read standardization statistics from here");
        add(app, "--report-out", "report-out", "write the evaluation report CSV here");
        add(app, "--timesteps-out", "timesteps-out", "write per-timestep scores here");
    }

    hydro::ExperimentConfig resolve() const {
        hydro::ExperimentConfig config;
        if (!config_path_.empty()) config.apply(hydro::text::read_key_values_file(config_path_));
        Settings overrides;
        for (const auto& [key, option] : options_) {
            if (option->count() > 0) overrides[key] = values_.at(key);
        }
        config.apply(overrides);
        return config;
    }

private:
    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        options_.emplace_back(key, app->add_option(flag, values_[key], help));
    }

    std::string config_path_;
    std::map<std::string, std::string> values_;
    std::vector<std::pair<std::string, CLI::Option*>> options_;
};

void print_epoch(const hydro::EpochRecord& e) {
    std::fprintf(stderr, "epoch %3d  train_mse %.6f  val_mse %.6f\n", e.epoch, e.train_mse, e.val_mse);
}

hydro::ExperimentResult run_pipeline(const hydro::ExperimentConfig& config) {
    const bool inductive = !config.eval_subbasins.empty() &&
                           config.eval_subbasins.front() != config.train_subbasin;
    return inductive ? hydro::run_inductive(config, print_epoch)
                     : hydro::run_transductive(config, print_epoch);
}

void print_result(const hydro::ExperimentConfig& config, const hydro::ExperimentResult& result) {
    std::cout << "model " << hydro::to_string(config.model) << ", train subbasin " << config.train_subbasin
              << ", eval subbasin " << result.eval_subbasin << '\n';
    std::cout << "windows: train " << result.train_samples << ", val " << result.val_samples << ", test "
              << result.test_samples << '\n';
    if (result.checkpoint) {
        std::cout << "best epoch " << result.checkpoint->epoch << ", val_mse "
                  << hydro::text::format_double(result.checkpoint->val_mse) << '\n';
    }
    hydro::write_report_text(std::cout, result.report);
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& text) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (auto item : hydro::text::split(text, ';')) {
        const auto parts = hydro::text::split(hydro::text::trim(item), ',');
        if (parts.size() != 2) throw hydro::ConfigError("bad pair '" + std::string(item) + "', expected w,s");
        pairs.emplace_back(static_cast<std::size_t>(hydro::text::parse_int(parts[0])),
                           static_cast<std::size_t>(hydro::text::parse_int(parts[1])));
    }
    return pairs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seasonal hydrological forecasting with timestep reduction and a BLSTM"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "generate a synthetic watershed CSV");
    std::string synth_config, synth_out;
    synth->add_option("--synth-config", synth_config, "generator settings file");
    synth->add_option("-o,--out", synth_out, "output CSV")->required();

    auto* ingest = app.add_subcommand("ingest", "validate a CSV and rewrite it in canonical form");
    std::string ingest_data, ingest_schema, ingest_out;
    ingest->add_option("--data", ingest_data, "input CSV")->required();
    ingest->add_option("--schema", ingest_schema, "column renames");
    ingest->add_option("-o,--out", ingest_out, "canonical CSV output");

    auto* train = app.add_subcommand("train", "train (or fit) a model and evaluate it on the test period");
    PipelineFlags train_flags;
    train_flags.attach(train);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a saved checkpoint or a baseline");
    PipelineFlags eval_flags;
    eval_flags.attach(evaluate);

    auto* sweep = app.add_subcommand("sweep", "compare reduction settings at fixed daily coverage");
    PipelineFlags sweep_flags;
    sweep_flags.attach(sweep);
    std::string pairs_text = "1,1;7,1;7,7;14,1;14,14;28,1;28,28";
    std::size_t input_days = 84, output_days = 28;
    std::string sweep_out;
    sweep->add_option("--pairs", pairs_text, "semicolon-separated w,s pairs")->capture_default_str();
    sweep->add_option("--input-days", input_days, "daily input coverage")->capture_default_str();
    sweep->add_option("--output-days", output_days, "daily output coverage")->capture_default_str();
    sweep->add_option("-o,--out", sweep_out, "sweep CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            auto cfg = hydro::SynthConfig::watershed_defaults();
            if (!synth_config.empty()) cfg.apply(hydro::text::read_key_values_file(synth_config));
            const auto series = hydro::generate(cfg);
            hydro::write_csv_file(synth_out, series);
            std::cout << "wrote " << series.days() << " days x " << series.subbasin_count() << " subbasins x "
                      << series.feature_count() << " features to " << synth_out << '\n';
        } else if (ingest->parsed()) {
            const auto schema = hydro::CsvSchema::parse(ingest_schema);
            const auto series = hydro::ingest_csv(ingest_data, schema);
            std::cout << series.start_date().to_string() << " .. " << series.end_date().to_string() << ", "
                      << series.days() << " days, " << series.subbasin_count() << " subbasins, features:";
            for (const auto& f : series.feature_names()) std::cout << ' ' << f;
            std::cout << '\n';
            if (!ingest_out.empty()) hydro::write_csv_file(ingest_out, series);
        } else if (train->parsed()) {
            const auto config = train_flags.resolve();
            if (!config.checkpoint_in.empty()) {
                throw hydro::ConfigError("train does not take --checkpoint-in; use evaluate");
            }
            const auto result = run_pipeline(config);
            hydro::write_outputs(config, result);
            print_result(config, result);
        } else if (evaluate->parsed()) {
            const auto config = eval_flags.resolve();
            if (config.model == hydro::ModelKind::Blstm && config.checkpoint_in.empty()) {
                throw hydro::ConfigError("evaluating the blstm model needs --checkpoint-in");
            }
            const auto result = run_pipeline(config);
            hydro::write_outputs(config, result);
            print_result(config, result);
        } else if (sweep->parsed()) {
            const auto config = sweep_flags.resolve();
            const auto rows = hydro::run_reduction_sweep(config, parse_pairs(pairs_text), input_days, output_days);
            hydro::write_sweep_csv(std::cout, rows);
            if (!sweep_out.empty()) {
                std::ofstream out(sweep_out);
                if (!out) throw hydro::Error("cannot write '" + sweep_out + "'");
                hydro::write_sweep_csv(out, rows);
            }
        }
    } catch (const hydro::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
