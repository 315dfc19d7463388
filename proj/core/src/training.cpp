#include "hydro/training.hpp"

#include <cmath>

#include "hydro/errors.hpp"

namespace hydro {

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (batch_size < 1) throw ConfigError("batch size must be at least 1");
    if (!(lr0 > 0.0)) throw ConfigError("learning rate must be positive");
    if (lr_decay < 0.0) throw ConfigError("learning-rate decay must be non-negative");
    if (l2 < 0.0) throw ConfigError("l2 must be non-negative");
}

double learning_rate(int epoch, const TrainConfig& config) {
    return config.lr0 / (1.0 + config.lr_decay * static_cast<double>(epoch));
}

void sgd_step(BlstmModel& model, const BlstmParameters& gradients, int epoch,
              const TrainConfig& config) {
    const double lr = learning_rate(epoch, config);
    std::vector<std::span<const double>> grads;
    gradients.for_each([&](const std::string&, std::span<const double> g, bool) { grads.push_back(g); });
    std::size_t k = 0;
    model.params.for_each([&](const std::string& name, std::span<double> theta, bool is_bias) {
        const auto g = grads[k++];
        if (g.size() != theta.size()) throw DimensionError("gradient shape mismatch for " + name);
        const double decay = is_bias ? 0.0 : config.l2;
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= lr * (g[i] + decay * theta[i]);
    });
}

TrainResult train(BlstmModel model, const WindowDataset& train_set, const WindowDataset& val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
    config.validate();
    if (train_set.empty()) throw ConfigError("training set is empty");
    if (val_set.empty()) throw ConfigError("validation set is empty");

    TrainResult result;
    result.best = model;
    bool have_best = false;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto batches =
            batch_iter(train_set, config.batch_size, config.seed + static_cast<std::uint64_t>(epoch));
        double weighted = 0.0;
        for (const auto& batch : batches) {
            GradientResult step;
            try {
                step = backward(train_set, batch, model);
            } catch (const NumericalError& e) {
                throw TrainingError(std::string("diverged: ") + e.what(), epoch);
            }
            if (!std::isfinite(step.loss)) throw TrainingError("non-finite training loss", epoch);
            weighted += step.loss * static_cast<double>(batch.size());
            sgd_step(model, step.gradients, epoch, config);
        }
        EpochRecord rec{epoch, weighted / static_cast<double>(train_set.size()),
                        dataset_mse(val_set, model)};
        if (!std::isfinite(rec.val_mse)) throw TrainingError("non-finite validation loss", epoch);
        result.history.push_back(rec);
        if (!have_best || rec.val_mse < result.best_val_mse) {
            have_best = true;
            result.best = model;
            result.best_epoch = epoch;
            result.best_val_mse = rec.val_mse;
        }
        if (on_epoch) on_epoch(rec);
    }
    return result;
}

}  // namespace hydro
