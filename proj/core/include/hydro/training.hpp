#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hydro/blstm.hpp"
#include "hydro/windowing.hpp"

namespace hydro {

struct TrainConfig {
    int epochs = 50;
    std::size_t batch_size = 128;
    double lr0 = 0.01;
    double lr_decay = 0.001;
    double l2 = 0.001;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Inverse-time decay: lr0 / (1 + lr_decay * epoch).
double learning_rate(int epoch, const TrainConfig& config);

/// theta <- theta - lr * (grad + l2 * theta); the L2 term skips biases.
void sgd_step(BlstmModel& model, const BlstmParameters& gradients, int epoch,
              const TrainConfig& config);

struct EpochRecord {
    int epoch = 0;
    double train_mse = 0.0;  // sample-weighted mean of the epoch's mini-batch losses
    double val_mse = 0.0;
};

struct TrainResult {
    BlstmModel best;
    int best_epoch = 0;
    double best_val_mse = 0.0;
    std::vector<EpochRecord> history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Shuffled mini-batch SGD for config.epochs epochs, keeping the parameters
/// with the lowest full-validation MSE. Throws TrainingError on divergence.
TrainResult train(BlstmModel model, const WindowDataset& train_set, const WindowDataset& val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace hydro
