#include "hydro/blstm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hydro/errors.hpp"
#include "hydro/windowing.hpp"

namespace hydro {

namespace {

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void check_cell_shapes(const LstmCellParams& p, std::size_t inputs, std::size_t hidden) {
    for (std::size_t k = 0; k < 4; ++k) {
        if (p.w[k].rows() != hidden || p.w[k].cols() != inputs || p.u[k].rows() != hidden ||
            p.u[k].cols() != hidden || p.b[k].size() != hidden) {
            throw DimensionError("LSTM cell parameter shapes do not match (P=" + std::to_string(inputs) +
                                 ", h=" + std::to_string(hidden) + ")");
        }
    }
}

/// Activations cached for one processed step of one direction.
struct StepCache {
    std::array<std::vector<double>, 4> gate;
    std::vector<double> c;
    std::vector<double> tanh_c;
    std::vector<double> h;
};

/// Scratch buffers for one forward/backward pass of a single window.
class Workspace {
public:
    explicit Workspace(const BlstmConfig& cfg) : cfg_(cfg) {
        const std::size_t h = cfg.hidden;
        for (auto* dir : {&fwd_, &bwd_}) {
            dir->resize(cfg.input_steps);
            for (auto& step : *dir) {
                for (auto& g : step.gate) g.assign(h, 0.0);
                step.c.assign(h, 0.0);
                step.tanh_c.assign(h, 0.0);
                step.h.assign(h, 0.0);
            }
        }
        zeros_.assign(h, 0.0);
        dh_fwd_.assign(cfg.input_steps * h, 0.0);
        dh_bwd_.assign(cfg.input_steps * h, 0.0);
        concat_.assign(2 * h, 0.0);
        dconcat_.assign(2 * h, 0.0);
        dz_.fill(std::vector<double>(h, 0.0));
        dh_carry_.assign(h, 0.0);
        dc_carry_.assign(h, 0.0);
    }

    // Fills `out` (O x R) with predictions for `window`.
    void forward(std::span<const double> window, const BlstmModel& model, std::span<double> out) {
        const auto& cfg = cfg_;
        const std::size_t P = cfg.predictors;
        const std::size_t I = cfg.input_steps;
        for (std::size_t n = 0; n < I; ++n) {
            run_step(model.params.forward_cell, window.subspan(n * P, P),
                     n == 0 ? nullptr : &fwd_[n - 1], fwd_[n]);
        }
        // Backward direction: cache index equals the time index it consumed.
        for (std::size_t n = I; n-- > 0;) {
            run_step(model.params.backward_cell, window.subspan(n * P, P),
                     n + 1 == I ? nullptr : &bwd_[n + 1], bwd_[n]);
        }
        const std::size_t h = cfg.hidden;
        const std::size_t R = cfg.responses;
        for (std::size_t j = 0; j < cfg.output_steps; ++j) {
            const std::size_t t = I - cfg.output_steps + j;
            std::copy(fwd_[t].h.begin(), fwd_[t].h.end(), concat_.begin());
            std::copy(bwd_[t].h.begin(), bwd_[t].h.end(), concat_.begin() + static_cast<std::ptrdiff_t>(h));
            auto row = out.subspan(j * R, R);
            std::copy(model.params.b_out.begin(), model.params.b_out.end(), row.begin());
            gemv_accumulate(model.params.w_out, concat_, row);
        }
    }

    // Accumulates scale * d(sample MSE)/d(theta) into grad; returns the sample MSE.
    double backward(std::span<const double> window, std::span<const double> target,
                    const BlstmModel& model, BlstmParameters& grad, double scale) {
        const auto& cfg = cfg_;
        const std::size_t I = cfg.input_steps;
        const std::size_t O = cfg.output_steps;
        const std::size_t R = cfg.responses;
        const std::size_t h = cfg.hidden;
        pred_.assign(O * R, 0.0);
        forward(window, model, pred_);

        double loss = 0.0;
        const double norm = 1.0 / static_cast<double>(O * R);
        std::fill(dh_fwd_.begin(), dh_fwd_.end(), 0.0);
        std::fill(dh_bwd_.begin(), dh_bwd_.end(), 0.0);
        dy_.assign(R, 0.0);
        for (std::size_t j = 0; j < O; ++j) {
            const std::size_t t = I - O + j;
            for (std::size_t r = 0; r < R; ++r) {
                const double diff = pred_[j * R + r] - target[j * R + r];
                loss += diff * diff;
                dy_[r] = scale * 2.0 * diff * norm;
            }
            std::copy(fwd_[t].h.begin(), fwd_[t].h.end(), concat_.begin());
            std::copy(bwd_[t].h.begin(), bwd_[t].h.end(), concat_.begin() + static_cast<std::ptrdiff_t>(h));
            outer_accumulate(grad.w_out, dy_, concat_);
            for (std::size_t r = 0; r < R; ++r) grad.b_out[r] += dy_[r];
            std::fill(dconcat_.begin(), dconcat_.end(), 0.0);
            gemv_transpose_accumulate(model.params.w_out, dy_, dconcat_);
            for (std::size_t k = 0; k < h; ++k) {
                dh_fwd_[t * h + k] += dconcat_[k];
                dh_bwd_[t * h + k] += dconcat_[h + k];
            }
        }

        // Forward direction processed 0..I-1, so its gradient flows I-1..0.
        std::fill(dh_carry_.begin(), dh_carry_.end(), 0.0);
        std::fill(dc_carry_.begin(), dc_carry_.end(), 0.0);
        for (std::size_t n = I; n-- > 0;) {
            backprop_step(model.params.forward_cell, grad.forward_cell, window.subspan(n * cfg.predictors, cfg.predictors),
                          fwd_[n], n == 0 ? nullptr : &fwd_[n - 1], std::span<const double>(dh_fwd_).subspan(n * h, h));
        }
        std::fill(dh_carry_.begin(), dh_carry_.end(), 0.0);
        std::fill(dc_carry_.begin(), dc_carry_.end(), 0.0);
        for (std::size_t n = 0; n < I; ++n) {
            backprop_step(model.params.backward_cell, grad.backward_cell,
                          window.subspan(n * cfg.predictors, cfg.predictors), bwd_[n],
                          n + 1 == I ? nullptr : &bwd_[n + 1], std::span<const double>(dh_bwd_).subspan(n * h, h));
        }
        return loss * norm;
    }

private:
    void run_step(const LstmCellParams& p, std::span<const double> x, const StepCache* prev,
                  StepCache& out) {
        const std::size_t h = cfg_.hidden;
        std::span<const double> h_prev = prev ? std::span<const double>(prev->h) : zeros_;
        std::span<const double> c_prev = prev ? std::span<const double>(prev->c) : zeros_;
        for (std::size_t k = 0; k < 4; ++k) {
            auto& z = out.gate[k];
            std::copy(p.b[k].begin(), p.b[k].end(), z.begin());
            gemv_accumulate(p.w[k], x, z);
            gemv_accumulate(p.u[k], h_prev, z);
            if (k == kCellGate) {
                for (auto& v : z) v = std::tanh(v);
            } else {
                for (auto& v : z) v = sigmoid(v);
            }
        }
        for (std::size_t u = 0; u < h; ++u) {
            out.c[u] = out.gate[kForgetGate][u] * c_prev[u] +
                       out.gate[kInputGate][u] * out.gate[kCellGate][u];
            out.tanh_c[u] = std::tanh(out.c[u]);
            out.h[u] = out.gate[kOutputGate][u] * out.tanh_c[u];
        }
    }

    // Uses and updates dh_carry_/dc_carry_ (gradients flowing from the step
    // processed after this one).
    void backprop_step(const LstmCellParams& p, LstmCellParams& g, std::span<const double> x,
                       const StepCache& step, const StepCache* prev,
                       std::span<const double> dh_external) {
        const std::size_t h = cfg_.hidden;
        std::span<const double> h_prev = prev ? std::span<const double>(prev->h) : zeros_;
        std::span<const double> c_prev = prev ? std::span<const double>(prev->c) : zeros_;
        const auto& gi = step.gate[kInputGate];
        const auto& gf = step.gate[kForgetGate];
        const auto& go = step.gate[kOutputGate];
        const auto& gg = step.gate[kCellGate];
        for (std::size_t u = 0; u < h; ++u) {
            const double dh = dh_external[u] + dh_carry_[u];
            const double tc = step.tanh_c[u];
            const double dc = dc_carry_[u] + dh * go[u] * (1.0 - tc * tc);
            dz_[kOutputGate][u] = dh * tc * go[u] * (1.0 - go[u]);
            dz_[kInputGate][u] = dc * gg[u] * gi[u] * (1.0 - gi[u]);
            dz_[kCellGate][u] = dc * gi[u] * (1.0 - gg[u] * gg[u]);
            dz_[kForgetGate][u] = dc * c_prev[u] * gf[u] * (1.0 - gf[u]);
            dc_carry_[u] = dc * gf[u];
        }
        std::fill(dh_carry_.begin(), dh_carry_.end(), 0.0);
        for (std::size_t k = 0; k < 4; ++k) {
            outer_accumulate(g.w[k], dz_[k], x);
            if (prev) outer_accumulate(g.u[k], dz_[k], h_prev);
            for (std::size_t u = 0; u < h; ++u) g.b[k][u] += dz_[k][u];
            gemv_transpose_accumulate(p.u[k], dz_[k], dh_carry_);
        }
    }

    BlstmConfig cfg_;
    std::vector<StepCache> fwd_;
    std::vector<StepCache> bwd_;
    std::vector<double> zeros_;
    std::vector<double> dh_fwd_;
    std::vector<double> dh_bwd_;
    std::vector<double> concat_;
    std::vector<double> dconcat_;
    std::array<std::vector<double>, 4> dz_;
    std::vector<double> dh_carry_;
    std::vector<double> dc_carry_;
    std::vector<double> pred_;
    std::vector<double> dy_;
};

void check_window_shape(std::span<const double> window, const BlstmConfig& cfg) {
    if (window.size() != cfg.input_steps * cfg.predictors) {
        throw DimensionError("window has " + std::to_string(window.size()) + " values, expected I*P = " +
                             std::to_string(cfg.input_steps * cfg.predictors));
    }
}

void check_finite(const BlstmParameters& grads) {
    grads.for_each([](const std::string& name, std::span<const double> v, bool) {
        for (double x : v) {
            if (!std::isfinite(x)) throw NumericalError("non-finite gradient in " + name);
        }
    });
}

}  // namespace

LstmCellParams LstmCellParams::zeros(std::size_t inputs, std::size_t hidden) {
    LstmCellParams p;
    for (std::size_t k = 0; k < 4; ++k) {
        p.w[k] = Matrix(hidden, inputs);
        p.u[k] = Matrix(hidden, hidden);
        p.b[k].assign(hidden, 0.0);
    }
    return p;
}

LstmState lstm_cell_forward(std::span<const double> x, std::span<const double> h_prev,
                            std::span<const double> c_prev, const LstmCellParams& params) {
    const std::size_t h = params.hidden();
    check_cell_shapes(params, params.inputs(), h);
    if (x.size() != params.inputs() || h_prev.size() != h || c_prev.size() != h) {
        throw DimensionError("lstm_cell_forward: input or state size mismatch");
    }
    std::array<std::vector<double>, 4> z;
    for (std::size_t k = 0; k < 4; ++k) {
        z[k] = params.b[k];
        gemv_accumulate(params.w[k], x, z[k]);
        gemv_accumulate(params.u[k], h_prev, z[k]);
    }
    LstmState out{std::vector<double>(h), std::vector<double>(h)};
    for (std::size_t u = 0; u < h; ++u) {
        const double i = sigmoid(z[kInputGate][u]);
        const double f = sigmoid(z[kForgetGate][u]);
        const double o = sigmoid(z[kOutputGate][u]);
        const double g = std::tanh(z[kCellGate][u]);
        out.c[u] = f * c_prev[u] + i * g;
        out.h[u] = o * std::tanh(out.c[u]);
    }
    return out;
}

void BlstmConfig::validate() const {
    if (predictors < 1 || hidden < 1 || responses < 1) {
        throw ConfigError("BLSTM needs P, h, R >= 1");
    }
    if (output_steps < 1 || output_steps > input_steps) {
        throw ConfigError("BLSTM needs 1 <= O <= I (got I=" + std::to_string(input_steps) +
                          ", O=" + std::to_string(output_steps) + ")");
    }
}

BlstmParameters BlstmParameters::zeros(const BlstmConfig& config) {
    config.validate();
    BlstmParameters p;
    p.forward_cell = LstmCellParams::zeros(config.predictors, config.hidden);
    p.backward_cell = LstmCellParams::zeros(config.predictors, config.hidden);
    p.w_out = Matrix(config.responses, 2 * config.hidden);
    p.b_out.assign(config.responses, 0.0);
    return p;
}

BlstmModel BlstmModel::zeros(const BlstmConfig& config) {
    return {config, BlstmParameters::zeros(config)};
}

double xavier_bound(std::size_t rows, std::size_t cols) {
    return std::sqrt(6.0 / static_cast<double>(rows + cols));
}

Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw ConfigError("xavier_init needs rows, cols >= 1");
    const double bound = xavier_bound(rows, cols);
    std::mt19937_64 rng(seed);
    Matrix m(rows, cols);
    for (auto& v : m.values()) {
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
        v = (2.0 * unit - 1.0) * bound;
    }
    return m;
}

BlstmModel BlstmModel::initialize(const BlstmConfig& config, std::uint64_t seed) {
    BlstmModel model = zeros(config);
    std::uint64_t stream = seed;
    auto next_seed = [&] { return stream = splitmix64(stream); };
    for (auto* cell : {&model.params.forward_cell, &model.params.backward_cell}) {
        for (std::size_t k = 0; k < 4; ++k) cell->w[k] = xavier_init(config.hidden, config.predictors, next_seed());
        for (std::size_t k = 0; k < 4; ++k) cell->u[k] = xavier_init(config.hidden, config.hidden, next_seed());
    }
    model.params.w_out = xavier_init(config.responses, 2 * config.hidden, next_seed());
    return model;
}

Matrix blstm_forward(std::span<const double> window, const BlstmModel& model) {
    const auto& cfg = model.config;
    cfg.validate();
    check_cell_shapes(model.params.forward_cell, cfg.predictors, cfg.hidden);
    check_cell_shapes(model.params.backward_cell, cfg.predictors, cfg.hidden);
    check_window_shape(window, cfg);
    Workspace ws(cfg);
    Matrix out(cfg.output_steps, cfg.responses);
    ws.forward(window, model, out.values());
    return out;
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) throw DimensionError("mse_loss: shape mismatch");
    if (pred.empty()) throw DimensionError("mse_loss: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

double mse_loss(const Matrix& pred, const Matrix& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw DimensionError("mse_loss: shape mismatch");
    }
    return mse_loss(pred.values(), target.values());
}

GradientResult backward(std::span<const double> inputs, std::span<const double> targets,
                        std::size_t batch, const BlstmModel& model) {
    const auto& cfg = model.config;
    cfg.validate();
    const std::size_t in_size = cfg.input_steps * cfg.predictors;
    const std::size_t out_size = cfg.output_steps * cfg.responses;
    if (batch == 0 || inputs.size() != batch * in_size || targets.size() != batch * out_size) {
        throw DimensionError("backward: batch shapes do not match the model");
    }
    GradientResult result{BlstmParameters::zeros(cfg), 0.0};
    Workspace ws(cfg);
    const double scale = 1.0 / static_cast<double>(batch);
    for (std::size_t n = 0; n < batch; ++n) {
        result.loss += ws.backward(inputs.subspan(n * in_size, in_size),
                                   targets.subspan(n * out_size, out_size), model,
                                   result.gradients, scale);
    }
    result.loss *= scale;
    check_finite(result.gradients);
    return result;
}

GradientResult backward(const WindowDataset& data, std::span<const std::size_t> indices,
                        const BlstmModel& model) {
    const auto& cfg = model.config;
    cfg.validate();
    if (data.input_steps != cfg.input_steps || data.output_steps != cfg.output_steps ||
        data.p() != cfg.predictors || data.r() != cfg.responses) {
        throw DimensionError("dataset shape does not match the model configuration");
    }
    if (indices.empty()) throw DimensionError("backward: empty batch");
    GradientResult result{BlstmParameters::zeros(cfg), 0.0};
    Workspace ws(cfg);
    const double scale = 1.0 / static_cast<double>(indices.size());
    for (auto n : indices) {
        result.loss += ws.backward(data.input(n), data.target(n), model, result.gradients, scale);
    }
    result.loss *= scale;
    check_finite(result.gradients);
    return result;
}

double dataset_mse(const WindowDataset& data, const BlstmModel& model) {
    const auto& cfg = model.config;
    if (data.empty()) throw DimensionError("dataset_mse: empty dataset");
    if (data.input_steps != cfg.input_steps || data.output_steps != cfg.output_steps ||
        data.p() != cfg.predictors || data.r() != cfg.responses) {
        throw DimensionError("dataset shape does not match the model configuration");
    }
    Workspace ws(cfg);
    std::vector<double> pred(cfg.output_steps * cfg.responses);
    double total = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
        ws.forward(data.input(n), model, pred);
        total += mse_loss(pred, data.target(n));
    }
    return total / static_cast<double>(data.size());
}

}  // namespace hydro
