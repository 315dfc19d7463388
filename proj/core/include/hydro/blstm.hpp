#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydro/matrix.hpp"

namespace hydro {

struct WindowDataset;

/// Gate order used by every per-gate array: input, forget, output, candidate.
enum Gate : std::size_t { kInputGate = 0, kForgetGate = 1, kOutputGate = 2, kCellGate = 3 };
inline constexpr std::array<const char*, 4> kGateSuffix = {"i", "f", "o", "g"};

/// One LSTM cell with a forget gate: input weights W (h x P), recurrent
/// weights U (h x h) and biases b (h) for each of the four gates.
struct LstmCellParams {
    std::array<Matrix, 4> w;
    std::array<Matrix, 4> u;
    std::array<std::vector<double>, 4> b;

    static LstmCellParams zeros(std::size_t inputs, std::size_t hidden);

    std::size_t inputs() const { return w[0].cols(); }
    std::size_t hidden() const { return w[0].rows(); }

    bool operator==(const LstmCellParams&) const = default;
};

struct LstmState {
    std::vector<double> h;
    std::vector<double> c;
};

/// Single step: gates from x and h_prev, then c = f*c_prev + i*g, h = o*tanh(c).
LstmState lstm_cell_forward(std::span<const double> x, std::span<const double> h_prev,
                            std::span<const double> c_prev, const LstmCellParams& params);

/// Layer shape: P predictors, h hidden units, I input steps, O output steps,
/// R responses.
struct BlstmConfig {
    std::size_t predictors = 6;
    std::size_t hidden = 256;
    std::size_t input_steps = 12;
    std::size_t output_steps = 4;
    std::size_t responses = 2;

    void validate() const;
    bool operator==(const BlstmConfig&) const = default;
};

/// All trainable tensors. Also used to hold gradients of the same shape.
struct BlstmParameters {
    LstmCellParams forward_cell;
    LstmCellParams backward_cell;
    Matrix w_out;               // R x 2h
    std::vector<double> b_out;  // R

    static BlstmParameters zeros(const BlstmConfig& config);

    /// Calls f(name, values, is_bias) for every tensor in a fixed order.
    template <typename F>
    void for_each(F&& f) {
        visit_cell("forward", forward_cell, f);
        visit_cell("backward", backward_cell, f);
        f(std::string("W_out"), w_out.values(), false);
        f(std::string("b_out"), std::span<double>(b_out), true);
    }
    template <typename F>
    void for_each(F&& f) const {
        const_cast<BlstmParameters*>(this)->for_each(
            [&](const std::string& name, std::span<double> v, bool bias) {
                f(name, std::span<const double>(v), bias);
            });
    }

    bool operator==(const BlstmParameters&) const = default;

private:
    template <typename F>
    static void visit_cell(const std::string& prefix, LstmCellParams& cell, F& f) {
        for (std::size_t k = 0; k < 4; ++k) f(prefix + ".W_" + kGateSuffix[k], cell.w[k].values(), false);
        for (std::size_t k = 0; k < 4; ++k) f(prefix + ".U_" + kGateSuffix[k], cell.u[k].values(), false);
        for (std::size_t k = 0; k < 4; ++k) {
            f(prefix + ".b_" + kGateSuffix[k], std::span<double>(cell.b[k]), true);
        }
    }
};

struct BlstmModel {
    BlstmConfig config;
    BlstmParameters params;

    /// Zero biases and Xavier-uniform weights, deterministic in `seed`.
    static BlstmModel initialize(const BlstmConfig& config, std::uint64_t seed);
    static BlstmModel zeros(const BlstmConfig& config);

    bool operator==(const BlstmModel&) const = default;
};

/// Uniform samples from [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed);
double xavier_bound(std::size_t rows, std::size_t cols);

/// Runs the forward cell over steps 1..I and the backward cell over I..1;
/// output step j (0-based) projects the concatenated state at I - O + j.
/// `window` is I x P row-major; the result is O x R.
Matrix blstm_forward(std::span<const double> window, const BlstmModel& model);

/// Mean over all elements of the squared difference.
double mse_loss(std::span<const double> pred, std::span<const double> target);
double mse_loss(const Matrix& pred, const Matrix& target);

struct GradientResult {
    BlstmParameters gradients;
    double loss = 0.0;  // batch-mean MSE
};

/// Exact gradients of the batch-mean MSE by backpropagation through time.
/// `inputs` holds batch x I x P values and `targets` batch x O x R values.
/// Throws NumericalError naming the first tensor with a non-finite gradient.
GradientResult backward(std::span<const double> inputs, std::span<const double> targets,
                        std::size_t batch, const BlstmModel& model);
GradientResult backward(const WindowDataset& data, std::span<const std::size_t> indices,
                        const BlstmModel& model);

/// Mean per-sample MSE over a whole dataset.
double dataset_mse(const WindowDataset& data, const BlstmModel& model);

}  // namespace hydro
