#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hydro/blstm.hpp"

namespace hydro::testing {

/// Independent long-double BLSTM forward pass over a flat parameter vector
/// laid out in BlstmParameters::for_each order. Used as the finite-difference
/// oracle so that roundoff stays far below the tolerances under test.
class ReferenceBlstm {
public:
    explicit ReferenceBlstm(const BlstmModel& model) : c_(model.config) {
        model.params.for_each([&](const std::string&, std::span<const double> v, bool) {
            theta_.insert(theta_.end(), v.begin(), v.end());
        });
    }

    std::vector<long double>& theta() { return theta_; }

    /// O x R outputs for one I x P window.
    std::vector<long double> forward(std::span<const double> window) const {
        const std::size_t I = c_.input_steps, H = c_.hidden;
        std::vector<std::vector<long double>> hf(I), hb(I);
        run_cell(0, window, false, hf);
        run_cell(cell_size(), window, true, hb);
        const std::size_t w_out = 2 * cell_size();
        const std::size_t b_out = w_out + c_.responses * 2 * H;
        std::vector<long double> y(c_.output_steps * c_.responses);
        for (std::size_t j = 0; j < c_.output_steps; ++j) {
            const std::size_t t = I - c_.output_steps + j;
            for (std::size_t r = 0; r < c_.responses; ++r) {
                long double acc = theta_[b_out + r];
                for (std::size_t u = 0; u < H; ++u) {
                    acc += theta_[w_out + r * 2 * H + u] * hf[t][u];
                    acc += theta_[w_out + r * 2 * H + H + u] * hb[t][u];
                }
                y[j * c_.responses + r] = acc;
            }
        }
        return y;
    }

    long double loss(const std::vector<double>& inputs, const std::vector<double>& targets,
                     std::size_t batch) const {
        const std::size_t in = c_.input_steps * c_.predictors;
        const std::size_t out = c_.output_steps * c_.responses;
        long double total = 0.0L;
        for (std::size_t n = 0; n < batch; ++n) {
            const auto y = forward(std::span(inputs).subspan(n * in, in));
            long double ss = 0.0L;
            for (std::size_t k = 0; k < out; ++k) {
                const long double d = y[k] - targets[n * out + k];
                ss += d * d;
            }
            total += ss / static_cast<long double>(out);
        }
        return total / static_cast<long double>(batch);
    }

private:
    std::size_t cell_size() const {
        const std::size_t H = c_.hidden;
        return 4 * (H * c_.predictors + H * H + H);
    }

    void run_cell(std::size_t base, std::span<const double> x, bool reverse,
                  std::vector<std::vector<long double>>& hs) const {
        const std::size_t I = c_.input_steps, P = c_.predictors, H = c_.hidden;
        const std::size_t w0 = base, u0 = base + 4 * H * P, b0 = u0 + 4 * H * H;
        std::vector<long double> h(H, 0.0L), c(H, 0.0L), z(4 * H);
        for (std::size_t step = 0; step < I; ++step) {
            const std::size_t t = reverse ? I - 1 - step : step;
            for (std::size_t k = 0; k < 4; ++k) {
                for (std::size_t u = 0; u < H; ++u) {
                    long double acc = theta_[b0 + k * H + u];
                    for (std::size_t p = 0; p < P; ++p) acc += theta_[w0 + (k * H + u) * P + p] * x[t * P + p];
                    for (std::size_t v = 0; v < H; ++v) acc += theta_[u0 + (k * H + u) * H + v] * h[v];
                    z[k * H + u] = acc;
                }
            }
            for (std::size_t u = 0; u < H; ++u) {
                const long double i = 1.0L / (1.0L + std::exp(-z[u]));
                const long double f = 1.0L / (1.0L + std::exp(-z[H + u]));
                const long double o = 1.0L / (1.0L + std::exp(-z[2 * H + u]));
                const long double g = std::tanh(z[3 * H + u]);
                c[u] = f * c[u] + i * g;
                h[u] = o * std::tanh(c[u]);
            }
            hs[t] = h;
        }
    }

    BlstmConfig c_;
    std::vector<long double> theta_;
};

struct GradientCheckResult {
    double worst_relative_error = 0.0;
    std::string worst_tensor;
    std::size_t checked = 0;
};

/// Elementwise |analytic - numeric| / max(|analytic|, |numeric|) against
/// central differences of the reference loss with the given step. Pairs where
/// both magnitudes are below `negligible` are compared absolutely against it.
inline GradientCheckResult gradient_check(const BlstmModel& model, const std::vector<double>& inputs,
                                          const std::vector<double>& targets, std::size_t batch,
                                          double step = 1e-5, double negligible = 1e-12) {
    const auto analytic = backward(inputs, targets, batch, model).gradients;
    std::vector<double> grads;
    std::vector<std::string> names;
    analytic.for_each([&](const std::string& name, std::span<const double> g, bool) {
        grads.insert(grads.end(), g.begin(), g.end());
        names.insert(names.end(), g.size(), name);
    });

    GradientCheckResult result;
    ReferenceBlstm ref(model);
    auto& theta = ref.theta();
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const long double saved = theta[i];
        theta[i] = saved + step;
        const long double up = ref.loss(inputs, targets, batch);
        theta[i] = saved - step;
        const long double down = ref.loss(inputs, targets, batch);
        theta[i] = saved;
        const double numeric = static_cast<double>((up - down) / (2.0L * step));
        const double scale = std::max(std::abs(grads[i]), std::abs(numeric));
        const double err = scale < negligible ? std::abs(grads[i] - numeric) / negligible
                                              : std::abs(grads[i] - numeric) / scale;
        ++result.checked;
        if (err > result.worst_relative_error) {
            result.worst_relative_error = err;
            result.worst_tensor = names[i];
        }
    }
    return result;
}

inline std::vector<double> gaussian_vector(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
    std::normal_distribution<double> dist(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

/// Model with Xavier weights and small random biases so every gate is exercised.
inline BlstmModel random_model(const BlstmConfig& cfg, std::uint64_t seed) {
    BlstmModel m = BlstmModel::initialize(cfg, seed);
    std::mt19937_64 rng(seed ^ 0xABCDEFULL);
    std::normal_distribution<double> dist(0.0, 0.3);
    m.params.for_each([&](const std::string&, std::span<double> v, bool bias) {
        if (bias) {
            for (auto& x : v) x = dist(rng);
        }
    });
    return m;
}

}  // namespace hydro::testing
