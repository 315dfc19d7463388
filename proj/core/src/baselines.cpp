#include "hydro/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "hydro/errors.hpp"
#include "hydro/text_io.hpp"

namespace hydro {

Matrix naive_forecast(std::span<const double> window, const WindowSpec& spec) {
    spec.validate();
    const std::size_t P = spec.p();
    const std::size_t I = spec.input_steps;
    if (window.size() != I * P) throw DimensionError("naive_forecast: window shape mismatch");
    std::vector<std::size_t> cols;
    for (const auto& r : spec.responses) {
        auto it = std::find(spec.predictors.begin(), spec.predictors.end(), r);
        if (it == spec.predictors.end()) {
            throw ConfigError("naive forecast needs response '" + r + "' among the predictors");
        }
        cols.push_back(static_cast<std::size_t>(it - spec.predictors.begin()));
    }
    Matrix out(spec.output_steps, spec.r());
    const double* last = window.data() + (I - 1) * P;
    for (std::size_t j = 0; j < spec.output_steps; ++j) {
        for (std::size_t r = 0; r < cols.size(); ++r) out(j, r) = last[cols[r]];
    }
    return out;
}

void ArimaOrder::validate() const {
    if (p < 1) throw ConfigError("ARIMA needs p >= 1");
    if (d > 2) throw ConfigError("ARIMA differencing order must be 0, 1 or 2");
    if (q != 0) throw ConfigError("ARIMA moving-average terms are not supported (q must be 0)");
}

ArimaOrder ArimaOrder::parse(const std::string& text) {
    const auto parts = text::split(text, ',');
    if (parts.size() != 3) throw ConfigError("ARIMA order must be 'p,d,q', got '" + text + "'");
    ArimaOrder order;
    try {
        const auto p = text::parse_int(parts[0]);
        const auto d = text::parse_int(parts[1]);
        const auto q = text::parse_int(parts[2]);
        if (p < 0 || d < 0 || q < 0) throw ConfigError("ARIMA order entries must be non-negative");
        order = {static_cast<std::size_t>(p), static_cast<std::size_t>(d), static_cast<std::size_t>(q)};
    } catch (const ParseError&) {
        throw ConfigError("ARIMA order must be 'p,d,q', got '" + text + "'");
    }
    order.validate();
    return order;
}

std::string ArimaOrder::to_string() const {
    return std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q);
}

namespace {

std::vector<double> difference(std::span<const double> x, std::size_t d) {
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < y.size(); ++i) y[i] = y[i + 1] - y[i];
        y.pop_back();
    }
    return y;
}

}  // namespace

ArimaModel arima_fit(std::span<const double> history, const ArimaOrder& order) {
    order.validate();
    if (history.size() < arima_min_history(order)) {
        throw RangeError("ARIMA(" + order.to_string() + ") needs at least " +
                         std::to_string(arima_min_history(order)) + " observations, got " +
                         std::to_string(history.size()));
    }
    for (double v : history) {
        if (!std::isfinite(v)) throw FitError("ARIMA history contains non-finite values");
    }
    const auto y = difference(history, order.d);
    const std::size_t p = order.p;

    ArimaModel model{order, std::vector<double>(p, 0.0), 0.0};
    // A series constant after differencing is fitted exactly by the intercept.
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) {
        model.intercept = y.front();
        return model;
    }

    // Regressors: [1, y_{t-1}, ..., y_{t-p}].
    const std::size_t k = p + 1;
    Matrix xtx(k, k);
    std::vector<double> xty(k, 0.0);
    std::vector<double> row(k);
    for (std::size_t t = p; t < y.size(); ++t) {
        row[0] = 1.0;
        for (std::size_t lag = 1; lag <= p; ++lag) row[lag] = y[t - lag];
        for (std::size_t a = 0; a < k; ++a) {
            xty[a] += row[a] * y[t];
            for (std::size_t b = 0; b < k; ++b) xtx(a, b) += row[a] * row[b];
        }
    }
    const auto beta = solve_linear_system(std::move(xtx), std::move(xty));
    model.intercept = beta[0];
    for (std::size_t lag = 0; lag < p; ++lag) model.phi[lag] = beta[lag + 1];
    for (double v : beta) {
        if (!std::isfinite(v)) throw FitError("ARIMA coefficients are not finite");
    }
    return model;
}

std::vector<double> arima_forecast(const ArimaModel& model, std::span<const double> history,
                                   std::size_t horizon) {
    model.order.validate();
    const std::size_t p = model.order.p;
    const std::size_t d = model.order.d;
    if (model.phi.size() != p) throw DimensionError("ARIMA coefficient count does not match p");
    if (history.size() < p + d) {
        throw RangeError("ARIMA forecast needs at least p + d = " + std::to_string(p + d) +
                         " observations");
    }
    // levels[k] is the k-times differenced history.
    std::vector<std::vector<double>> levels(d + 1);
    levels[0].assign(history.begin(), history.end());
    for (std::size_t k = 1; k <= d; ++k) levels[k] = difference(levels[k - 1], 1);

    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        auto& y = levels[d];
        double next = model.intercept;
        for (std::size_t lag = 1; lag <= p; ++lag) next += model.phi[lag - 1] * y[y.size() - lag];
        y.push_back(next);
        for (std::size_t k = d; k-- > 0;) levels[k].push_back(levels[k].back() + levels[k + 1].back());
        out.push_back(levels[0].back());
    }
    return out;
}

}  // namespace hydro
