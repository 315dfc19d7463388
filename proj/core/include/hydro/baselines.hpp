#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hydro/matrix.hpp"
#include "hydro/windowing.hpp"

namespace hydro {

/// Persistence forecast: every output row repeats the responses observed at
/// the last input step. `window` is I x P over spec.predictors.
Matrix naive_forecast(std::span<const double> window, const WindowSpec& spec);

/// AR order with differencing; the moving-average order is always zero.
struct ArimaOrder {
    std::size_t p = 5;
    std::size_t d = 1;
    std::size_t q = 0;

    void validate() const;
    /// Parses "p,d,q".
    static ArimaOrder parse(const std::string& text);
    std::string to_string() const;
};

struct ArimaModel {
    ArimaOrder order;
    std::vector<double> phi;  // phi[k] multiplies the value k + 1 steps back
    double intercept = 0.0;
};

/// Conditional least squares on the d-times differenced history.
/// Needs at least p + d + 10 observations.
ArimaModel arima_fit(std::span<const double> history, const ArimaOrder& order);

/// Recursive multi-step forecast, integrated back to the original scale.
std::vector<double> arima_forecast(const ArimaModel& model, std::span<const double> history,
                                   std::size_t horizon);

/// Minimum history length accepted by arima_fit.
inline std::size_t arima_min_history(const ArimaOrder& order) { return order.p + order.d + 10; }

}  // namespace hydro
