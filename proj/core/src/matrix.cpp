#include "hydro/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "hydro/errors.hpp"

namespace hydro {

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void gemv_accumulate(const Matrix& m, std::span<const double> x, std::span<double> out) {
    const std::size_t n = m.cols();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* w = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += w[c] * x[c];
        out[r] += acc;
    }
}

void gemv_transpose_accumulate(const Matrix& m, std::span<const double> y, std::span<double> out) {
    const std::size_t n = m.cols();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* w = m.row(r);
        const double yr = y[r];
        for (std::size_t c = 0; c < n; ++c) out[c] += w[c] * yr;
    }
}

void outer_accumulate(Matrix& m, std::span<const double> a, std::span<const double> b) {
    const std::size_t n = m.cols();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double* w = m.row(r);
        const double ar = a[r];
        for (std::size_t c = 0; c < n; ++c) w[c] += ar * b[c];
    }
}

std::vector<double> solve_linear_system(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw DimensionError("solve_linear_system needs a square system");
    double scale = 0.0;
    for (double v : a.values()) scale = std::max(scale, std::abs(v));
    const double tol = std::max(scale, 1.0) * 1e-12 * static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(a(r, k)) > std::abs(a(pivot, k))) pivot = r;
        }
        if (std::abs(a(pivot, k)) <= tol) throw FitError("singular normal equations");
        if (pivot != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(pivot, c));
            std::swap(b[k], b[pivot]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double factor = a(r, k) / a(k, k);
            if (factor == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) a(r, c) -= factor * a(k, c);
            b[r] -= factor * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
        x[i] = acc / a(i, i);
    }
    return x;
}

}  // namespace hydro
