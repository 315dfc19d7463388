#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hydro {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    double* row(std::size_t r) { return data_.data() + r * cols_; }

    void fill(double v);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// out += m * x
void gemv_accumulate(const Matrix& m, std::span<const double> x, std::span<double> out);
/// out += m^T * y
void gemv_transpose_accumulate(const Matrix& m, std::span<const double> y, std::span<double> out);
/// m += a * b^T
void outer_accumulate(Matrix& m, std::span<const double> a, std::span<const double> b);

/// Solves a square system by Gaussian elimination with partial pivoting.
/// Throws FitError when the matrix is numerically singular.
std::vector<double> solve_linear_system(Matrix a, std::vector<double> b);

}  // namespace hydro
