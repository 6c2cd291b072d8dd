#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace polarcomp {

// Dense row-major matrix of doubles. This is the carrier for data matrices,
// data blocks and worker outputs; an empty Matrix doubles as "absent".
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double* row_ptr(std::size_t r) { return data.data() + r * cols; }
    const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }

    bool empty() const { return data.empty(); }
    std::size_t size() const { return data.size(); }

    static Matrix zero(std::size_t r, std::size_t c) { return Matrix(r, c); }
    static Matrix identity(std::size_t n);
    static Matrix gaussian(std::size_t r, std::size_t c, std::uint64_t seed);

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double v);
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double v);
Matrix operator*(double v, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);  // matrix product

Matrix transpose(const Matrix& a);

// Stack matrices with identical column counts on top of each other.
Matrix vstack(const std::vector<Matrix>& parts);

// Split into equally tall horizontal bands (rows must divide evenly).
std::vector<Matrix> split_rows(const Matrix& a, std::size_t bands);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

// ||got - want||_F / ||want||_F, with an absolute fallback when want is zero.
double relative_error(const Matrix& got, const Matrix& want);

}  // namespace polarcomp
