#include "polarcomp/matrix.h"

#include <cmath>
#include <stdexcept>

#include "polarcomp/rng.h"

namespace polarcomp {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::gaussian(std::size_t r, std::size_t c, std::uint64_t seed) {
    Matrix m(r, c);
    Rng rng(seed);
    for (double& v : m.data) v = rng.gaussian();
    return m;
}

static void check_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix shape mismatch");
}

Matrix& Matrix::operator+=(const Matrix& o) {
    check_same_shape(*this, o);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    check_same_shape(*this, o);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
}

Matrix& Matrix::operator*=(double v) {
    for (double& x : data) x *= v;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double v) { return a *= v; }
Matrix operator*(double v, Matrix a) { return a *= v; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row_ptr(k);
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

Matrix vstack(const std::vector<Matrix>& parts) {
    if (parts.empty()) return Matrix();
    std::size_t rows = 0;
    for (const Matrix& p : parts) {
        if (p.cols != parts.front().cols)
            throw std::invalid_argument("vstack: column counts differ");
        rows += p.rows;
    }
    Matrix out(rows, parts.front().cols);
    std::size_t at = 0;
    for (const Matrix& p : parts) {
        std::copy(p.data.begin(), p.data.end(), out.data.begin() + at);
        at += p.data.size();
    }
    return out;
}

std::vector<Matrix> split_rows(const Matrix& a, std::size_t bands) {
    if (bands == 0 || a.rows % bands != 0)
        throw std::invalid_argument("split_rows: row count not divisible by band count");
    std::size_t h = a.rows / bands;
    std::vector<Matrix> out(bands, Matrix(h, a.cols));
    for (std::size_t b = 0; b < bands; ++b)
        std::copy(a.row_ptr(b * h), a.row_ptr(b * h) + h * a.cols, out[b].data.begin());
    return out;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Matrix& a) {
    for (double v : a.data)
        if (!std::isfinite(v)) return false;
    return true;
}

double relative_error(const Matrix& got, const Matrix& want) {
    check_same_shape(got, want);
    double ref = frobenius_norm(want);
    double err = frobenius_norm(got - want);
    return ref > 0.0 ? err / ref : err;
}

}  // namespace polarcomp
