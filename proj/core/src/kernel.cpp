#include "polarcomp/kernel.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polarcomp {

namespace {

// Real-valued kernels admit no exact zero test; "nonzero" and "invertible"
// are judged at 1e-12 after normalizing the kernel by its largest entry.
constexpr double kTol = 1e-12;

double determinant(std::vector<double> m, std::size_t n) {
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
        if (m[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
            det = -det;
        }
        det *= m[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            double f = m[r * n + c] / m[c * n + c];
            for (std::size_t j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
        }
    }
    return det;
}

// Determinant of the square submatrix picked by `rows` and columns
// [col_from, p) of a normalized kernel.
double minor_det(const std::vector<double>& k, std::size_t p,
                 const std::vector<std::size_t>& rows, std::size_t col_from) {
    std::size_t q = rows.size();
    std::vector<double> sub(q * q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) sub[i * q + j] = k[rows[i] * p + col_from + j];
    return determinant(std::move(sub), q);
}

bool every_row_subset_invertible(const std::vector<double>& k, std::size_t p,
                                 std::size_t col_from) {
    std::size_t q = p - col_from;
    std::vector<std::size_t> rows(q);
    // enumerate all q-subsets of {0..p-1} in lexicographic order
    std::iota(rows.begin(), rows.end(), 0);
    while (true) {
        if (std::abs(minor_det(k, p, rows, col_from)) <= kTol) return false;
        std::size_t i = q;
        while (i > 0 && rows[i - 1] == p - q + (i - 1)) --i;
        if (i == 0) return true;
        ++rows[i - 1];
        for (std::size_t j = i; j < q; ++j) rows[j] = rows[j - 1] + 1;
    }
}

std::vector<double> normalized(const Kernel& k) {
    double m = 0.0;
    for (double v : k.entries) m = std::max(m, std::abs(v));
    if (m == 0.0) return k.entries;
    std::vector<double> out = k.entries;
    for (double& v : out) v /= m;
    return out;
}

}  // namespace

Kernel::Kernel(std::size_t size, std::vector<double> e) : p(size), entries(std::move(e)) {
    if (p < 2) throw std::invalid_argument("kernel size must be at least 2");
    if (entries.size() != p * p) throw std::invalid_argument("kernel entry count != p*p");
}

bool is_polarizing_2x2(const Kernel& k) {
    if (k.p != 2) throw std::invalid_argument("is_polarizing_2x2 requires a 2x2 kernel");
    std::vector<double> m = normalized(k);
    if (std::abs(m[1]) <= kTol || std::abs(m[3]) <= kTol) return false;
    return std::abs(m[0] * m[3] - m[1] * m[2]) > kTol;
}

bool is_polarizing_pxp(const Kernel& k) {
    if (k.p < 2) throw std::invalid_argument("kernel size must be at least 2");
    if (k.p > 8) throw std::invalid_argument("kernel size above 8 is not supported");
    std::vector<double> m = normalized(k);
    std::vector<std::size_t> all(k.p);
    std::iota(all.begin(), all.end(), 0);
    if (std::abs(minor_det(m, k.p, all, 0)) <= kTol) return false;
    for (std::size_t j = 1; j < k.p; ++j)
        if (!every_row_subset_invertible(m, k.p, j)) return false;
    return true;
}

ErasureProfile erasure_profile(double epsilon, std::size_t N) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0,1]");
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("N must be a power of 2");
    ErasureProfile out;
    out.epsilon = epsilon;
    out.N = N;
    out.probs = {epsilon};
    // Doubling step: input 2q of the doubled code needs both values the level
    // below (its pair is still unknown), input 2q+1 can use either one (its
    // pair is known by then). The low bit of the index is therefore the
    // outermost map applied to epsilon.
    while (out.probs.size() < N) {
        std::vector<double> next(out.probs.size() * 2);
        for (std::size_t q = 0; q < out.probs.size(); ++q) {
            next[2 * q] = erasure_needs_both(out.probs[q]);
            next[2 * q + 1] = erasure_needs_either(out.probs[q]);
        }
        out.probs = std::move(next);
    }
    return out;
}

std::vector<std::size_t> select_frozen(const ErasureProfile& profile, std::size_t s) {
    std::size_t N = profile.N;
    if (s < 1 || s > N) throw std::invalid_argument("s must lie in [1, N]");
    std::vector<std::size_t> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (profile.probs[a] != profile.probs[b]) return profile.probs[a] > profile.probs[b];
        return a < b;
    });
    idx.resize(N - s);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<double> kernel_runtime_map(const Kernel& k, const std::vector<double>& times) {
    if (times.size() != k.p) throw std::invalid_argument("times length must equal kernel size");
    if (!is_polarizing_pxp(k)) throw std::invalid_argument("kernel is not polarizing");
    std::vector<double> out = times;
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

}  // namespace polarcomp
