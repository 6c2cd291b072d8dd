#include "support/oracles.h"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace testsupport {

int hadamard_entry(std::size_t i, std::size_t j) {
    return std::popcount(i & j) % 2 == 0 ? 1 : -1;
}

polarcomp::Matrix dense_encode_stacked(const polarcomp::Matrix& A,
                                       const polarcomp::CodeConfig& config) {
    if (A.rows % config.s != 0) throw std::invalid_argument("rows not divisible by s");
    std::size_t br = A.rows / config.s;
    auto data = config.data_indices();
    polarcomp::Matrix out = polarcomp::Matrix::zero(config.N * br, A.cols);
    for (std::size_t j = 0; j < config.N; ++j)
        for (std::size_t b = 0; b < config.s; ++b) {
            double coeff = config.signs[data[b]] * hadamard_entry(data[b], j);
            for (std::size_t r = 0; r < br; ++r)
                for (std::size_t c = 0; c < A.cols; ++c)
                    out(j * br + r, c) += coeff * A(b * br + r, c);
        }
    return out;
}

bool sc_input_reachable(const std::vector<char>& erased, std::size_t k) {
    std::size_t n = erased.size();
    if (n == 1) return !erased[0];
    std::vector<char> sum_half(n / 2), diff_half(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        sum_half[j] = erased[2 * j];
        diff_half[j] = erased[2 * j + 1];
    }
    if (k % 2 == 0)
        return sc_input_reachable(sum_half, k / 2) && sc_input_reachable(diff_half, k / 2);
    return sc_input_reachable(sum_half, k / 2) || sc_input_reachable(diff_half, k / 2);
}

bool sc_decodable(const std::vector<std::size_t>& present, const polarcomp::CodeConfig& config) {
    std::vector<char> erased(config.N, 1);
    for (std::size_t i : present) erased[i] = 0;
    for (std::size_t i : config.data_indices())
        if (!sc_input_reachable(erased, i)) return false;
    return true;
}

std::vector<double> erasure_profile_enumerated(std::size_t N, double epsilon) {
    if (N > 16) throw std::invalid_argument("enumeration limited to N <= 16");
    std::vector<double> fail(N, 0.0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << N); ++mask) {
        std::vector<char> erased(N);
        double weight = 1.0;
        for (std::size_t i = 0; i < N; ++i) {
            erased[i] = (mask >> i) & 1;
            weight *= erased[i] ? epsilon : 1.0 - epsilon;
        }
        if (weight == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i)
            if (!sc_input_reachable(erased, i)) fail[i] += weight;
    }
    return fail;
}

namespace {

Eigen::MatrixXd to_eigen(const polarcomp::Matrix& m) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) e(static_cast<Eigen::Index>(r),
                                                   static_cast<Eigen::Index>(c)) = m(r, c);
    return e;
}

}  // namespace

std::size_t matrix_rank(const polarcomp::Matrix& m) {
    return static_cast<std::size_t>(Eigen::FullPivLU<Eigen::MatrixXd>(to_eigen(m)).rank());
}

polarcomp::Matrix solve_least_squares(const polarcomp::Matrix& M, const polarcomp::Matrix& rhs) {
    Eigen::MatrixXd sol = to_eigen(M).colPivHouseholderQr().solve(to_eigen(rhs));
    polarcomp::Matrix out(static_cast<std::size_t>(sol.rows()),
                          static_cast<std::size_t>(sol.cols()));
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t c = 0; c < out.cols; ++c)
            out(r, c) = sol(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

bool brute_force_polarizing(const polarcomp::Kernel& kernel) {
    std::size_t p = kernel.p;
    if (p < 2 || p > 8) return false;
    double max_abs = 0.0;
    for (double v : kernel.entries) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0) return false;

    Eigen::MatrixXd K(p, p);
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c)
            K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                kernel(r, c) / max_abs;

    const double tol = 1e-12;
    if (std::abs(K.determinant()) <= tol) return false;

    for (std::size_t j = 1; j < p; ++j) {
        std::size_t q = p - j;  // rows per subset; columns j..p-1 remain
        std::vector<char> pick(p, 0);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(q), 1);
        std::sort(pick.begin(), pick.end());
        do {
            Eigen::MatrixXd sub(q, q);
            std::size_t rr = 0;
            for (std::size_t r = 0; r < p; ++r) {
                if (!pick[r]) continue;
                for (std::size_t c = 0; c < q; ++c)
                    sub(static_cast<Eigen::Index>(rr), static_cast<Eigen::Index>(c)) =
                        K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j + c));
                ++rr;
            }
            if (std::abs(sub.determinant()) <= tol) return false;
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return true;
}

double ks_distance_sorted(const std::vector<double>& sorted_samples,
                          const std::function<double(double)>& cdf) {
    double worst = 0.0;
    auto n = static_cast<double>(sorted_samples.size());
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        double f = cdf(sorted_samples[i]);
        worst = std::max(worst, std::abs(static_cast<double>(i) / n - f));
        worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return worst;
}

OriginFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& t) {
    if (x.size() != t.size() || x.empty()) throw std::invalid_argument("fit: size mismatch");
    double sxx = 0.0, sxt = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxt += x[i] * t[i];
        mean += t[i];
    }
    mean /= static_cast<double>(t.size());
    OriginFit fit;
    fit.c = sxt / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += (t[i] - fit.c * x[i]) * (t[i] - fit.c * x[i]);
        ss_tot += (t[i] - mean) * (t[i] - mean);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<polarcomp::Matrix> plain_gd_iterates(const polarcomp::Matrix& A,
                                                 const polarcomp::Matrix& y, double mu,
                                                 std::size_t iters) {
    polarcomp::Matrix G = polarcomp::transpose(A) * A;
    polarcomp::Matrix Aty = polarcomp::transpose(A) * y;
    polarcomp::Matrix x = polarcomp::Matrix::zero(A.cols, y.cols);
    std::vector<polarcomp::Matrix> iterates;
    for (std::size_t t = 0; t < iters; ++t) {
        polarcomp::Matrix grad = G * x - Aty;
        x -= grad * mu;
        iterates.push_back(x);
    }
    return iterates;
}

}  // namespace testsupport
