#include "polarcomp/sketch.h"

#include <cmath>
#include <stdexcept>

#include "polarcomp/rng.h"

namespace polarcomp {

AnytimeEstimate anytime_estimate(const OutputSet& out, const CodeConfig& config) {
    if (out.outputs.empty())
        throw std::invalid_argument("anytime_estimate: output set is empty");
    std::size_t brows = 0, bcols = 0;
    for (const auto& [idx, m] : out.outputs) {
        if (idx >= config.N) throw std::invalid_argument("worker index out of range");
        if (brows == 0) {
            brows = m.rows;
            bcols = m.cols;
        } else if (m.rows != brows || m.cols != bcols) {
            throw std::invalid_argument("worker output blocks disagree in shape");
        }
    }
    // sum_{i in S} Z[i][b] * Y_i is the b-th data slot of the transform
    // applied to the outputs masked to S, times the slot's sign; the
    // transform is symmetric so the same butterfly serves both directions.
    std::size_t slot_len = brows * bcols;
    std::vector<double> buf(config.N * slot_len, 0.0);
    for (const auto& [idx, m] : out.outputs)
        std::copy(m.data.begin(), m.data.end(), buf.begin() + idx * slot_len);
    hadamard_blocks(buf.data(), config.N, slot_len);

    double inv_m = 1.0 / static_cast<double>(out.outputs.size());
    AnytimeEstimate est;
    est.m = out.outputs.size();
    est.N = config.N;
    est.s = config.s;
    est.value = Matrix(config.s * brows, bcols);
    std::vector<std::size_t> data = config.data_indices();
    for (std::size_t b = 0; b < config.s; ++b) {
        double scale = config.signs[data[b]] * inv_m;
        const double* src = buf.data() + data[b] * slot_len;
        double* dst = est.value.data.data() + b * slot_len;
        for (std::size_t k = 0; k < slot_len; ++k) dst[k] = scale * src[k];
    }
    return est;
}

Matrix srht_sketch(const Matrix& A, std::size_t m, std::size_t N, std::uint64_t seed,
                   bool force_permutation) {
    if (A.rows != N) throw std::invalid_argument("srht_sketch: A must have N rows");
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("srht_sketch: N must be a power of 2");
    if (m < 1 || m > N) throw std::invalid_argument("srht_sketch: m must lie in [1, N]");
    if (force_permutation && m != N)
        throw std::invalid_argument("srht_sketch: permutation mode needs m == N");

    std::vector<double> buf = A.data;
    Rng signs(derive_seed(seed, 3));
    for (std::size_t i = 0; i < N; ++i) {
        double s = signs.sign();
        double* row = buf.data() + i * A.cols;
        for (std::size_t k = 0; k < A.cols; ++k) row[k] *= s;
    }
    hadamard_blocks(buf.data(), N, A.cols);

    std::vector<std::size_t> rows(m);
    if (force_permutation) {
        for (std::size_t r = 0; r < m; ++r) rows[r] = r;
    } else {
        Rng pick(derive_seed(seed, 4));
        for (std::size_t r = 0; r < m; ++r)
            rows[r] = static_cast<std::size_t>(pick.next_u64() & (N - 1));
    }
    double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Matrix out(m, A.cols);
    for (std::size_t r = 0; r < m; ++r) {
        const double* src = buf.data() + rows[r] * A.cols;
        double* dst = out.row_ptr(r);
        for (std::size_t k = 0; k < A.cols; ++k) dst[k] = scale * src[k];
    }
    return out;
}

EquivalenceReport estimator_equivalence_check(const OutputSet& out, const CodeConfig& config,
                                              const Matrix& x, const Matrix& A) {
    AnytimeEstimate est = anytime_estimate(out, config);

    // Reference path: lift the true block products onto the transformed
    // inputs, then apply sign * transform * mask-to-S * transform * sign,
    // scaled by 1/|S|. This is the sketch operator built from the same signs
    // and the sampling pattern implied by the present set.
    if (A.rows % config.s != 0)
        throw std::invalid_argument("estimator_equivalence_check: A rows not divisible by s");
    std::vector<Matrix> blocks = split_rows(A, config.s);
    std::size_t brows = blocks.front().rows, bcols = x.cols;
    std::size_t slot_len = brows * bcols;
    std::vector<double> buf(config.N * slot_len, 0.0);
    std::vector<std::size_t> data = config.data_indices();
    for (std::size_t b = 0; b < config.s; ++b) {
        Matrix prod = blocks[b] * x;
        std::copy(prod.data.begin(), prod.data.end(), buf.begin() + data[b] * slot_len);
    }
    auto apply_signs = [&] {
        for (std::size_t i = 0; i < config.N; ++i) {
            double s = config.signs[i];
            double* slot = buf.data() + i * slot_len;
            for (std::size_t k = 0; k < slot_len; ++k) slot[k] *= s;
        }
    };
    apply_signs();
    hadamard_blocks(buf.data(), config.N, slot_len);
    std::vector<char> in_set(config.N, 0);
    for (const auto& [idx, m] : out.outputs) in_set[idx] = 1;
    for (std::size_t i = 0; i < config.N; ++i)
        if (!in_set[i]) std::fill_n(buf.data() + i * slot_len, slot_len, 0.0);
    hadamard_blocks(buf.data(), config.N, slot_len);
    apply_signs();

    double inv_m = 1.0 / static_cast<double>(out.outputs.size());
    Matrix ref(config.s * brows, bcols);
    for (std::size_t b = 0; b < config.s; ++b) {
        const double* src = buf.data() + data[b] * slot_len;
        double* dst = ref.data.data() + b * slot_len;
        for (std::size_t k = 0; k < slot_len; ++k) dst[k] = inv_m * src[k];
    }

    EquivalenceReport report;
    double scale = max_abs(ref);
    double dev = max_abs(est.value - ref);
    report.max_rel_dev = scale > 0.0 ? dev / scale : dev;
    report.pass = report.max_rel_dev <= kEstimatorEquivalenceTol;
    return report;
}

}  // namespace polarcomp
