#pragma once

#include <cstddef>
#include <cstdint>

#include "polarcomp/code.h"
#include "polarcomp/decode.h"
#include "polarcomp/matrix.h"

namespace polarcomp {

// Unbiased estimate of the full product from any nonempty set of finished
// workers: the mean of generator-row-weighted outputs, laid out in data-index
// order so it approximates exactly what decode() would return.
struct AnytimeEstimate {
    Matrix value;       // (s * block_rows) x cols
    std::size_t m = 0;  // number of outputs used
    std::size_t N = 0;
    std::size_t s = 0;
};

AnytimeEstimate anytime_estimate(const OutputSet& out, const CodeConfig& config);

// Subsampled randomized Hadamard sketch of the rows of A: m rows of
// (1/sqrt(m)) * P * H * D * A, with P sampling rows uniformly with
// replacement. force_permutation (m == N) keeps every row exactly once,
// which makes the sketch an exact isometry.
Matrix srht_sketch(const Matrix& A, std::size_t m, std::size_t N, std::uint64_t seed,
                   bool force_permutation = false);

// Confirms that the anytime estimator equals the blockwise application of
// S_H^T S_H built from the same signs and the sampling pattern implied by the
// present set. Deviations beyond kEstimatorEquivalenceTol fail the check.
inline constexpr double kEstimatorEquivalenceTol = 1e-10;

struct EquivalenceReport {
    double max_rel_dev = 0.0;
    bool pass = false;
};

EquivalenceReport estimator_equivalence_check(const OutputSet& out, const CodeConfig& config,
                                              const Matrix& x, const Matrix& A);

}  // namespace polarcomp
