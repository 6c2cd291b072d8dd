#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "polarcomp/code.h"
#include "polarcomp/matrix.h"
#include "polarcomp/sim.h"

namespace polarcomp {

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t iter, double cost);
    std::size_t iteration;
    double cost;
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct GDState {
    Matrix x;  // final iterate, d x r
    double mu = 0.0;
    struct IterStat {
        double cost = 0.0;          // squared residual norm after the update
        double decode_time = 0.0;   // simulated completion time of the prefix
        std::size_t set_size = 0;   // outputs waited for
        double wall_seconds = 0.0;
    };
    std::vector<IterStat> history;
};

// Gradient descent on ||Ax - y||^2 with the Gram matrix encoded once up
// front; every iteration waits only for the first decodable prefix of worker
// outputs and recovers the gradient exactly. mu <= 0 picks 1/lambda_max via
// power iteration. Divergence past 1000x the initial cost aborts.
GDState coded_gd_least_squares(const Matrix& A, const Matrix& y, double mu,
                               std::size_t iters, const CodeConfig& config,
                               const RunTimeModel& model, std::uint64_t seed);

// Same loop on a real thread pool; the collector stops at the first
// decodable set of arrivals.
GDState coded_gd_least_squares(const Matrix& A, const Matrix& y, double mu,
                               std::size_t iters, const CodeConfig& config,
                               std::size_t threads);

struct BlackBoxProblem {
    std::function<double(const std::vector<double>&)> objective;
    std::size_t dim = 0;
    double delta = 0.0;  // <= 0 picks 1e-4 * (max|theta| + 1) per call

    double effective_delta(const std::vector<double>& theta) const;
    double eval(const std::vector<double>& theta) const;  // throws NumericalError on non-finite
};

// Symmetric difference along each coordinate axis.
std::vector<double> finite_diff_grad(const BlackBoxProblem& problem,
                                     const std::vector<double>& theta);

enum class DirectionMode { Gaussian, HadamardRademacher };

// Antithetic evolution-strategies estimate over N directions:
//   (1/(2 N delta)) * sum_i [f(theta + delta e_i) - f(theta - delta e_i)] e_i.
// HadamardRademacher uses the N mutually orthogonal +-1 transform rows
// (requires N == dim, a power of 2); Gaussian draws fresh i.i.d. directions.
std::vector<double> es_grad(const BlackBoxProblem& problem, const std::vector<double>& theta,
                            std::size_t N, DirectionMode mode, std::uint64_t seed);

// Gradient through the code: unit coordinate vectors are encoded into N
// perturbation directions (config.s must equal dim), each worker reports a
// symmetric directional derivative, and the standard decoder recovers the
// gradient coordinates. present = nullptr uses all N workers; a forced
// subset that is not decodable throws NotDecodableError.
std::vector<double> coded_blackbox_grad(const BlackBoxProblem& problem,
                                        const std::vector<double>& theta,
                                        const CodeConfig& config,
                                        const std::vector<std::size_t>* present = nullptr);

// Worker (i,j) holds the product of encoded row band i of A with encoded
// column band j of B; present masks which products survived. Decoding peels
// rows and columns until the grid is whole, then recovers A*B.
Matrix coded_matmul_2d(const Matrix& A, const Matrix& B, const CodeConfig& config_rows,
                       const CodeConfig& config_cols,
                       const std::vector<std::vector<std::uint8_t>>& present);

// Head-to-head driver for the three black-box gradient methods on
// f(theta) = ||A theta - b||_1 under a half-outputs straggler budget:
// coordinate differences using the first half of the coordinates, structured
// ES using the first half of the transform rows, and the coded estimator at
// rate 1/2 waiting for its first decodable prefix. Costs are recorded after
// every update.
struct BlackboxComparison {
    std::vector<double> fd_cost;
    std::vector<double> es_cost;
    std::vector<double> coded_cost;
};

// coded_guard enables the optional acceptance check on the coded method: an
// update that would raise the objective is discarded and the iterate kept.
BlackboxComparison compare_blackbox_methods(const Matrix& A, const Matrix& b,
                                            std::size_t iters, double step, double delta,
                                            std::uint64_t seed, bool coded_guard = false);

// Largest eigenvalue of a symmetric positive semidefinite matrix, 20 rounds
// of power iteration (step-size helper for the GD drivers).
double lambda_max_estimate(const Matrix& G, std::uint64_t seed);

}  // namespace polarcomp
