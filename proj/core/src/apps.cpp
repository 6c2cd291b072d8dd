#include "polarcomp/apps.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "polarcomp/decode.h"
#include "polarcomp/rng.h"

namespace polarcomp {

DivergenceError::DivergenceError(std::size_t iter, double c)
    : std::runtime_error([&] {
          std::ostringstream ss;
          ss << "gradient descent diverged at iteration " << iter << " (cost " << c << ")";
          return ss.str();
      }()),
      iteration(iter),
      cost(c) {}

double lambda_max_estimate(const Matrix& G, std::uint64_t seed) {
    if (G.rows != G.cols) throw std::invalid_argument("lambda_max_estimate: square matrix only");
    Matrix v = Matrix::gaussian(G.rows, 1, derive_seed(seed, 7));
    double lambda = 0.0;
    for (int it = 0; it < 20; ++it) {
        Matrix w = G * v;
        double norm = frobenius_norm(w);
        if (norm == 0.0) return 0.0;
        w *= 1.0 / norm;
        lambda = norm;  // ||G v|| with ||v|| = 1
        v = std::move(w);
    }
    return lambda;
}

namespace {

double squared_residual(const Matrix& A, const Matrix& x, const Matrix& y) {
    double n = frobenius_norm(A * x - y);
    return n * n;
}

struct PrefixWait {
    OutputSet out;
    double decode_time = 0.0;
    std::size_t set_size = 0;
};

GDState run_gd(const Matrix& A, const Matrix& y, double mu, std::size_t iters,
               const CodeConfig& config,
               const std::function<PrefixWait(const EncodedBlocks&, const Matrix&,
                                              std::uint64_t)>& gather) {
    if (A.rows != y.rows) throw std::invalid_argument("gd: A and y row counts differ");
    std::size_t d = A.cols;
    if (d % config.s != 0)
        throw std::invalid_argument("gd: gradient dimension not divisible by s");
    Matrix At = transpose(A);
    Matrix G = At * A;       // encoded once, reused every iteration
    Matrix Aty = At * y;
    EncodedBlocks enc = encode(G, config);

    GDState state;
    state.x = Matrix::zero(d, y.cols);
    state.mu = mu > 0.0 ? mu : 1.0 / lambda_max_estimate(G, config.seed);
    double initial_cost = squared_residual(A, state.x, y);
    double abort_at = 1e3 * std::max(initial_cost, 1e-300);

    for (std::size_t t = 0; t < iters; ++t) {
        auto tick = std::chrono::steady_clock::now();
        PrefixWait wait = gather(enc, state.x, t);
        Matrix Gx = decode(wait.out, config);
        Matrix grad = Gx - Aty;
        grad *= state.mu;
        state.x -= grad;
        GDState::IterStat stat;
        stat.cost = squared_residual(A, state.x, y);
        stat.decode_time = wait.decode_time;
        stat.set_size = wait.set_size;
        stat.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
        state.history.push_back(stat);
        if (!std::isfinite(stat.cost) || stat.cost > abort_at)
            throw DivergenceError(t, stat.cost);
    }
    return state;
}

}  // namespace

GDState coded_gd_least_squares(const Matrix& A, const Matrix& y, double mu,
                               std::size_t iters, const CodeConfig& config,
                               const RunTimeModel& model, std::uint64_t seed) {
    auto gather = [&](const EncodedBlocks& enc, const Matrix& x,
                      std::uint64_t t) -> PrefixWait {
        std::vector<double> times = sample_times(model, config.N, derive_seed(seed, t));
        std::vector<std::size_t> order = arrival_order(times);
        std::size_t k = first_decodable_prefix(order, config);
        PrefixWait w;
        for (std::size_t r = 0; r < k; ++r)
            w.out.outputs[order[r]] = enc.blocks[order[r]] * x;
        w.decode_time = times[order[k - 1]];
        w.set_size = k;
        return w;
    };
    return run_gd(A, y, mu, iters, config, gather);
}

GDState coded_gd_least_squares(const Matrix& A, const Matrix& y, double mu,
                               std::size_t iters, const CodeConfig& config,
                               std::size_t threads) {
    auto gather = [&](const EncodedBlocks& enc, const Matrix& x,
                      std::uint64_t) -> PrefixWait {
        std::vector<MultiplyJob> jobs(config.N);
        for (std::size_t i = 0; i < config.N; ++i)
            jobs[i] = MultiplyJob{i, &enc.blocks[i], &x, 0.0};
        PrefixWait w;
        std::vector<std::size_t> have;
        run_parallel(jobs, threads, [&](Arrival a) {
            have.push_back(a.index);
            w.out.outputs[a.index] = std::move(a.output);
            w.out.times[a.index] = a.time;
            w.decode_time = a.time;
            w.set_size = have.size();
            return !(have.size() >= config.s && is_decodable(have, config));
        });
        return w;
    };
    return run_gd(A, y, mu, iters, config, gather);
}

double BlackBoxProblem::effective_delta(const std::vector<double>& theta) const {
    if (delta > 0.0) return delta;
    double m = 0.0;
    for (double v : theta) m = std::max(m, std::abs(v));
    return 1e-4 * (m + 1.0);
}

double BlackBoxProblem::eval(const std::vector<double>& theta) const {
    double v = objective(theta);
    if (!std::isfinite(v)) throw NumericalError("objective returned a non-finite value");
    return v;
}

namespace {

// Symmetric difference quotient along an arbitrary direction.
double directional_diff(const BlackBoxProblem& p, const std::vector<double>& theta,
                        const std::vector<double>& dir, double delta) {
    std::vector<double> plus = theta, minus = theta;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        plus[i] += delta * dir[i];
        minus[i] -= delta * dir[i];
    }
    return (p.eval(plus) - p.eval(minus)) / (2.0 * delta);
}

// Row i of the +-1 transform, via the butterfly on an indicator (the
// transform is symmetric, so column i equals row i).
std::vector<double> transform_row(std::size_t N, std::size_t i) {
    std::vector<double> row(N, 0.0);
    row[i] = 1.0;
    hadamard_blocks(row.data(), N, 1);
    return row;
}

}  // namespace

std::vector<double> finite_diff_grad(const BlackBoxProblem& problem,
                                     const std::vector<double>& theta) {
    if (theta.size() != problem.dim)
        throw std::invalid_argument("finite_diff_grad: theta has the wrong dimension");
    double delta = problem.effective_delta(theta);
    std::vector<double> g(problem.dim);
    std::vector<double> plus = theta, minus = theta;
    for (std::size_t i = 0; i < problem.dim; ++i) {
        plus[i] = theta[i] + delta;
        minus[i] = theta[i] - delta;
        g[i] = (problem.eval(plus) - problem.eval(minus)) / (2.0 * delta);
        plus[i] = theta[i];
        minus[i] = theta[i];
    }
    return g;
}

std::vector<double> es_grad(const BlackBoxProblem& problem, const std::vector<double>& theta,
                            std::size_t N, DirectionMode mode, std::uint64_t seed) {
    if (theta.size() != problem.dim)
        throw std::invalid_argument("es_grad: theta has the wrong dimension");
    if (N < 1) throw std::invalid_argument("es_grad: N must be positive");
    std::size_t d = problem.dim;
    if (mode == DirectionMode::HadamardRademacher) {
        if (N != d || (N & (N - 1)) != 0)
            throw std::invalid_argument(
                "es_grad: structured directions need N == dim, a power of 2");
    }
    double delta = problem.effective_delta(theta);
    Rng rng(derive_seed(seed, 11));
    std::vector<double> signs(d);
    if (mode == DirectionMode::HadamardRademacher)
        for (double& v : signs) v = rng.sign();

    std::vector<double> g(d, 0.0);
    std::vector<double> dir(d);
    for (std::size_t i = 0; i < N; ++i) {
        if (mode == DirectionMode::Gaussian) {
            for (double& v : dir) v = rng.gaussian();
        } else {
            dir = transform_row(d, i);
            for (std::size_t k = 0; k < d; ++k) dir[k] *= signs[k];
        }
        double slope = directional_diff(problem, theta, dir, delta);
        for (std::size_t k = 0; k < d; ++k) g[k] += slope * dir[k];
    }
    double scale = 1.0 / static_cast<double>(N);
    for (double& v : g) v *= scale;
    return g;
}

std::vector<double> coded_blackbox_grad(const BlackBoxProblem& problem,
                                        const std::vector<double>& theta,
                                        const CodeConfig& config,
                                        const std::vector<std::size_t>* present) {
    if (theta.size() != problem.dim)
        throw std::invalid_argument("coded_blackbox_grad: theta has the wrong dimension");
    if (config.s != problem.dim)
        throw std::invalid_argument("coded_blackbox_grad: config.s must equal the dimension");
    double delta = problem.effective_delta(theta);
    Matrix Z = materialize_Z(config);  // row i is worker i's perturbation direction

    OutputSet out;
    std::vector<double> dir(config.s);
    auto push_worker = [&](std::size_t i) {
        for (std::size_t k = 0; k < config.s; ++k) dir[k] = Z(i, k);
        Matrix cell(1, 1);
        cell(0, 0) = directional_diff(problem, theta, dir, delta);
        out.outputs[i] = std::move(cell);
    };
    if (present) {
        for (std::size_t i : *present) push_worker(i);
    } else {
        for (std::size_t i = 0; i < config.N; ++i) push_worker(i);
    }
    Matrix g = decode(out, config);  // s x 1, signs already divided out
    return {g.data.begin(), g.data.end()};
}

Matrix coded_matmul_2d(const Matrix& A, const Matrix& B, const CodeConfig& config_rows,
                       const CodeConfig& config_cols,
                       const std::vector<std::vector<std::uint8_t>>& present) {
    if (A.cols != B.rows) throw std::invalid_argument("coded_matmul_2d: inner dims differ");
    if (present.size() != config_rows.N)
        throw std::invalid_argument("coded_matmul_2d: present mask has wrong row count");
    for (const auto& row : present)
        if (row.size() != config_cols.N)
            throw std::invalid_argument("coded_matmul_2d: present mask has ragged rows");

    EncodedBlocks Ae = encode(A, config_rows);
    EncodedBlocks Bte = encode(transpose(B), config_cols);
    std::vector<Matrix> Be(config_cols.N);
    for (std::size_t j = 0; j < config_cols.N; ++j) Be[j] = transpose(Bte.blocks[j]);

    std::vector<std::vector<Matrix>> grid(config_rows.N,
                                          std::vector<Matrix>(config_cols.N));
    for (std::size_t i = 0; i < config_rows.N; ++i)
        for (std::size_t j = 0; j < config_cols.N; ++j)
            if (present[i][j]) grid[i][j] = Ae.blocks[i] * Be[j];
    return decode_2d(grid, config_rows, config_cols);
}

BlackboxComparison compare_blackbox_methods(const Matrix& A, const Matrix& b,
                                            std::size_t iters, double step, double delta,
                                            std::uint64_t seed, bool coded_guard) {
    std::size_t d = A.cols;
    if ((d & (d - 1)) != 0) throw std::invalid_argument("comparison needs a power-of-2 dim");
    std::size_t half = d / 2;

    BlackBoxProblem problem;
    problem.dim = d;
    problem.delta = delta;
    problem.objective = [&](const std::vector<double>& theta) {
        double cost = 0.0;
        for (std::size_t i = 0; i < A.rows; ++i) {
            double r = -b(i, 0);
            const double* arow = A.row_ptr(i);
            for (std::size_t k = 0; k < d; ++k) r += arow[k] * theta[k];
            cost += std::abs(r);
        }
        return cost;
    };

    RunTimeModel model = RunTimeModel::uniform(0.0, 1.0, derive_seed(seed, 13));
    CodeConfig coded_cfg = build_code(2 * d, d, 0.5, derive_seed(seed, 17));

    BlackboxComparison result;
    std::vector<double> theta_fd(d, 0.0), theta_es(d, 0.0), theta_coded(d, 0.0);
    Rng es_rng(derive_seed(seed, 19));

    for (std::size_t t = 0; t < iters; ++t) {
        double dlt = problem.delta > 0.0 ? problem.delta : problem.effective_delta(theta_fd);

        // coordinate differences, first half of the coordinates to finish
        {
            std::vector<double> times = sample_times(model, d, 2 * t);
            std::vector<std::size_t> order = arrival_order(times);
            std::vector<double> g(d, 0.0);
            std::vector<double> plus = theta_fd, minus = theta_fd;
            for (std::size_t r = 0; r < half; ++r) {
                std::size_t i = order[r];
                plus[i] = theta_fd[i] + dlt;
                minus[i] = theta_fd[i] - dlt;
                g[i] = (problem.eval(plus) - problem.eval(minus)) / (2.0 * dlt);
                plus[i] = theta_fd[i];
                minus[i] = theta_fd[i];
            }
            for (std::size_t k = 0; k < d; ++k) theta_fd[k] -= step * g[k];
            result.fd_cost.push_back(problem.eval(theta_fd));
        }

        // structured ES, first half of the transform rows to finish
        {
            std::vector<double> signs(d);
            for (double& v : signs) v = es_rng.sign();
            std::vector<double> times = sample_times(model, d, 2 * t + 1);
            std::vector<std::size_t> order = arrival_order(times);
            std::vector<double> g(d, 0.0);
            std::vector<double> dir(d);
            for (std::size_t r = 0; r < half; ++r) {
                dir = transform_row(d, order[r]);
                for (std::size_t k = 0; k < d; ++k) dir[k] *= signs[k];
                double slope = directional_diff(problem, theta_es, dir, dlt);
                for (std::size_t k = 0; k < d; ++k) g[k] += slope * dir[k];
            }
            for (std::size_t k = 0; k < d; ++k)
                theta_es[k] -= step * g[k] / static_cast<double>(half);
            result.es_cost.push_back(problem.eval(theta_es));
        }

        // coded estimator, first decodable prefix of the 2d workers
        {
            std::vector<double> times = sample_times(model, coded_cfg.N, 100000 + t);
            std::vector<std::size_t> order = arrival_order(times);
            std::size_t k = first_decodable_prefix(order, coded_cfg);
            std::vector<std::size_t> subset(order.begin(), order.begin() + k);
            BlackBoxProblem p = problem;
            p.delta = dlt;
            std::vector<double> g = coded_blackbox_grad(p, theta_coded, coded_cfg, &subset);
            std::vector<double> candidate = theta_coded;
            for (std::size_t j = 0; j < d; ++j) candidate[j] -= step * g[j];
            double cost = problem.eval(candidate);
            if (coded_guard && cost > problem.eval(theta_coded)) {
                cost = problem.eval(theta_coded);  // update rejected, iterate kept
            } else {
                theta_coded = candidate;
            }
            result.coded_cost.push_back(cost);
        }
    }
    return result;
}

}  // namespace polarcomp
