#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polarcomp/code.h"
#include "polarcomp/matrix.h"

namespace polarcomp {

// Sampler of i.i.d. worker completion times. Deterministic in
// (seed, trial, N); the empirical kind resamples a loaded trace with
// replacement.
struct RunTimeModel {
    enum class Kind { Uniform, Exponential, ShiftedExponential, Empirical };

    Kind kind = Kind::Uniform;
    double a = 0.0, b = 1.0;  // uniform bounds
    double rate = 1.0;
    double shift = 0.0;
    std::vector<double> samples;
    std::uint64_t seed = 0;

    static RunTimeModel uniform(double a, double b, std::uint64_t seed);
    static RunTimeModel exponential(double rate, std::uint64_t seed);
    static RunTimeModel shifted_exponential(double shift, double rate, std::uint64_t seed);
    static RunTimeModel empirical(std::vector<double> samples, std::uint64_t seed);
    static RunTimeModel empirical_file(const std::string& path, std::uint64_t seed);

    // Parse "uniform:a,b", "exp:rate", "shiftexp:shift,rate",
    // "empirical:path" (the CLI's --model syntax).
    static RunTimeModel parse(const std::string& text, std::uint64_t seed);
};

std::vector<double> sample_times(const RunTimeModel& model, std::size_t N,
                                 std::uint64_t trial);

// Recursive pairwise max/min combination: the decode time of each
// transformed input when the code is grown by adjacent pairing. Output 0 is
// the overall max, output N-1 the overall min, and the multiset of times is
// preserved.
std::vector<double> polarized_times(const std::vector<double>& times);

struct SimReport {
    std::vector<double> decode_times;      // one entry per trial
    std::vector<std::size_t> set_sizes;    // outputs needed, per trial
    double mean = 0.0;
    double variance = 0.0;                  // unbiased sample variance
    std::array<double, 5> quantiles{};      // p05, p25, p50, p75, p95
};

// Sorted arrival order of N sampled times; ties resolved by worker index so
// reports are reproducible.
std::vector<std::size_t> arrival_order(const std::vector<double>& times);

// Smallest k such that the first k arrivals form a decodable set. Arrival
// prefixes are nested and decodability is monotone under set inclusion
// (property-tested), so a binary search finds the same k the arrival-by-
// arrival rescan would.
std::size_t first_decodable_prefix(const std::vector<std::size_t>& order,
                                   const CodeConfig& config);

SimReport decodability_time(const RunTimeModel& model, const CodeConfig& config,
                            std::size_t trials);

// Recovery threshold of an ideal (maximum distance separable) code: the k-th
// smallest completion time.
SimReport mds_decodability_time(const RunTimeModel& model, std::size_t N, std::size_t k,
                                std::size_t trials);

// One block multiply per worker. inject_delay adds to the sampled time in
// simulated mode and to the real execution in pool mode (test hook).
struct MultiplyJob {
    std::size_t index = 0;
    const Matrix* block = nullptr;
    const Matrix* x = nullptr;
    double inject_delay = 0.0;
};

struct Arrival {
    std::size_t index = 0;
    double time = 0.0;
    Matrix output;
};

// Return false to stop consuming arrivals.
using ArrivalHandler = std::function<bool(Arrival)>;

// Simulated execution: jobs complete in sampled-time order.
void run_parallel(const std::vector<MultiplyJob>& jobs, const RunTimeModel& model,
                  std::uint64_t trial, const ArrivalHandler& handler);

// Real execution on a bounded thread pool; a job that throws surfaces as a
// permanently absent output.
void run_parallel(const std::vector<MultiplyJob>& jobs, std::size_t threads,
                  const ArrivalHandler& handler);

// POLARCOMP_THREADS when set, hardware concurrency otherwise.
std::size_t worker_pool_size();

void write_histogram_csv(const std::string& path, const std::vector<double>& samples,
                         std::size_t bins);
void write_cdf_csv(const std::string& path, const std::vector<double>& samples);

}  // namespace polarcomp
