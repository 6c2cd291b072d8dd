#include "polarcomp/sim.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>

#include "polarcomp/decode.h"
#include "polarcomp/io.h"
#include "polarcomp/rng.h"

namespace polarcomp {

RunTimeModel RunTimeModel::uniform(double a, double b, std::uint64_t seed) {
    if (!(a <= b)) throw std::invalid_argument("uniform model: need a <= b");
    RunTimeModel m;
    m.kind = Kind::Uniform;
    m.a = a;
    m.b = b;
    m.seed = seed;
    return m;
}

RunTimeModel RunTimeModel::exponential(double rate, std::uint64_t seed) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential model: rate must be positive");
    RunTimeModel m;
    m.kind = Kind::Exponential;
    m.rate = rate;
    m.seed = seed;
    return m;
}

RunTimeModel RunTimeModel::shifted_exponential(double shift, double rate, std::uint64_t seed) {
    if (!(rate > 0.0) || !(shift >= 0.0))
        throw std::invalid_argument("shifted exponential model: bad parameters");
    RunTimeModel m;
    m.kind = Kind::ShiftedExponential;
    m.shift = shift;
    m.rate = rate;
    m.seed = seed;
    return m;
}

RunTimeModel RunTimeModel::empirical(std::vector<double> samples, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("empirical model: no samples");
    for (double v : samples)
        if (!(v >= 0.0)) throw std::invalid_argument("empirical model: negative sample");
    RunTimeModel m;
    m.kind = Kind::Empirical;
    m.samples = std::move(samples);
    m.seed = seed;
    return m;
}

RunTimeModel RunTimeModel::empirical_file(const std::string& path, std::uint64_t seed) {
    return empirical(read_samples(path), seed);
}

RunTimeModel RunTimeModel::parse(const std::string& text, std::uint64_t seed) {
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto two = [&](double& x, double& y) {
        auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("model '" + name + "' needs two parameters");
        x = std::stod(args.substr(0, comma));
        y = std::stod(args.substr(comma + 1));
    };
    if (name == "uniform") {
        double a = 0.0, b = 1.0;
        if (!args.empty()) two(a, b);
        return uniform(a, b, seed);
    }
    if (name == "exp") return exponential(args.empty() ? 1.0 : std::stod(args), seed);
    if (name == "shiftexp") {
        double shift = 1.0, rate = 1.0;
        if (!args.empty()) two(shift, rate);
        return shifted_exponential(shift, rate, seed);
    }
    if (name == "empirical") {
        if (args.empty()) throw std::invalid_argument("empirical model needs a file path");
        return empirical_file(args, seed);
    }
    throw std::invalid_argument("unknown run-time model: " + name);
}

std::vector<double> sample_times(const RunTimeModel& model, std::size_t N,
                                 std::uint64_t trial) {
    if (N == 0) throw std::invalid_argument("sample_times: N must be positive");
    Rng rng(derive_seed(model.seed, trial));
    std::vector<double> t(N);
    switch (model.kind) {
        case RunTimeModel::Kind::Uniform:
            for (double& v : t) v = rng.uniform(model.a, model.b);
            break;
        case RunTimeModel::Kind::Exponential:
            for (double& v : t) v = rng.exponential(model.rate);
            break;
        case RunTimeModel::Kind::ShiftedExponential:
            for (double& v : t) v = model.shift + rng.exponential(model.rate);
            break;
        case RunTimeModel::Kind::Empirical:
            for (double& v : t) {
                auto i = static_cast<std::size_t>(rng.uniform() *
                                                  static_cast<double>(model.samples.size()));
                v = model.samples[std::min(i, model.samples.size() - 1)];
            }
            break;
    }
    return t;
}

std::vector<double> polarized_times(const std::vector<double>& times) {
    std::size_t n = times.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("polarized_times: length must be a power of 2");
    if (n == 1) return times;
    std::vector<double> hi(n / 2), lo(n / 2);
    for (std::size_t q = 0; q < n / 2; ++q) {
        hi[q] = std::max(times[2 * q], times[2 * q + 1]);
        lo[q] = std::min(times[2 * q], times[2 * q + 1]);
    }
    std::vector<double> out = polarized_times(hi);
    std::vector<double> tail = polarized_times(lo);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

std::vector<std::size_t> arrival_order(const std::vector<double>& times) {
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (times[a] != times[b]) return times[a] < times[b];
        return a < b;
    });
    return order;
}

std::size_t first_decodable_prefix(const std::vector<std::size_t>& order,
                                   const CodeConfig& config) {
    if (order.size() != config.N)
        throw std::invalid_argument("first_decodable_prefix: order must list all N workers");
    auto prefix_ok = [&](std::size_t k) {
        return is_decodable({order.begin(), order.begin() + k}, config);
    };
    std::size_t lo = config.s;  // fewer than s outputs can never decode
    if (prefix_ok(lo)) return lo;
    std::size_t hi = config.N;  // the full set always decodes
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (prefix_ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

namespace {

void summarize(SimReport& r) {
    std::size_t n = r.decode_times.size();
    r.mean = std::accumulate(r.decode_times.begin(), r.decode_times.end(), 0.0) /
             static_cast<double>(n);
    double ss = 0.0;
    for (double v : r.decode_times) ss += (v - r.mean) * (v - r.mean);
    r.variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    std::vector<double> sorted = r.decode_times;
    std::sort(sorted.begin(), sorted.end());
    const double ps[5] = {0.05, 0.25, 0.5, 0.75, 0.95};
    for (int i = 0; i < 5; ++i) {
        auto rank = static_cast<std::size_t>(std::ceil(ps[i] * static_cast<double>(n)));
        r.quantiles[i] = sorted[rank > 0 ? rank - 1 : 0];
    }
}

}  // namespace

SimReport decodability_time(const RunTimeModel& model, const CodeConfig& config,
                            std::size_t trials) {
    if (trials < 1) throw std::invalid_argument("decodability_time: trials must be positive");
    SimReport r;
    r.decode_times.reserve(trials);
    r.set_sizes.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<double> times = sample_times(model, config.N, t);
        std::vector<std::size_t> order = arrival_order(times);
        std::size_t k = first_decodable_prefix(order, config);
        r.decode_times.push_back(times[order[k - 1]]);
        r.set_sizes.push_back(k);
    }
    summarize(r);
    return r;
}

SimReport mds_decodability_time(const RunTimeModel& model, std::size_t N, std::size_t k,
                                std::size_t trials) {
    if (k < 1 || k > N) throw std::invalid_argument("mds_decodability_time: k out of range");
    if (trials < 1) throw std::invalid_argument("mds_decodability_time: trials must be positive");
    SimReport r;
    r.decode_times.reserve(trials);
    r.set_sizes.assign(trials, k);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<double> times = sample_times(model, N, t);
        std::nth_element(times.begin(), times.begin() + (k - 1), times.end());
        r.decode_times.push_back(times[k - 1]);
    }
    summarize(r);
    return r;
}

void run_parallel(const std::vector<MultiplyJob>& jobs, const RunTimeModel& model,
                  std::uint64_t trial, const ArrivalHandler& handler) {
    std::vector<double> times = sample_times(model, jobs.size(), trial);
    for (std::size_t j = 0; j < jobs.size(); ++j) times[j] += jobs[j].inject_delay;
    for (std::size_t j : arrival_order(times)) {
        const MultiplyJob& job = jobs[j];
        Arrival a;
        a.index = job.index;
        a.time = times[j];
        a.output = (*job.block) * (*job.x);
        if (!handler(std::move(a))) return;
    }
}

void run_parallel(const std::vector<MultiplyJob>& jobs, std::size_t threads,
                  const ArrivalHandler& handler) {
    if (threads == 0) threads = 1;
    threads = std::min(threads, jobs.size());
    std::mutex mu;
    std::condition_variable cv;
    std::queue<Arrival> done;
    std::size_t completed = 0;  // includes failed jobs, which are never delivered
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    auto start = std::chrono::steady_clock::now();

    auto work = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const MultiplyJob& job = jobs[j];
            Arrival a;
            a.index = job.index;
            bool ok = true;
            try {
                if (job.inject_delay > 0.0)
                    std::this_thread::sleep_for(std::chrono::duration<double>(job.inject_delay));
                a.output = (*job.block) * (*job.x);
            } catch (...) {
                ok = false;
            }
            a.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
            std::lock_guard<std::mutex> lock(mu);
            ++completed;
            if (ok) done.push(std::move(a));
            cv.notify_one();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);

    {
        std::unique_lock<std::mutex> lock(mu);
        std::size_t seen = 0;
        while (seen < jobs.size()) {
            cv.wait(lock, [&] { return !done.empty() || completed >= jobs.size(); });
            while (!done.empty()) {
                Arrival a = std::move(done.front());
                done.pop();
                ++seen;
                lock.unlock();
                bool keep_going = handler(std::move(a));
                lock.lock();
                if (!keep_going) {
                    stop.store(true);
                    seen = jobs.size();
                    break;
                }
            }
            if (completed >= jobs.size() && done.empty()) break;
        }
    }
    for (std::thread& t : pool) t.join();
}

std::size_t worker_pool_size() {
    if (const char* env = std::getenv("POLARCOMP_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void write_histogram_csv(const std::string& path, const std::vector<double>& samples,
                         std::size_t bins) {
    if (samples.empty() || bins == 0)
        throw std::invalid_argument("write_histogram_csv: nothing to bin");
    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it, hi = *hi_it;
    double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    std::vector<std::size_t> counts(bins, 0);
    for (double v : samples) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(b, bins - 1)]++;
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(bins);
    for (std::size_t b = 0; b < bins; ++b)
        rows.push_back({lo + width * static_cast<double>(b),
                        lo + width * static_cast<double>(b + 1),
                        static_cast<double>(counts[b])});
    write_csv(path, "bin_left,bin_right,count", rows);
}

void write_cdf_csv(const std::string& path, const std::vector<double>& samples) {
    if (samples.empty()) throw std::invalid_argument("write_cdf_csv: no samples");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    // cap the table at ~2000 rows so million-trial runs stay plottable
    std::size_t step = std::max<std::size_t>(1, sorted.size() / 2000);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sorted.size(); i += step)
        rows.push_back({sorted[i], static_cast<double>(i + 1) / static_cast<double>(sorted.size())});
    rows.push_back({sorted.back(), 1.0});
    write_csv(path, "value,cum_fraction", rows);
}

}  // namespace polarcomp
