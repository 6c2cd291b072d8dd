// Microbenchmarks for the hot paths: the in-place block butterfly, encode,
// full-set decode, and the anytime estimator. N sweeps over powers of two
// with the payload held at a fixed per-block size, so time per op should
// track N log N.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "polarcomp/code.h"
#include "polarcomp/decode.h"
#include "polarcomp/matrix.h"
#include "polarcomp/sketch.h"

namespace {

constexpr std::size_t kBlockRows = 4;
constexpr std::size_t kCols = 16;

polarcomp::CodeConfig config_for(std::size_t N) {
    return polarcomp::build_code(N, (3 * N) / 4, 0.375, 7);
}

polarcomp::Matrix payload(const polarcomp::CodeConfig& cfg) {
    return polarcomp::Matrix::gaussian(cfg.s * kBlockRows, kCols, 11);
}

void BM_HadamardBlocks(benchmark::State& state) {
    auto N = static_cast<std::size_t>(state.range(0));
    std::vector<double> buf(N * kBlockRows * kCols, 1.0);
    for (auto _ : state) {
        polarcomp::hadamard_blocks(buf.data(), N, kBlockRows * kCols);
        benchmark::DoNotOptimize(buf.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(buf.size()));
}
BENCHMARK(BM_HadamardBlocks)->RangeMultiplier(4)->Range(64, 4096);

void BM_Encode(benchmark::State& state) {
    auto N = static_cast<std::size_t>(state.range(0));
    auto cfg = config_for(N);
    auto A = payload(cfg);
    for (auto _ : state) {
        auto enc = polarcomp::encode(A, cfg);
        benchmark::DoNotOptimize(enc.blocks.data());
    }
}
BENCHMARK(BM_Encode)->RangeMultiplier(4)->Range(64, 4096);

void BM_DecodeFullSet(benchmark::State& state) {
    auto N = static_cast<std::size_t>(state.range(0));
    auto cfg = config_for(N);
    auto enc = polarcomp::encode(payload(cfg), cfg);
    polarcomp::OutputSet set;
    for (std::size_t i = 0; i < N; ++i) set.outputs[i] = enc.blocks[i];
    for (auto _ : state) {
        auto result = polarcomp::decode(set, cfg);
        benchmark::DoNotOptimize(result.data.data());
    }
}
BENCHMARK(BM_DecodeFullSet)->RangeMultiplier(4)->Range(64, 4096);

void BM_AnytimeEstimate(benchmark::State& state) {
    auto N = static_cast<std::size_t>(state.range(0));
    auto cfg = config_for(N);
    auto enc = polarcomp::encode(payload(cfg), cfg);
    polarcomp::OutputSet set;
    for (std::size_t i = 0; i < N; i += 2) set.outputs[i] = enc.blocks[i];
    for (auto _ : state) {
        auto est = polarcomp::anytime_estimate(set, cfg);
        benchmark::DoNotOptimize(est.value.data.data());
    }
}
BENCHMARK(BM_AnytimeEstimate)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
