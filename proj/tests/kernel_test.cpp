#include "polarcomp/kernel.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "polarcomp/rng.h"
#include "support/oracles.h"

using polarcomp::Kernel;
using polarcomp::Rng;

namespace {

Kernel random_kernel(std::size_t p, Rng& rng, bool discrete) {
    std::vector<double> entries(p * p);
    for (double& v : entries)
        v = discrete ? std::floor(rng.uniform(-1.0, 2.0)) : rng.gaussian();
    return Kernel(p, entries);
}

}  // namespace

TEST(Polarizing2x2, HadamardAndF2Accepted) {
    EXPECT_TRUE(polarcomp::is_polarizing_2x2(Kernel(2, {1, 1, 1, -1})));
    EXPECT_TRUE(polarcomp::is_polarizing_2x2(Kernel(2, {1, 1, 0, 1})));
}

TEST(Polarizing2x2, DegenerateRejected) {
    EXPECT_FALSE(polarcomp::is_polarizing_2x2(Kernel(2, {1, 0, 0, 1})));  // second-column zero
    EXPECT_FALSE(polarcomp::is_polarizing_2x2(Kernel(2, {1, 1, 2, 2})));  // singular
}

TEST(Polarizing2x2, WrongSizeRejected) {
    EXPECT_THROW(polarcomp::is_polarizing_2x2(Kernel(3, std::vector<double>(9, 1.0))),
                 std::invalid_argument);
}

TEST(PolarizingPxp, PaperKernelsAccepted) {
    EXPECT_TRUE(polarcomp::is_polarizing_pxp(Kernel(3, {1, 1, 1, 0, -1, 1, 0, 0, 1})));
    EXPECT_TRUE(polarcomp::is_polarizing_pxp(
        Kernel(4, {1, 1, 1, 1, 0, 1, 2, 3, 0, 0, 1, 4, 0, 0, 0, 1})));
}

TEST(PolarizingPxp, IdentityRejected) {
    EXPECT_FALSE(polarcomp::is_polarizing_pxp(Kernel(3, {1, 0, 0, 0, 1, 0, 0, 0, 1})));
}

TEST(PolarizingPxp, ZeroedLastColumnEntryRejected) {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        Kernel k = random_kernel(3, rng, false);
        k.entries[1 * 3 + 2] = 0.0;
        EXPECT_FALSE(polarcomp::is_polarizing_pxp(k));
    }
}

TEST(PolarizingPxp, SizeLimitsEnforced) {
    EXPECT_THROW(polarcomp::is_polarizing_pxp(Kernel(1, {1})), std::invalid_argument);
    EXPECT_THROW(polarcomp::is_polarizing_pxp(Kernel(9, std::vector<double>(81, 1.0))),
                 std::invalid_argument);
}

TEST(PolarizingPxp, AgreesWith2x2OnRandomKernels) {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        Kernel k = random_kernel(2, rng, trial % 2 == 0);
        EXPECT_EQ(polarcomp::is_polarizing_2x2(k), polarcomp::is_polarizing_pxp(k));
    }
}

TEST(PolarizingPxp, AgreesWithBruteForceOnRandomKernels) {
    Rng rng(99);
    for (std::size_t p : {2u, 3u, 4u}) {
        int rejected = 0;
        for (int trial = 0; trial < 300; ++trial) {
            Kernel k = random_kernel(p, rng, trial % 2 == 0);
            bool got = polarcomp::is_polarizing_pxp(k);
            EXPECT_EQ(got, testsupport::brute_force_polarizing(k)) << "p=" << p;
            if (!got) ++rejected;
        }
        EXPECT_GT(rejected, 0) << "discrete kernels should produce rejections at p=" << p;
    }
}

TEST(ErasureProfile, RoundedTableValuesAtN4) {
    auto profile = polarcomp::erasure_profile(0.5, 4);
    std::vector<double> got = profile.probs;
    std::sort(got.begin(), got.end());
    // Three-decimal roundings of (1/16, 7/16, 9/16, 15/16); the tolerance is
    // the rounding radius plus representation slack for the literals.
    std::vector<double> want = {0.063, 0.438, 0.563, 0.938};
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 5e-4 + 1e-12);
}

TEST(ErasureProfile, SmallCasesAndEdges) {
    auto p2 = polarcomp::erasure_profile(0.5, 2);
    std::vector<double> got = p2.probs;
    std::sort(got.begin(), got.end());
    EXPECT_DOUBLE_EQ(got[0], 0.25);
    EXPECT_DOUBLE_EQ(got[1], 0.75);

    for (double v : polarcomp::erasure_profile(0.0, 8).probs) EXPECT_DOUBLE_EQ(v, 0.0);
    for (double v : polarcomp::erasure_profile(1.0, 8).probs) EXPECT_DOUBLE_EQ(v, 1.0);

    EXPECT_THROW(polarcomp::erasure_profile(0.5, 3), std::invalid_argument);
    EXPECT_THROW(polarcomp::erasure_profile(0.5, 0), std::invalid_argument);
    EXPECT_THROW(polarcomp::erasure_profile(-0.1, 4), std::invalid_argument);
    EXPECT_THROW(polarcomp::erasure_profile(1.1, 4), std::invalid_argument);
}

TEST(ErasureProfile, MatchesExhaustiveEnumerationIndexwise) {
    for (std::size_t N : {2u, 4u, 8u, 16u})
        for (double eps : {0.2, 0.375, 0.5, 0.8}) {
            auto got = polarcomp::erasure_profile(eps, N).probs;
            auto want = testsupport::erasure_profile_enumerated(N, eps);
            ASSERT_EQ(got.size(), want.size());
            for (std::size_t i = 0; i < N; ++i)
                EXPECT_NEAR(got[i], want[i], 1e-12) << "N=" << N << " eps=" << eps << " i=" << i;
        }
}

TEST(ErasureProfile, MeanConservedAndBranchesOrdered) {
    for (double eps : {0.0, 0.1, 0.375, 0.5, 0.9, 1.0}) {
        EXPECT_GE(polarcomp::erasure_needs_both(eps), eps - 1e-15);
        EXPECT_LE(polarcomp::erasure_needs_either(eps), eps + 1e-15);
        EXPECT_NEAR(polarcomp::erasure_needs_both(eps) + polarcomp::erasure_needs_either(eps),
                    2.0 * eps, 1e-15);
        for (std::size_t N : {4u, 64u}) {
            auto probs = polarcomp::erasure_profile(eps, N).probs;
            double mean = 0.0;
            for (double v : probs) mean += v;
            mean /= static_cast<double>(N);
            EXPECT_NEAR(mean, eps, 1e-12);
        }
    }
}

TEST(ErasureProfile, PolarizesToCapacityAtLargeN) {
    // The share of near-perfect positions approaches 1 - eps slowly, roughly
    // like N^(-0.28), so assert the direction of convergence plus a bound at
    // the largest size actually computed (measured gaps there: 0.016, 0.019).
    for (double eps : {0.25, 0.5}) {
        std::vector<double> gaps;
        for (std::size_t logn : {14u, 17u, 20u}) {
            auto probs = polarcomp::erasure_profile(eps, std::size_t{1} << logn).probs;
            double below = 0.0;
            for (double v : probs)
                if (v < 0.01) below += 1.0;
            below /= static_cast<double>(probs.size());
            gaps.push_back(std::fabs(below - (1.0 - eps)));
        }
        EXPECT_LT(gaps[1], gaps[0]) << "eps=" << eps;
        EXPECT_LT(gaps[2], gaps[1]) << "eps=" << eps;
        EXPECT_LT(gaps[2], 0.02) << "eps=" << eps;
    }
}

TEST(SelectFrozen, WorstIndicesFrozen) {
    auto profile = polarcomp::erasure_profile(0.5, 4);
    auto frozen = polarcomp::select_frozen(profile, 2);
    EXPECT_EQ(frozen, (std::vector<std::size_t>{0, 1}));

    EXPECT_TRUE(polarcomp::select_frozen(profile, 4).empty());
    EXPECT_THROW(polarcomp::select_frozen(profile, 0), std::invalid_argument);
    EXPECT_THROW(polarcomp::select_frozen(profile, 5), std::invalid_argument);
}

TEST(SelectFrozen, MatchesFullSortAtN8) {
    auto profile = polarcomp::erasure_profile(0.375, 8);
    auto frozen = polarcomp::select_frozen(profile, 5);

    std::vector<std::size_t> idx(8);
    for (std::size_t i = 0; i < 8; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (profile.probs[a] != profile.probs[b]) return profile.probs[a] > profile.probs[b];
        return a < b;
    });
    std::vector<std::size_t> want(idx.begin(), idx.begin() + 3);
    std::sort(want.begin(), want.end());
    EXPECT_EQ(frozen, want);
}

TEST(SelectFrozen, TiesFreezeLowerIndexFirst) {
    auto profile = polarcomp::erasure_profile(1.0, 4);  // all entries equal 1
    EXPECT_EQ(polarcomp::select_frozen(profile, 2), (std::vector<std::size_t>{0, 1}));
}

TEST(KernelRuntimeMap, SortsDescending) {
    Kernel had(2, {1, 1, 1, -1});
    EXPECT_EQ(polarcomp::kernel_runtime_map(had, {3.0, 7.0}), (std::vector<double>{7.0, 3.0}));

    Kernel tri3(3, {1, 1, 1, 0, -1, 1, 0, 0, 1});
    EXPECT_EQ(polarcomp::kernel_runtime_map(tri3, {1.0, 5.0, 2.0}),
              (std::vector<double>{5.0, 2.0, 1.0}));

    Kernel tri4(4, {1, 1, 1, 1, 0, 1, 2, 3, 0, 0, 1, 4, 0, 0, 0, 1});
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> times(4);
        for (double& t : times) t = rng.uniform();
        auto got = polarcomp::kernel_runtime_map(tri4, times);
        auto want = times;
        std::sort(want.rbegin(), want.rend());
        EXPECT_EQ(got, want);
    }
}

TEST(KernelRuntimeMap, PairStatisticsForRandomPolarizingKernels) {
    Rng rng(31);
    int used = 0;
    while (used < 100) {
        Kernel k = random_kernel(2, rng, false);
        if (!polarcomp::is_polarizing_2x2(k)) continue;
        ++used;
        double a = rng.uniform(), b = rng.uniform();
        auto got = polarcomp::kernel_runtime_map(k, {a, b});
        EXPECT_DOUBLE_EQ(got[0], std::max(a, b));
        EXPECT_DOUBLE_EQ(got[1], std::min(a, b));
    }
}

TEST(KernelRuntimeMap, NonPolarizingKernelRejected) {
    EXPECT_THROW(polarcomp::kernel_runtime_map(Kernel(2, {1, 0, 0, 1}), {1.0, 2.0}),
                 std::invalid_argument);
    EXPECT_THROW(polarcomp::kernel_runtime_map(Kernel(2, {1, 1, 1, -1}), {1.0}),
                 std::invalid_argument);
}
