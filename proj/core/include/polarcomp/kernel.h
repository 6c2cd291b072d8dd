#pragma once

#include <cstddef>
#include <vector>

namespace polarcomp {

// Small square kernel used to build the recursive transform. Only its
// polarization properties are analyzed here; the block encoder itself is
// fixed to the 2x2 +-1 butterfly.
struct Kernel {
    std::size_t p = 0;
    std::vector<double> entries;  // row-major p*p

    Kernel() = default;
    Kernel(std::size_t size, std::vector<double> e);

    double operator()(std::size_t i, std::size_t j) const { return entries[i * p + j]; }
};

// Recovery-failure probability of each transformed input position when every
// worker output is erased independently with probability epsilon.
struct ErasureProfile {
    std::vector<double> probs;  // length N, indexed by transformed input
    double epsilon = 0.0;
    std::size_t N = 0;
};

// One butterfly level maps an input-erasure probability e to two new ones:
// the branch that needs both downstream values, and the branch that can use
// either one. Their mean is e, so redundancy is only redistributed.
inline double erasure_needs_both(double e) { return 1.0 - (1.0 - e) * (1.0 - e); }
inline double erasure_needs_either(double e) { return e * e; }

// True iff decoding through K sorts the two input recovery times: K must be
// invertible and both entries of its second column nonzero. Tolerances are
// relative to the largest entry (see kernel.cpp).
bool is_polarizing_2x2(const Kernel& k);

// General p: K invertible, and for every j in 1..p-1, after dropping the
// first j columns every (p-j)-row subset of the remainder is invertible.
// Enforced for 2 <= p <= 8 only; subset enumeration is exponential in p.
bool is_polarizing_pxp(const Kernel& k);

ErasureProfile erasure_profile(double epsilon, std::size_t N);

// Indices of the N-s worst (highest-probability) entries, sorted ascending.
// Ties freeze the lower index first so configs are reproducible.
std::vector<std::size_t> select_frozen(const ErasureProfile& profile, std::size_t s);

// Decode time of each transformed input under a polarizing kernel: the i-th
// output is the i-th largest of the p input times.
std::vector<double> kernel_runtime_map(const Kernel& k, const std::vector<double>& times);

}  // namespace polarcomp
