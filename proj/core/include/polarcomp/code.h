#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "polarcomp/matrix.h"

namespace polarcomp {

// One code instance: N workers, s data inputs, the rest frozen to zero.
// The kernel is fixed to the 2x2 +-1 butterfly; signs hold the diagonal of
// the Rademacher matrix D and are regenerated from signs_seed, never stored.
struct CodeConfig {
    std::size_t N = 0;
    std::size_t s = 0;
    double epsilon = 0.0;
    std::vector<std::size_t> frozen;  // sorted, size N - s
    std::vector<double> signs;        // length N, entries +-1
    std::uint64_t seed = 0;
    std::uint64_t signs_seed = 0;

    bool is_frozen(std::size_t i) const;
    // Transformed-input indices carrying data, ascending; block b of the
    // payload sits at data_indices()[b].
    std::vector<std::size_t> data_indices() const;
    std::size_t levels() const;  // log2(N)
};

// The N encoded blocks, one per worker, each (rows/s) x cols of the payload.
struct EncodedBlocks {
    std::vector<Matrix> blocks;
};

struct EncodeStats {
    std::size_t block_ops = 0;  // block additions/subtractions performed
};

// In-place butterfly over `slots` contiguous blocks of slot_len doubles;
// equivalent to multiplying by the N x N +-1 transform along the slot axis.
// Exactly slots*log2(slots) block additions/subtractions.
void hadamard_blocks(double* data, std::size_t slots, std::size_t slot_len,
                     EncodeStats* stats = nullptr);

CodeConfig build_code(std::size_t N, std::size_t s, double epsilon, std::uint64_t seed);

// Dense N x s generator (transform * signs * data placement). Test oracle and
// estimator helper; the fast path never forms it.
Matrix materialize_Z(const CodeConfig& config);

EncodedBlocks encode(const Matrix& A, const CodeConfig& config, EncodeStats* stats = nullptr);

// Split A into p independent row bands, each encoded with its own smaller
// code; band i decodes on its own.
std::vector<EncodedBlocks> encode_partial(const Matrix& A, std::size_t p,
                                          const CodeConfig& config_small);

// Privacy pad: one frozen input is replaced by a random Gaussian block so
// that every worker output carries a +-1 multiple of it. The padded input is
// the most reliable frozen position, so recovery is never made harder.
struct PaddedCode {
    CodeConfig config;       // original config (pad position still frozen here)
    std::size_t pad_index = 0;
    std::uint64_t pad_seed = 0;

    // Config the decoder should use: pad position promoted to a data input.
    CodeConfig decode_config() const;
    Matrix pad_block(std::size_t rows, std::size_t cols) const;
};

PaddedCode add_privacy_pad(const CodeConfig& config, std::uint64_t pad_seed);
EncodedBlocks encode_padded(const Matrix& A, const PaddedCode& padded);

std::string config_to_json(const CodeConfig& config);
CodeConfig config_from_json(const std::string& text);
void write_config(const std::string& path, const CodeConfig& config);
CodeConfig read_config(const std::string& path);

}  // namespace polarcomp
