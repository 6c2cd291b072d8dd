#include "polarcomp/code.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "polarcomp/kernel.h"
#include "polarcomp/rng.h"

namespace polarcomp {

namespace {

void validate_config(const CodeConfig& c) {
    if (c.N == 0 || (c.N & (c.N - 1)) != 0)
        throw std::invalid_argument("config: N must be a power of 2");
    if (c.s < 1 || c.s > c.N) throw std::invalid_argument("config: s must lie in [1, N]");
    if (c.frozen.size() != c.N - c.s)
        throw std::invalid_argument("config: frozen set size must be N - s");
    if (!std::is_sorted(c.frozen.begin(), c.frozen.end()))
        throw std::invalid_argument("config: frozen set must be sorted");
    for (std::size_t f : c.frozen)
        if (f >= c.N) throw std::invalid_argument("config: frozen index out of range");
    if (c.signs.size() != c.N) throw std::invalid_argument("config: signs length must be N");
}

std::vector<double> regenerate_signs(std::size_t N, std::uint64_t signs_seed) {
    Rng rng(signs_seed);
    std::vector<double> signs(N);
    for (double& v : signs) v = rng.sign();
    return signs;
}

}  // namespace

bool CodeConfig::is_frozen(std::size_t i) const {
    return std::binary_search(frozen.begin(), frozen.end(), i);
}

std::vector<std::size_t> CodeConfig::data_indices() const {
    std::vector<std::size_t> out;
    out.reserve(s);
    for (std::size_t i = 0; i < N; ++i)
        if (!is_frozen(i)) out.push_back(i);
    return out;
}

std::size_t CodeConfig::levels() const {
    return static_cast<std::size_t>(std::countr_zero(N));
}

void hadamard_blocks(double* data, std::size_t slots, std::size_t slot_len,
                     EncodeStats* stats) {
    for (std::size_t h = 1; h < slots; h <<= 1) {
        for (std::size_t i = 0; i < slots; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                double* a = data + j * slot_len;
                double* b = data + (j + h) * slot_len;
                for (std::size_t k = 0; k < slot_len; ++k) {
                    double u = a[k], v = b[k];
                    a[k] = u + v;
                    b[k] = u - v;
                }
                if (stats) stats->block_ops += 2;
            }
        }
    }
}

CodeConfig build_code(std::size_t N, std::size_t s, double epsilon, std::uint64_t seed) {
    if (N == 0 || (N & (N - 1)) != 0) throw std::invalid_argument("N must be a power of 2");
    if (s < 1 || s > N) throw std::invalid_argument("s must lie in [1, N]");
    CodeConfig c;
    c.N = N;
    c.s = s;
    c.epsilon = epsilon;
    c.seed = seed;
    c.signs_seed = derive_seed(seed, 1);
    c.frozen = select_frozen(erasure_profile(epsilon, N), s);
    c.signs = regenerate_signs(N, c.signs_seed);
    return c;
}

Matrix materialize_Z(const CodeConfig& config) {
    validate_config(config);
    std::size_t N = config.N;
    // Sylvester doubling of the +-1 transform; the butterfly in
    // hadamard_blocks applies this same matrix without forming it.
    std::vector<double> H(N * N, 0.0);
    H[0] = 1.0;
    for (std::size_t n = 1; n < N; n <<= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double v = H[i * N + j];
                H[i * N + (j + n)] = v;
                H[(i + n) * N + j] = v;
                H[(i + n) * N + (j + n)] = -v;
            }
        }
    }
    std::vector<std::size_t> data = config.data_indices();
    Matrix Z(N, config.s);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t b = 0; b < config.s; ++b)
            Z(i, b) = H[i * N + data[b]] * config.signs[data[b]];
    return Z;
}

namespace {

EncodedBlocks encode_impl(const Matrix& A, const CodeConfig& config,
                          const Matrix* pad, std::size_t pad_index, EncodeStats* stats) {
    validate_config(config);
    if (A.rows == 0 || A.cols == 0) throw std::invalid_argument("encode: empty payload");
    if (A.rows % config.s != 0)
        throw std::invalid_argument("encode: payload rows not divisible by s");
    std::size_t brows = A.rows / config.s;
    std::size_t slot_len = brows * A.cols;
    std::vector<double> buf(config.N * slot_len, 0.0);
    std::vector<std::size_t> data = config.data_indices();
    for (std::size_t b = 0; b < config.s; ++b) {
        double sgn = config.signs[data[b]];
        const double* src = A.data.data() + b * slot_len;
        double* dst = buf.data() + data[b] * slot_len;
        for (std::size_t k = 0; k < slot_len; ++k) dst[k] = sgn * src[k];
    }
    if (pad) {
        if (pad->rows != brows || pad->cols != A.cols)
            throw std::invalid_argument("encode: pad block shape mismatch");
        double sgn = config.signs[pad_index];
        double* dst = buf.data() + pad_index * slot_len;
        for (std::size_t k = 0; k < slot_len; ++k) dst[k] = sgn * pad->data[k];
    }
    hadamard_blocks(buf.data(), config.N, slot_len, stats);
    EncodedBlocks out;
    out.blocks.resize(config.N);
    for (std::size_t i = 0; i < config.N; ++i) {
        Matrix m(brows, A.cols);
        std::copy(buf.begin() + i * slot_len, buf.begin() + (i + 1) * slot_len,
                  m.data.begin());
        out.blocks[i] = std::move(m);
    }
    return out;
}

}  // namespace

EncodedBlocks encode(const Matrix& A, const CodeConfig& config, EncodeStats* stats) {
    return encode_impl(A, config, nullptr, 0, stats);
}

std::vector<EncodedBlocks> encode_partial(const Matrix& A, std::size_t p,
                                          const CodeConfig& config_small) {
    if (p == 0) throw std::invalid_argument("encode_partial: p must be positive");
    if (A.rows % (p * config_small.s) != 0)
        throw std::invalid_argument("encode_partial: rows not divisible by p * s");
    std::vector<Matrix> bands = split_rows(A, p);
    std::vector<EncodedBlocks> out;
    out.reserve(p);
    for (const Matrix& band : bands) out.push_back(encode(band, config_small));
    return out;
}

PaddedCode add_privacy_pad(const CodeConfig& config, std::uint64_t pad_seed) {
    validate_config(config);
    if (config.frozen.empty())
        throw std::invalid_argument("add_privacy_pad: no frozen input available");
    ErasureProfile profile = erasure_profile(config.epsilon, config.N);
    // Most reliable frozen position; on ties take the later input, which the
    // sequential decoder reaches with the most accumulated knowledge.
    std::size_t best = config.frozen.front();
    for (std::size_t f : config.frozen)
        if (profile.probs[f] <= profile.probs[best]) best = f;
    PaddedCode padded;
    padded.config = config;
    padded.pad_index = best;
    padded.pad_seed = pad_seed;
    return padded;
}

CodeConfig PaddedCode::decode_config() const {
    CodeConfig c = config;
    c.frozen.erase(std::remove(c.frozen.begin(), c.frozen.end(), pad_index), c.frozen.end());
    c.s += 1;
    return c;
}

Matrix PaddedCode::pad_block(std::size_t rows, std::size_t cols) const {
    return Matrix::gaussian(rows, cols, derive_seed(pad_seed, 2));
}

EncodedBlocks encode_padded(const Matrix& A, const PaddedCode& padded) {
    std::size_t brows = A.rows / padded.config.s;
    Matrix pad = padded.pad_block(brows, A.cols);
    return encode_impl(A, padded.config, &pad, padded.pad_index, nullptr);
}

std::string config_to_json(const CodeConfig& config) {
    validate_config(config);
    nlohmann::json j;
    j["N"] = config.N;
    j["s"] = config.s;
    j["epsilon"] = config.epsilon;
    j["frozen"] = config.frozen;
    j["seed"] = config.seed;
    j["signs_seed"] = config.signs_seed;
    return j.dump(2) + "\n";
}

CodeConfig config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CodeConfig c;
    c.N = j.at("N").get<std::size_t>();
    c.s = j.at("s").get<std::size_t>();
    c.epsilon = j.at("epsilon").get<double>();
    c.frozen = j.at("frozen").get<std::vector<std::size_t>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.signs_seed = j.at("signs_seed").get<std::uint64_t>();
    c.signs = regenerate_signs(c.N, c.signs_seed);
    validate_config(c);
    return c;
}

void write_config(const std::string& path, const CodeConfig& config) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error(path + ": cannot open for writing");
    f << config_to_json(config);
}

CodeConfig read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error(path + ": cannot open");
    std::stringstream ss;
    ss << f.rdbuf();
    return config_from_json(ss.str());
}

}  // namespace polarcomp
