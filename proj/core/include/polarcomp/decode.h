#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarcomp/code.h"
#include "polarcomp/matrix.h"

namespace polarcomp {

// Finished workers and their outputs; times are optional bookkeeping.
struct OutputSet {
    std::map<std::size_t, Matrix> outputs;
    std::map<std::size_t, double> times;

    std::vector<std::size_t> present() const;
};

// Snapshot of the decoding circuit: levels() + 1 rows of N nodes each.
// Level 0 holds the transformed inputs, the last level the worker outputs.
// known[level][i] says whether values[level][i] has been established; in a
// dry run the values grid stays empty and only the flags are tracked.
struct DecodeTrace {
    std::size_t N = 0;
    std::size_t levels = 0;
    std::vector<std::vector<char>> known;
    std::vector<std::vector<Matrix>> values;
};

class NotDecodableError : public std::runtime_error {
public:
    NotDecodableError(std::size_t stuck_input, std::size_t present_count,
                      const CodeConfig& config);
    std::size_t stuck_input;    // first data input the decoder cannot reach
    std::size_t present_count;
};

class StalledError : public std::runtime_error {
public:
    explicit StalledError(double filled_fraction);
    double filled_fraction;  // share of grid entries known when peeling stopped
};

// Dry run of the sequential decoder on flags alone: true iff every data
// input becomes known from this set of finished workers.
bool is_decodable(const std::vector<std::size_t>& present, const CodeConfig& config);

// Exact recovery of the s data blocks, stacked in data-index order (so the
// result equals the product the uncoded computation would have returned).
Matrix decode(const OutputSet& out, const CodeConfig& config);

// Same, but also exposes the decoding circuit for inspection.
Matrix decode(const OutputSet& out, const CodeConfig& config, DecodeTrace& trace);

// Two-dimensional peeling decoder. grid is N1 x N2; an empty Matrix marks a
// missing worker product. Rows are codewords of config_cols, columns are
// codewords of config_rows. Throws StalledError when neither a row nor a
// column sweep can fill anything while entries are still missing.
Matrix decode_2d(const std::vector<std::vector<Matrix>>& grid,
                 const CodeConfig& config_rows, const CodeConfig& config_cols);

}  // namespace polarcomp
