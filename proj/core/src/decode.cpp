#include "polarcomp/decode.h"

#include <algorithm>
#include <sstream>

namespace polarcomp {

std::vector<std::size_t> OutputSet::present() const {
    std::vector<std::size_t> out;
    out.reserve(outputs.size());
    for (const auto& [idx, m] : outputs) out.push_back(idx);
    return out;
}

NotDecodableError::NotDecodableError(std::size_t stuck, std::size_t count,
                                     const CodeConfig& config)
    : std::runtime_error([&] {
          std::ostringstream ss;
          ss << "output set of size " << count << " cannot decode the N=" << config.N
             << " s=" << config.s << " code: recovery stops at input " << stuck;
          return ss.str();
      }()),
      stuck_input(stuck),
      present_count(count) {}

StalledError::StalledError(double fraction)
    : std::runtime_error([&] {
          std::ostringstream ss;
          ss << "2d peeling made no progress with " << fraction * 100.0
             << "% of the grid filled";
          return ss.str();
      }()),
      filled_fraction(fraction) {}

namespace {

// Sequential recovery over the butterfly circuit. Stage j pairs node i with
// i XOR 2^j; the forward direction maps level j to level j+1 as
//   up' = up + low,  low' = up - low.
// Recovery inverts this: the upper input needs both stage outputs, the lower
// input needs the (already recovered) upper input plus either output. Frozen
// inputs are known zero up front. The same walk runs with or without values;
// flags alone answer decodability.
class Sequential {
public:
    Sequential(const CodeConfig& config, DecodeTrace& trace, bool with_values)
        : cfg_(config), t_(trace), with_values_(with_values) {
        levels_ = cfg_.levels();
        t_.N = cfg_.N;
        t_.levels = levels_;
        t_.known.assign(levels_ + 1, std::vector<char>(cfg_.N, 0));
        if (with_values_) t_.values.assign(levels_ + 1, std::vector<Matrix>(cfg_.N));
    }

    void mark_output(std::size_t i) { t_.known[levels_][i] = 1; }

    void set_output(std::size_t i, Matrix m) {
        t_.known[levels_][i] = 1;
        t_.values[levels_][i] = std::move(m);
    }

    void set_frozen_inputs(std::size_t brows, std::size_t bcols) {
        for (std::size_t f : cfg_.frozen) {
            t_.known[0][f] = 1;
            if (with_values_) t_.values[0][f] = Matrix::zero(brows, bcols);
        }
    }

    // Decodes inputs in index order; returns N on success, otherwise the
    // first input that cannot be recovered.
    std::size_t run() {
        for (std::size_t i = 0; i < cfg_.N; ++i) {
            if (!resolve(0, i)) return i;
            propagate_after(i);
        }
        return cfg_.N;
    }

private:
    bool resolve(std::size_t level, std::size_t idx) {
        if (t_.known[level][idx]) return true;
        if (level == levels_) return false;  // missing worker output
        std::size_t h = std::size_t{1} << level;
        if ((idx & h) == 0) {
            if (!resolve(level + 1, idx)) return false;
            if (!resolve(level + 1, idx + h)) return false;
            if (with_values_) {
                Matrix v = t_.values[level + 1][idx] + t_.values[level + 1][idx + h];
                v *= 0.5;
                t_.values[level][idx] = std::move(v);
            }
        } else {
            std::size_t up = idx - h;
            // The sibling input belongs to an earlier dyadic block; if that
            // block has been decoded, propagation has already filled it.
            if (!t_.known[level][up]) return false;
            if (resolve(level + 1, up)) {
                if (with_values_)
                    t_.values[level][idx] = t_.values[level + 1][up] - t_.values[level][up];
            } else if (resolve(level + 1, idx)) {
                if (with_values_)
                    t_.values[level][idx] = t_.values[level][up] - t_.values[level + 1][idx];
            } else {
                return false;
            }
        }
        t_.known[level][idx] = 1;
        return true;
    }

    // After input i is recovered, every dyadic block it completes can be
    // pushed forward one level: both stage inputs of each pair inside the
    // block are known, so both stage outputs follow. This fills exactly the
    // nodes a full left-to-right recompute of the decoded prefix would fill,
    // each one once.
    void propagate_after(std::size_t i) {
        for (std::size_t j = 0; j < levels_; ++j) {
            std::size_t span = std::size_t{2} << j;
            if ((i + 1) % span != 0) break;
            std::size_t start = i + 1 - span;
            std::size_t h = std::size_t{1} << j;
            for (std::size_t up = start; up < start + h; ++up) {
                std::size_t low = up + h;
                if (!t_.known[j + 1][up]) {
                    if (with_values_)
                        t_.values[j + 1][up] = t_.values[j][up] + t_.values[j][low];
                    t_.known[j + 1][up] = 1;
                }
                if (!t_.known[j + 1][low]) {
                    if (with_values_)
                        t_.values[j + 1][low] = t_.values[j][up] - t_.values[j][low];
                    t_.known[j + 1][low] = 1;
                }
            }
        }
    }

    const CodeConfig& cfg_;
    DecodeTrace& t_;
    bool with_values_;
    std::size_t levels_ = 0;
};

std::vector<std::size_t> checked_present(const std::vector<std::size_t>& present,
                                         const CodeConfig& config) {
    std::vector<std::size_t> p = present;
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (!p.empty() && p.back() >= config.N)
        throw std::invalid_argument("present index out of range");
    return p;
}

}  // namespace

bool is_decodable(const std::vector<std::size_t>& present, const CodeConfig& config) {
    std::vector<std::size_t> p = checked_present(present, config);
    DecodeTrace trace;
    Sequential seq(config, trace, /*with_values=*/false);
    for (std::size_t i : p) seq.mark_output(i);
    seq.set_frozen_inputs(0, 0);
    return seq.run() == config.N;
}

Matrix decode(const OutputSet& out, const CodeConfig& config, DecodeTrace& trace) {
    std::size_t brows = 0, bcols = 0;
    for (const auto& [idx, m] : out.outputs) {
        if (idx >= config.N) throw std::invalid_argument("worker index out of range");
        if (m.empty()) throw std::invalid_argument("empty output block");
        if (brows == 0) {
            brows = m.rows;
            bcols = m.cols;
        } else if (m.rows != brows || m.cols != bcols) {
            throw std::invalid_argument("worker output blocks disagree in shape");
        }
    }
    if (out.outputs.empty())
        throw NotDecodableError(config.data_indices().front(), 0, config);

    Sequential seq(config, trace, /*with_values=*/true);
    for (const auto& [idx, m] : out.outputs) seq.set_output(idx, m);
    seq.set_frozen_inputs(brows, bcols);
    std::size_t stop = seq.run();
    if (stop != config.N) throw NotDecodableError(stop, out.outputs.size(), config);

    std::vector<Matrix> blocks;
    blocks.reserve(config.s);
    for (std::size_t idx : config.data_indices()) {
        Matrix b = trace.values[0][idx];
        b *= config.signs[idx];  // signs are +-1, so this is the inverse
        blocks.push_back(std::move(b));
    }
    return vstack(blocks);
}

Matrix decode(const OutputSet& out, const CodeConfig& config) {
    DecodeTrace trace;
    return decode(out, config, trace);
}

namespace {

struct GridShape {
    std::size_t brows = 0;
    std::size_t bcols = 0;
    std::size_t filled = 0;
};

GridShape grid_shape(const std::vector<std::vector<Matrix>>& grid, std::size_t N1,
                     std::size_t N2) {
    GridShape s;
    for (std::size_t i = 0; i < N1; ++i) {
        if (grid[i].size() != N2) throw std::invalid_argument("grid has ragged rows");
        for (std::size_t j = 0; j < N2; ++j) {
            const Matrix& m = grid[i][j];
            if (m.empty()) continue;
            if (s.filled == 0) {
                s.brows = m.rows;
                s.bcols = m.cols;
            } else if (m.rows != s.brows || m.cols != s.bcols) {
                throw std::invalid_argument("grid blocks disagree in shape");
            }
            ++s.filled;
        }
    }
    return s;
}

}  // namespace

Matrix decode_2d(const std::vector<std::vector<Matrix>>& grid,
                 const CodeConfig& config_rows, const CodeConfig& config_cols) {
    std::size_t N1 = config_rows.N, N2 = config_cols.N;
    if (grid.size() != N1) throw std::invalid_argument("grid row count != N1");
    GridShape shape = grid_shape(grid, N1, N2);
    std::vector<std::vector<Matrix>> P = grid;

    auto missing_entries = [&] {
        std::size_t missing = 0;
        for (std::size_t i = 0; i < N1; ++i)
            for (std::size_t j = 0; j < N2; ++j)
                if (P[i][j].empty()) ++missing;
        return missing;
    };

    // Peeling: any line that is decodable but incomplete gets decoded and
    // re-encoded to refill its missing entries. Present entries are never
    // overwritten.
    std::size_t missing = missing_entries();
    while (missing > 0) {
        bool progress = false;
        for (std::size_t i = 0; i < N1; ++i) {
            std::vector<std::size_t> have;
            for (std::size_t j = 0; j < N2; ++j)
                if (!P[i][j].empty()) have.push_back(j);
            if (have.size() == N2 || !is_decodable(have, config_cols)) continue;
            OutputSet line;
            for (std::size_t j : have) line.outputs[j] = P[i][j];
            EncodedBlocks refill = encode(decode(line, config_cols), config_cols);
            for (std::size_t j = 0; j < N2; ++j)
                if (P[i][j].empty()) {
                    P[i][j] = std::move(refill.blocks[j]);
                    --missing;
                }
            progress = true;
        }
        for (std::size_t j = 0; j < N2 && missing > 0; ++j) {
            std::vector<std::size_t> have;
            for (std::size_t i = 0; i < N1; ++i)
                if (!P[i][j].empty()) have.push_back(i);
            if (have.size() == N1 || !is_decodable(have, config_rows)) continue;
            OutputSet line;
            for (std::size_t i : have) line.outputs[i] = P[i][j];
            EncodedBlocks refill = encode(decode(line, config_rows), config_rows);
            for (std::size_t i = 0; i < N1; ++i)
                if (P[i][j].empty()) {
                    P[i][j] = std::move(refill.blocks[i]);
                    --missing;
                }
            progress = true;
        }
        if (!progress && missing > 0) {
            double total = static_cast<double>(N1) * static_cast<double>(N2);
            throw StalledError((total - static_cast<double>(missing)) / total);
        }
    }

    // Full grid: decode every row, then stitch the recovered row payloads
    // into columns and decode those. Frozen positions drop out on both axes.
    std::size_t brows = shape.brows, bcols = shape.bcols;
    std::vector<Matrix> row_payload(N1);
    for (std::size_t i = 0; i < N1; ++i) {
        OutputSet line;
        for (std::size_t j = 0; j < N2; ++j) line.outputs[j] = P[i][j];
        row_payload[i] = decode(line, config_cols);  // (s2 * brows) x bcols
    }
    Matrix result(config_rows.s * brows, config_cols.s * bcols);
    for (std::size_t l = 0; l < config_cols.s; ++l) {
        OutputSet column;
        for (std::size_t i = 0; i < N1; ++i) {
            Matrix piece(brows, bcols);
            for (std::size_t r = 0; r < brows; ++r)
                std::copy(row_payload[i].row_ptr(l * brows + r),
                          row_payload[i].row_ptr(l * brows + r) + bcols, piece.row_ptr(r));
            column.outputs[i] = std::move(piece);
        }
        Matrix recovered = decode(column, config_rows);  // (s1 * brows) x bcols
        for (std::size_t r = 0; r < recovered.rows; ++r)
            std::copy(recovered.row_ptr(r), recovered.row_ptr(r) + bcols,
                      result.row_ptr(r) + l * bcols);
    }
    return result;
}

}  // namespace polarcomp
