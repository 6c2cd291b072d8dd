#include "polarcomp/io.h"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "matrix files are little-endian; big-endian hosts are not supported");

namespace polarcomp {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'M', 'X'};
constexpr std::uint32_t kVersion = 1;

void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

// std::stod throws out_of_range on subnormals (strtod flags them ERANGE), so
// values format_double writes would not read back. Keep strtod's best-effort
// result instead and reject only text that is not a number.
double parse_double(const std::string& text, const std::string& path) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail(path, "bad number: " + text);
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') fail(path, "bad number: " + text);
    return v;
}

}  // namespace

void write_matrix(const std::string& path, const Matrix& m) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(path, "cannot open for writing");
    std::uint64_t rows = m.rows, cols = m.cols;
    f.write(kMagic, 4);
    f.write(reinterpret_cast<const char*>(&kVersion), 4);
    f.write(reinterpret_cast<const char*>(&rows), 8);
    f.write(reinterpret_cast<const char*>(&cols), 8);
    f.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!f) fail(path, "write failed");
}

Matrix read_matrix(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(path, "cannot open");
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t rows = 0, cols = 0;
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0) fail(path, "not a PCMX matrix file");
    f.read(reinterpret_cast<char*>(&version), 4);
    if (version != kVersion) fail(path, "unsupported PCMX version");
    f.read(reinterpret_cast<char*>(&rows), 8);
    f.read(reinterpret_cast<char*>(&cols), 8);
    if (!f) fail(path, "truncated header");
    if (rows * cols > (1ULL << 32)) fail(path, "unreasonable matrix size");
    Matrix m(rows, cols);
    f.read(reinterpret_cast<char*>(m.data.data()),
           static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!f) fail(path, "truncated data");
    return m;
}

std::string format_double(double v) {
    // %.17g round-trips doubles exactly and prints integers compactly.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ofstream f(path);
    if (!f) fail(path, "cannot open for writing");
    f << m.rows << "," << m.cols << "\n";
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) f << ",";
            f << format_double(m(i, j));
        }
        f << "\n";
    }
    if (!f) fail(path, "write failed");
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(path, "cannot open");
    std::string line;
    if (!std::getline(f, line)) fail(path, "empty file");
    std::size_t rows = 0, cols = 0;
    char comma = 0;
    std::istringstream head(line);
    if (!(head >> rows >> comma >> cols) || comma != ',') fail(path, "bad rows,cols header");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(f, line)) fail(path, "missing row");
        std::istringstream ss(line);
        std::string cell;
        for (std::size_t j = 0; j < cols; ++j) {
            if (!std::getline(ss, cell, ',')) fail(path, "short row");
            m(i, j) = parse_double(cell, path);
        }
    }
    return m;
}

Matrix read_matrix_any(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(path, "cannot open");
    char magic[4] = {0, 0, 0, 0};
    f.read(magic, 4);
    f.close();
    if (std::memcmp(magic, kMagic, 4) == 0) return read_matrix(path);
    return read_matrix_csv(path);
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(path, "cannot open");
    std::vector<double> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        out.push_back(parse_double(line, path));
    }
    if (out.empty()) fail(path, "no samples");
    return out;
}

void write_samples(const std::string& path, const std::vector<double>& v) {
    std::ofstream f(path);
    if (!f) fail(path, "cannot open for writing");
    for (double x : v) f << format_double(x) << "\n";
    if (!f) fail(path, "write failed");
}

std::vector<std::pair<std::size_t, std::string>> read_present_list(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(path, "cannot open");
    std::vector<std::pair<std::size_t, std::string>> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::size_t idx;
        std::string p;
        if (!(ss >> idx >> p)) fail(path, "bad present-set line: " + line);
        out.emplace_back(idx, p);
    }
    return out;
}

void write_present_list(const std::string& path,
                        const std::vector<std::pair<std::size_t, std::string>>& entries) {
    std::ofstream f(path);
    if (!f) fail(path, "cannot open for writing");
    for (const auto& [idx, p] : entries) f << idx << " " << p << "\n";
    if (!f) fail(path, "write failed");
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path);
    if (!f) fail(path, "cannot open for writing");
    f << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) f << ",";
            f << format_double(row[j]);
        }
        f << "\n";
    }
    if (!f) fail(path, "write failed");
}

}  // namespace polarcomp
