#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "polarcomp/matrix.h"

namespace polarcomp {

// Binary matrix interchange format, bit-exact across runs:
//   magic "PCMX", u32 version (=1), u64 rows, u64 cols,
//   then rows*cols little-endian IEEE-754 doubles, row-major.
void write_matrix(const std::string& path, const Matrix& m);
Matrix read_matrix(const std::string& path);

// Text alternative for small inputs: first line "rows,cols", then one
// comma-separated line per row. read_matrix_any sniffs the magic bytes.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);
Matrix read_matrix_any(const std::string& path);

// One number per line; used for empirical run-time samples.
std::vector<double> read_samples(const std::string& path);
void write_samples(const std::string& path, const std::vector<double>& v);

// Present-set file: one "<worker_index> <output_path>" pair per line.
std::vector<std::pair<std::size_t, std::string>> read_present_list(const std::string& path);
void write_present_list(const std::string& path,
                        const std::vector<std::pair<std::size_t, std::string>>& entries);

// Plain CSV table with a header row; all simulation reports go through this
// so that identical inputs give byte-identical files.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);
std::string format_double(double v);

}  // namespace polarcomp
