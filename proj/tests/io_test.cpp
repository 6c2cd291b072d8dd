#include "polarcomp/io.h"

#include <gtest/gtest.h>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarcomp/matrix.h"

using polarcomp::Matrix;

namespace {

std::string temp_path(const std::string& name) {
    return std::string(::testing::TempDir()) + name;
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool bit_identical(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols &&
           std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0;
}

Matrix awkward_matrix() {
    Matrix m(2, 3);
    m(0, 0) = 1.0 / 3.0;
    m(0, 1) = -0.0;
    m(0, 2) = 1e300;
    m(1, 0) = 5e-324;  // smallest denormal
    m(1, 1) = -123456789.123456789;
    m(1, 2) = 0.1 + 0.2;
    return m;
}

}  // namespace

TEST(MatrixBinary, RoundTripIsBitExact) {
    Matrix m = awkward_matrix();
    std::string path = temp_path("m.pcmx");
    polarcomp::write_matrix(path, m);
    EXPECT_TRUE(bit_identical(polarcomp::read_matrix(path), m));

    Matrix big = Matrix::gaussian(37, 19, 7);
    polarcomp::write_matrix(path, big);
    EXPECT_TRUE(bit_identical(polarcomp::read_matrix(path), big));
}

TEST(MatrixBinary, RejectsCorruptFiles) {
    std::string path = temp_path("corrupt.pcmx");

    EXPECT_THROW(polarcomp::read_matrix(temp_path("missing.pcmx")), std::runtime_error);

    write_bytes(path, "this is not a matrix");
    EXPECT_THROW(polarcomp::read_matrix(path), std::runtime_error);

    // Right magic, unsupported version.
    std::string vbytes = "PCMX";
    std::uint32_t v2 = 2;
    vbytes.append(reinterpret_cast<const char*>(&v2), 4);
    vbytes.append(16, '\0');
    write_bytes(path, vbytes);
    EXPECT_THROW(polarcomp::read_matrix(path), std::runtime_error);

    // Header promises more doubles than the file holds.
    polarcomp::write_matrix(path, Matrix::gaussian(4, 4, 1));
    std::string whole = read_bytes(path);
    write_bytes(path, whole.substr(0, whole.size() - 24));
    EXPECT_THROW(polarcomp::read_matrix(path), std::runtime_error);

    // Header cut short.
    write_bytes(path, whole.substr(0, 10));
    EXPECT_THROW(polarcomp::read_matrix(path), std::runtime_error);
}

TEST(MatrixCsv, RoundTripRecoversEveryValue) {
    Matrix m = awkward_matrix();
    std::string path = temp_path("m.csv");
    polarcomp::write_matrix_csv(path, m);
    Matrix back = polarcomp::read_matrix_csv(path);
    EXPECT_TRUE(bit_identical(back, m));  // %.17g round-trips doubles

    EXPECT_THROW(polarcomp::read_matrix_csv(temp_path("missing.csv")), std::runtime_error);
    write_bytes(path, "");
    EXPECT_THROW(polarcomp::read_matrix_csv(path), std::runtime_error);
    write_bytes(path, "2,2\n1,2\n");
    EXPECT_THROW(polarcomp::read_matrix_csv(path), std::runtime_error);
    write_bytes(path, "2,2\n1,2\n3\n");
    EXPECT_THROW(polarcomp::read_matrix_csv(path), std::runtime_error);
}

TEST(MatrixAny, SniffsTheFormatFromMagicBytes) {
    Matrix m = Matrix::gaussian(5, 4, 11);
    std::string bin = temp_path("any.pcmx");
    std::string csv = temp_path("any.csv");
    polarcomp::write_matrix(bin, m);
    polarcomp::write_matrix_csv(csv, m);
    EXPECT_TRUE(bit_identical(polarcomp::read_matrix_any(bin), m));
    EXPECT_TRUE(bit_identical(polarcomp::read_matrix_any(csv), m));
}

TEST(Samples, RoundTripAndValidation) {
    std::string path = temp_path("samples.txt");
    std::vector<double> v{0.25, 1.0 / 3.0, 42.0, 1e-12};
    polarcomp::write_samples(path, v);
    EXPECT_EQ(polarcomp::read_samples(path), v);

    write_bytes(path, "\n\n");
    EXPECT_THROW(polarcomp::read_samples(path), std::runtime_error);
    EXPECT_THROW(polarcomp::read_samples(temp_path("missing.txt")), std::runtime_error);
}

TEST(PresentList, RoundTripAndValidation) {
    std::string path = temp_path("present.txt");
    std::vector<std::pair<std::size_t, std::string>> entries{
        {0, "/tmp/out_0.pcmx"}, {3, "/tmp/out_3.pcmx"}, {7, "rel/path.csv"}};
    polarcomp::write_present_list(path, entries);
    EXPECT_EQ(polarcomp::read_present_list(path), entries);

    write_bytes(path, "");
    EXPECT_TRUE(polarcomp::read_present_list(path).empty());
    write_bytes(path, "not-an-index /some/path\n");
    EXPECT_THROW(polarcomp::read_present_list(path), std::runtime_error);
}

TEST(CsvTable, ByteIdenticalAcrossRuns) {
    std::vector<std::vector<double>> rows{{1.0, 0.5}, {2.0, 1.0 / 3.0}, {3.0, 0.1 + 0.2}};
    std::string p1 = temp_path("t1.csv");
    std::string p2 = temp_path("t2.csv");
    polarcomp::write_csv(p1, "step,value", rows);
    polarcomp::write_csv(p2, "step,value", rows);
    std::string b1 = read_bytes(p1);
    EXPECT_EQ(b1, read_bytes(p2));
    EXPECT_EQ(b1.substr(0, 11), "step,value\n");
}

TEST(FormatDouble, CompactAndRoundTripping) {
    EXPECT_EQ(polarcomp::format_double(42.0), "42");
    EXPECT_EQ(polarcomp::format_double(0.5), "0.5");
    EXPECT_EQ(polarcomp::format_double(0.0), "0");
    // strtod rather than std::stod: stod throws out_of_range on the subnormal.
    for (double v : {1.0 / 3.0, 0.1 + 0.2, 1e300, 5e-324, -7.25}) {
        EXPECT_EQ(std::strtod(polarcomp::format_double(v).c_str(), nullptr), v);
    }
}
