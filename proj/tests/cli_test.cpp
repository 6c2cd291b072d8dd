// End-to-end tests for the polarcomp command line tool. The binary path
// arrives as argv[1]; each test drives it through std::system and checks exit
// codes and produced files.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "polarcomp/code.h"
#include "polarcomp/decode.h"
#include "polarcomp/io.h"
#include "polarcomp/matrix.h"

using polarcomp::Matrix;

namespace {

std::string g_cli;

int run_cli(const std::string& args) {
    std::string cmd = "\"" + g_cli + "\" " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string fresh_dir(const std::string& name) {
    std::string dir = std::string(::testing::TempDir()) + "cli_" + name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir + "/";
}

std::string read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::size_t count_csv_rows(const std::string& path) {
    std::ifstream f(path);
    std::string line;
    std::size_t n = 0;
    std::getline(f, line);  // header
    while (std::getline(f, line))
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST(Cli, BuildWritesConfigAndManifest) {
    std::string dir = fresh_dir("build");
    std::string cfg_path = dir + "cfg.json";
    ASSERT_EQ(run_cli("build --N 8 --s 5 --epsilon 0.375 --seed 7 --out " + cfg_path), 0);

    polarcomp::CodeConfig cfg = polarcomp::read_config(cfg_path);
    EXPECT_EQ(cfg.N, 8u);
    EXPECT_EQ(cfg.s, 5u);
    EXPECT_EQ(cfg.seed, 7u);

    std::ifstream mf(cfg_path + ".manifest.json");
    ASSERT_TRUE(mf.good());
    nlohmann::json j = nlohmann::json::parse(mf);
    EXPECT_EQ(j["tool"], "polarcomp");
    EXPECT_EQ(j["argv"][0], "build");

    EXPECT_EQ(run_cli("build --N 31 --s 5 --out " + dir + "bad.json"), 2);
    EXPECT_EQ(run_cli("build --N 8 --s 9 --out " + dir + "bad.json"), 2);
}

TEST(Cli, EncodeDecodeRoundTripThroughFiles) {
    std::string dir = fresh_dir("roundtrip");
    std::string cfg_path = dir + "cfg.json";
    ASSERT_EQ(run_cli("build --N 8 --s 5 --epsilon 0.375 --seed 3 --out " + cfg_path), 0);
    polarcomp::CodeConfig cfg = polarcomp::read_config(cfg_path);

    Matrix A = Matrix::gaussian(10, 3, 31);
    Matrix x = Matrix::gaussian(3, 2, 32);
    polarcomp::write_matrix(dir + "A.pcmx", A);
    polarcomp::write_matrix(dir + "x.pcmx", x);

    ASSERT_EQ(run_cli("encode --config " + cfg_path + " --in " + dir + "A.pcmx --x " + dir +
                      "x.pcmx --out-dir " + dir + "enc"),
              0);
    ASSERT_EQ(run_cli("decode --config " + cfg_path + " --present " + dir +
                      "enc/outputs.present --out " + dir + "result.pcmx"),
              0);
    Matrix result = polarcomp::read_matrix(dir + "result.pcmx");
    EXPECT_LE(polarcomp::relative_error(result, A * x), 1e-9);

    // Every worker output block is on disk and matches the library encoding.
    auto enc = polarcomp::encode(A, cfg);
    for (std::size_t i = 0; i < 8; ++i) {
        Matrix blk = polarcomp::read_matrix(dir + "enc/output_" + std::to_string(i) + ".pcmx");
        EXPECT_LE(polarcomp::relative_error(blk, enc.blocks[i] * x), 1e-12);
    }
}

TEST(Cli, DecodeFailuresMapToExitCodes) {
    std::string dir = fresh_dir("decodefail");
    std::string cfg_path = dir + "cfg.json";
    ASSERT_EQ(run_cli("build --N 4 --s 2 --epsilon 0.5 --seed 1 --out " + cfg_path), 0);

    std::ofstream(dir + "empty.present").close();
    EXPECT_EQ(run_cli("decode --config " + cfg_path + " --present " + dir +
                      "empty.present --out " + dir + "r.pcmx"),
              3);

    EXPECT_EQ(run_cli("decode --config " + cfg_path + " --out " + dir + "r.pcmx"), 2);
    EXPECT_EQ(run_cli("frobnicate --config x"), 2);
    EXPECT_EQ(run_cli(""), 2);
}

TEST(Cli, EstimateFromASingleWorker) {
    std::string dir = fresh_dir("estimate");
    std::string cfg_path = dir + "cfg.json";
    ASSERT_EQ(run_cli("build --N 8 --s 4 --epsilon 0.375 --seed 5 --out " + cfg_path), 0);

    Matrix A = Matrix::gaussian(8, 3, 51);
    Matrix x = Matrix::gaussian(3, 1, 52);
    polarcomp::write_matrix(dir + "A.pcmx", A);
    polarcomp::write_matrix(dir + "x.pcmx", x);
    ASSERT_EQ(run_cli("encode --config " + cfg_path + " --in " + dir + "A.pcmx --x " + dir +
                      "x.pcmx --out-dir " + dir + "enc"),
              0);

    // Keep only worker 3 in the present list.
    std::ofstream one(dir + "one.present");
    one << 3 << " " << dir + "enc/output_3.pcmx" << "\n";
    one.close();
    ASSERT_EQ(run_cli("estimate --config " + cfg_path + " --present " + dir +
                      "one.present --out " + dir + "est.csv"),
              0);
    Matrix est = polarcomp::read_matrix_any(dir + "est.csv");
    EXPECT_EQ(est.rows, 8u);  // s * block_rows = 4 * 2
    EXPECT_EQ(est.cols, 1u);
    EXPECT_TRUE(polarcomp::all_finite(est));
}

TEST(Cli, PrivacyPadEncodesAndDecodesThroughFiles) {
    std::string dir = fresh_dir("pad");
    std::string cfg_path = dir + "cfg.json";
    ASSERT_EQ(run_cli("build --N 8 --s 5 --epsilon 0.375 --seed 11 --out " + cfg_path), 0);

    Matrix A = Matrix::gaussian(10, 2, 61);
    polarcomp::write_matrix(dir + "A.pcmx", A);
    ASSERT_EQ(run_cli("encode --config " + cfg_path + " --in " + dir +
                      "A.pcmx --pad-seed 9 --out-dir " + dir + "enc"),
              0);

    std::string dec_path = dir + "enc/decode_config.json";
    ASSERT_TRUE(std::filesystem::exists(dec_path));
    ASSERT_EQ(run_cli("decode --config " + dec_path + " --present " + dir +
                      "enc/blocks.present --out " + dir + "padded.pcmx"),
              0);

    // The recovered payload holds the pad block in one band and A in the rest.
    polarcomp::CodeConfig cfg = polarcomp::read_config(cfg_path);
    polarcomp::CodeConfig dec_cfg = polarcomp::read_config(dec_path);
    ASSERT_EQ(dec_cfg.s, cfg.s + 1);
    std::size_t pad_index = 0;
    for (std::size_t idx : dec_cfg.data_indices())
        if (cfg.is_frozen(idx)) pad_index = idx;

    Matrix padded = polarcomp::read_matrix(dir + "padded.pcmx");
    auto bands = polarcomp::split_rows(padded, dec_cfg.s);
    auto data = dec_cfg.data_indices();
    std::vector<Matrix> payload;
    for (std::size_t b = 0; b < dec_cfg.s; ++b)
        if (data[b] != pad_index) payload.push_back(bands[b]);
    EXPECT_LE(polarcomp::relative_error(polarcomp::vstack(payload), A), 1e-9);
}

TEST(Cli, SimCommandsValidateAndReproduce) {
    std::string dir = fresh_dir("sim");
    EXPECT_EQ(run_cli("sim runtimes --model exp:1 --N 8 --trials 0 --out " + dir + "r.csv"), 2);
    EXPECT_EQ(run_cli("sim runtimes --model weibull:1 --N 8 --trials 5 --out " + dir + "r.csv"),
              2);

    std::string args = "sim decodability --N 8,16 --rate 0.625 --epsilon 0.375 "
                       "--model shiftexp:1,1 --trials 20 --seed 4 --out ";
    ASSERT_EQ(run_cli(args + dir + "d1.csv"), 0);
    ASSERT_EQ(run_cli(args + dir + "d2.csv"), 0);
    EXPECT_EQ(read_bytes(dir + "d1.csv"), read_bytes(dir + "d2.csv"));
    EXPECT_EQ(count_csv_rows(dir + "d1.csv"), 40u);

    ASSERT_EQ(run_cli("sim mds --N 8,16 --rate 0.625 --model shiftexp:1,1 --trials 10 "
                      "--seed 4 --out " + dir + "mds.csv"),
              0);
    EXPECT_EQ(count_csv_rows(dir + "mds.csv"), 20u);
}

TEST(Cli, RerunReplaysAManifestByteForByte) {
    std::string dir = fresh_dir("rerun");
    std::string out = dir + "polarize.csv";
    ASSERT_EQ(run_cli("sim polarize --model uniform:0,1 --N 8 --trials 200 --seed 9 --out " +
                      out),
              0);
    std::string original = read_bytes(out);
    ASSERT_FALSE(original.empty());

    std::filesystem::remove(out);
    ASSERT_EQ(run_cli("rerun " + out + ".manifest.json"), 0);
    EXPECT_EQ(read_bytes(out), original);

    EXPECT_EQ(run_cli("rerun " + dir + "missing.manifest.json"), 2);
}

TEST(Cli, MatmulCheckAndStall) {
    std::string dir = fresh_dir("matmul");
    EXPECT_EQ(run_cli("app matmul2d --check --out " + dir + "m.pcmx"), 0);
    Matrix m = polarcomp::read_matrix(dir + "m.pcmx");
    EXPECT_EQ(m.rows, 8u);
    EXPECT_EQ(m.cols, 8u);

    EXPECT_EQ(run_cli("app matmul2d --keep-prob 0 --out " + dir + "m2.pcmx"), 3);
    EXPECT_EQ(run_cli("app matmul2d --keep-prob 1.5 --out " + dir + "m3.pcmx"), 2);
}

TEST(Cli, GdWritesAnIterationTrace) {
    std::string dir = fresh_dir("gd");
    std::string out = dir + "gd.csv";
    ASSERT_EQ(run_cli("app gd --rows 40 --cols 8 --iters 5 --N 8 --s 4 --epsilon 0.375 "
                      "--model shiftexp:1,1 --seed 2 --out " + out),
              0);
    EXPECT_EQ(count_csv_rows(out), 5u);

    std::ifstream f(out);
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, "iteration,cost,sim_clock,wall_clock");
}

TEST(Cli, BlackboxComparisonRuns) {
    std::string dir = fresh_dir("blackbox");
    std::string out = dir + "bb.csv";
    ASSERT_EQ(run_cli("app blackbox --d 8 --rows 12 --iters 3 --seeds 2 --step 0.01 "
                      "--delta 1e-4 --seed 6 --out " + out),
              0);
    EXPECT_EQ(count_csv_rows(out), 3u);
    EXPECT_EQ(run_cli("app blackbox --objective huber --out " + dir + "x.csv"), 2);
}

int run_main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_test <path-to-polarcomp-binary>\n");
        return 1;
    }
    g_cli = argv[1];
    return RUN_ALL_TESTS();
}

int main(int argc, char** argv) { return run_main(argc, argv); }
