// polarcomp: command-line driver for the coded-computation library.
//
// Subcommands map one-to-one onto the library modules: `build` writes a code
// config, `encode`/`decode`/`estimate` move matrices through the code,
// `sim ...` runs the straggler simulations, `app ...` runs the end-to-end
// applications. Every command writes a manifest next to its primary output;
// `rerun <manifest>` replays the recorded invocation.
//
// Exit codes: 0 success, 2 usage error, 3 not decodable, 4 numerical failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polarcomp/apps.h"
#include "polarcomp/code.h"
#include "polarcomp/decode.h"
#include "polarcomp/io.h"
#include "polarcomp/kernel.h"
#include "polarcomp/matrix.h"
#include "polarcomp/rng.h"
#include "polarcomp/sim.h"
#include "polarcomp/sketch.h"

namespace {

using polarcomp::CodeConfig;
using polarcomp::Matrix;
using polarcomp::OutputSet;
using polarcomp::RunTimeModel;

int run_cli(const std::vector<std::string>& args);

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_matrix_auto(const std::string& path, const Matrix& m) {
    if (ends_with(path, ".csv"))
        polarcomp::write_matrix_csv(path, m);
    else
        polarcomp::write_matrix(path, m);
}

// The manifest echoes the fully resolved argument vector so that
// `polarcomp rerun <manifest>` reproduces the outputs byte for byte.
void write_manifest(const std::string& path, const std::vector<std::string>& argv) {
    nlohmann::json j;
    j["tool"] = "polarcomp";
    j["argv"] = argv;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

std::string fmt(double v) { return polarcomp::format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

OutputSet load_present(const std::string& path) {
    OutputSet set;
    for (const auto& [index, file] : polarcomp::read_present_list(path))
        set.outputs[index] = polarcomp::read_matrix_any(file);
    return set;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty()) throw std::invalid_argument("empty entry in list: " + text);
        out.push_back(static_cast<std::size_t>(std::stoull(item)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("median of empty sample");
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- build ----------------------------------------------------------------

void add_cmd_build(CLI::App& app) {
    auto* cmd = app.add_subcommand("build", "Construct a code config and write it as JSON");
    auto N = std::make_shared<std::size_t>(0);
    auto s = std::make_shared<std::size_t>(0);
    auto epsilon = std::make_shared<double>(0.5);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--N", *N, "Number of workers (power of 2)")->required();
    cmd->add_option("--s", *s, "Number of data inputs")->required();
    cmd->add_option("--epsilon", *epsilon, "Design erasure probability");
    cmd->add_option("--seed", *seed, "Master seed");
    cmd->add_option("--out", *out, "Output config path")->required();
    cmd->callback([=]() {
        CodeConfig cfg = polarcomp::build_code(*N, *s, *epsilon, *seed);
        polarcomp::write_config(*out, cfg);
        write_manifest(*out + ".manifest.json",
                       {"build", "--N", fmt(*N), "--s", fmt(*s), "--epsilon", fmt(*epsilon),
                        "--seed", fmt(*seed), "--out", *out});
        std::printf("wrote %s (N=%zu s=%zu frozen=%zu)\n", out->c_str(), cfg.N, cfg.s,
                    cfg.frozen.size());
    });
}

// ---- encode ---------------------------------------------------------------

void add_cmd_encode(CLI::App& app) {
    auto* cmd = app.add_subcommand("encode", "Encode a matrix into per-worker blocks");
    auto config = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>();
    auto x = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto pad_seed = std::make_shared<std::int64_t>(-1);
    cmd->add_option("--config", *config, "Code config JSON")->required();
    cmd->add_option("--in", *in, "Input matrix (rows divisible by s)")->required();
    cmd->add_option("--x", *x, "Optional right factor; emits worker outputs block_i * x");
    cmd->add_option("--out-dir", *out_dir, "Directory for blocks and the present list")->required();
    cmd->add_option("--pad-seed", *pad_seed,
                    "Add a random privacy pad on a frozen input (also writes decode_config.json)");
    cmd->callback([=]() {
        CodeConfig cfg = polarcomp::read_config(*config);
        Matrix A = polarcomp::read_matrix_any(*in);
        std::filesystem::create_directories(*out_dir);

        polarcomp::EncodedBlocks enc;
        std::vector<std::string> argv = {"encode", "--config", *config, "--in", *in,
                                         "--out-dir", *out_dir};
        if (*pad_seed >= 0) {
            auto padded = polarcomp::add_privacy_pad(cfg, static_cast<std::uint64_t>(*pad_seed));
            enc = polarcomp::encode_padded(A, padded);
            polarcomp::write_config(*out_dir + "/decode_config.json", padded.decode_config());
            argv.insert(argv.end(), {"--pad-seed", std::to_string(*pad_seed)});
        } else {
            enc = polarcomp::encode(A, cfg);
        }

        bool have_x = !x->empty();
        Matrix X;
        if (have_x) {
            X = polarcomp::read_matrix_any(*x);
            argv.insert(argv.end(), {"--x", *x});
        }
        std::string stem = have_x ? "output_" : "block_";
        std::vector<std::pair<std::size_t, std::string>> present;
        for (std::size_t i = 0; i < enc.blocks.size(); ++i) {
            std::string path = *out_dir + "/" + stem + std::to_string(i) + ".pcmx";
            polarcomp::write_matrix(path, have_x ? enc.blocks[i] * X : enc.blocks[i]);
            present.emplace_back(i, path);
        }
        std::string list = *out_dir + "/" + (have_x ? "outputs.present" : "blocks.present");
        polarcomp::write_present_list(list, present);
        write_manifest(*out_dir + "/manifest.json", argv);
        std::printf("encoded %zu %s of %zux%zu into %s\n", enc.blocks.size(),
                    have_x ? "worker outputs" : "blocks", enc.blocks[0].rows,
                    have_x ? X.cols : enc.blocks[0].cols, out_dir->c_str());
    });
}

// ---- decode / estimate ----------------------------------------------------

void add_cmd_decode(CLI::App& app) {
    auto* cmd = app.add_subcommand("decode", "Recover the data blocks from finished workers");
    auto config = std::make_shared<std::string>();
    auto present = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--config", *config, "Code config JSON")->required();
    cmd->add_option("--present", *present, "Present-set file: '<index> <path>' per line")->required();
    cmd->add_option("--out", *out, "Output matrix path (.pcmx or .csv)")->required();
    cmd->callback([=]() {
        CodeConfig cfg = polarcomp::read_config(*config);
        OutputSet set = load_present(*present);
        Matrix result = polarcomp::decode(set, cfg);
        if (!polarcomp::all_finite(result))
            throw polarcomp::NumericalError("decode produced non-finite values");
        write_matrix_auto(*out, result);
        write_manifest(*out + ".manifest.json", {"decode", "--config", *config, "--present",
                                                 *present, "--out", *out});
        std::printf("decoded %zux%zu from %zu of %zu outputs\n", result.rows, result.cols,
                    set.outputs.size(), cfg.N);
    });
}

void add_cmd_estimate(CLI::App& app) {
    auto* cmd = app.add_subcommand("estimate", "Unbiased anytime estimate from any nonempty set");
    auto config = std::make_shared<std::string>();
    auto present = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--config", *config, "Code config JSON")->required();
    cmd->add_option("--present", *present, "Present-set file: '<index> <path>' per line")->required();
    cmd->add_option("--out", *out, "Output matrix path (.pcmx or .csv)")->required();
    cmd->callback([=]() {
        CodeConfig cfg = polarcomp::read_config(*config);
        OutputSet set = load_present(*present);
        auto est = polarcomp::anytime_estimate(set, cfg);
        if (!polarcomp::all_finite(est.value))
            throw polarcomp::NumericalError("estimate produced non-finite values");
        write_matrix_auto(*out, est.value);
        write_manifest(*out + ".manifest.json", {"estimate", "--config", *config, "--present",
                                                 *present, "--out", *out});
        std::printf("estimated %zux%zu from m=%zu of %zu outputs\n", est.value.rows,
                    est.value.cols, est.m, est.N);
    });
}

// ---- sim ------------------------------------------------------------------

void add_cmd_sim(CLI::App& app) {
    auto* sim = app.add_subcommand("sim", "Straggler simulations");
    sim->require_subcommand(1);

    {
        auto* cmd = sim->add_subcommand("runtimes", "Empirical CDF of sampled worker run times");
        auto model = std::make_shared<std::string>("uniform");
        auto N = std::make_shared<std::size_t>(4);
        auto trials = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        auto hist_out = std::make_shared<std::string>();
        auto bins = std::make_shared<std::size_t>(50);
        cmd->add_option("--model", *model, "uniform[:a,b] | exp[:rate] | shiftexp[:shift,rate] | empirical:path");
        cmd->add_option("--N", *N, "Workers per trial");
        cmd->add_option("--trials", *trials, "Number of trials")->required();
        cmd->add_option("--seed", *seed, "Seed");
        cmd->add_option("--out", *out, "CDF CSV path")->required();
        cmd->add_option("--hist-out", *hist_out, "Optional histogram CSV path");
        cmd->add_option("--bins", *bins, "Histogram bins");
        cmd->callback([=]() {
            if (*trials == 0) throw std::invalid_argument("--trials must be positive");
            RunTimeModel m = RunTimeModel::parse(*model, *seed);
            std::vector<double> all;
            all.reserve(*trials * *N);
            for (std::size_t t = 0; t < *trials; ++t)
                for (double v : polarcomp::sample_times(m, *N, t)) all.push_back(v);
            polarcomp::write_cdf_csv(*out, all);
            std::vector<std::string> argv = {"sim", "runtimes", "--model", *model,
                                             "--N", fmt(*N), "--trials", fmt(*trials),
                                             "--seed", fmt(*seed), "--out", *out};
            if (!hist_out->empty()) {
                polarcomp::write_histogram_csv(*hist_out, all, *bins);
                argv.insert(argv.end(), {"--hist-out", *hist_out, "--bins", fmt(*bins)});
            }
            write_manifest(*out + ".manifest.json", argv);
            std::printf("wrote %s (%zu samples)\n", out->c_str(), all.size());
        });
    }

    {
        auto* cmd = sim->add_subcommand("polarize",
                                        "Per-output CDFs of the pairwise max/min combined run times");
        auto model = std::make_shared<std::string>("uniform");
        auto N = std::make_shared<std::size_t>(4);
        auto trials = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--model", *model, "Run-time model");
        cmd->add_option("--N", *N, "Workers per trial (power of 2)");
        cmd->add_option("--trials", *trials, "Number of trials")->required();
        cmd->add_option("--seed", *seed, "Seed");
        cmd->add_option("--out", *out, "Long CSV: output,value,cum_fraction")->required();
        cmd->callback([=]() {
            if (*trials == 0) throw std::invalid_argument("--trials must be positive");
            RunTimeModel m = RunTimeModel::parse(*model, *seed);
            std::vector<std::vector<double>> per_output(*N);
            for (auto& v : per_output) v.reserve(*trials);
            for (std::size_t t = 0; t < *trials; ++t) {
                auto polarized = polarcomp::polarized_times(polarcomp::sample_times(m, *N, t));
                for (std::size_t i = 0; i < *N; ++i) per_output[i].push_back(polarized[i]);
            }
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < *N; ++i) {
                auto& v = per_output[i];
                std::sort(v.begin(), v.end());
                std::size_t step = std::max<std::size_t>(1, v.size() / 2000);
                for (std::size_t k = 0; k < v.size(); k += step)
                    rows.push_back({static_cast<double>(i), v[k],
                                    static_cast<double>(k + 1) / static_cast<double>(v.size())});
                rows.push_back({static_cast<double>(i), v.back(), 1.0});
            }
            polarcomp::write_csv(*out, "output,value,cum_fraction", rows);
            write_manifest(*out + ".manifest.json",
                           {"sim", "polarize", "--model", *model, "--N", fmt(*N),
                            "--trials", fmt(*trials), "--seed", fmt(*seed), "--out", *out});
            std::printf("wrote %s (%zu outputs x %zu trials)\n", out->c_str(), *N, *trials);
        });
    }

    {
        auto* cmd = sim->add_subcommand("decodability",
                                        "Time until the arrived outputs become decodable");
        auto N_list = std::make_shared<std::string>();
        auto rate = std::make_shared<double>(0.75);
        auto epsilon = std::make_shared<double>(0.375);
        auto model = std::make_shared<std::string>("shiftexp:1,1");
        auto trials = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N_list, "Comma list of worker counts, e.g. 8,64,512")->required();
        cmd->add_option("--rate", *rate, "Data fraction s/N");
        cmd->add_option("--epsilon", *epsilon, "Design erasure probability");
        cmd->add_option("--model", *model, "Run-time model");
        cmd->add_option("--trials", *trials, "Trials per N")->required();
        cmd->add_option("--seed", *seed, "Seed");
        cmd->add_option("--out", *out, "CSV: N,trial,decode_time,set_size")->required();
        cmd->callback([=]() {
            if (*trials == 0) throw std::invalid_argument("--trials must be positive");
            std::vector<std::vector<double>> rows;
            for (std::size_t N : parse_size_list(*N_list)) {
                auto s = static_cast<std::size_t>(std::llround(*rate * static_cast<double>(N)));
                if (s == 0 || s > N) throw std::invalid_argument("--rate gives invalid s");
                CodeConfig cfg = polarcomp::build_code(N, s, *epsilon, *seed);
                RunTimeModel m = RunTimeModel::parse(*model, polarcomp::derive_seed(*seed, N));
                auto report = polarcomp::decodability_time(m, cfg, *trials);
                for (std::size_t t = 0; t < *trials; ++t)
                    rows.push_back({static_cast<double>(N), static_cast<double>(t),
                                    report.decode_times[t],
                                    static_cast<double>(report.set_sizes[t])});
                std::printf("N=%zu s=%zu mean=%s var=%s p50=%s\n", N, s,
                            fmt(report.mean).c_str(), fmt(report.variance).c_str(),
                            fmt(report.quantiles[2]).c_str());
            }
            polarcomp::write_csv(*out, "N,trial,decode_time,set_size", rows);
            write_manifest(*out + ".manifest.json",
                           {"sim", "decodability", "--N", *N_list, "--rate", fmt(*rate),
                            "--epsilon", fmt(*epsilon), "--model", *model, "--trials",
                            fmt(*trials), "--seed", fmt(*seed), "--out", *out});
        });
    }

    {
        auto* cmd = sim->add_subcommand("mds", "Recovery-threshold baseline: k-th fastest worker");
        auto N_list = std::make_shared<std::string>();
        auto rate = std::make_shared<double>(0.75);
        auto model = std::make_shared<std::string>("shiftexp:1,1");
        auto trials = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N_list, "Comma list of worker counts")->required();
        cmd->add_option("--rate", *rate, "Data fraction k/N");
        cmd->add_option("--model", *model, "Run-time model");
        cmd->add_option("--trials", *trials, "Trials per N")->required();
        cmd->add_option("--seed", *seed, "Seed");
        cmd->add_option("--out", *out, "CSV: N,trial,decode_time")->required();
        cmd->callback([=]() {
            if (*trials == 0) throw std::invalid_argument("--trials must be positive");
            std::vector<std::vector<double>> rows;
            for (std::size_t N : parse_size_list(*N_list)) {
                auto k = static_cast<std::size_t>(std::llround(*rate * static_cast<double>(N)));
                if (k == 0 || k > N) throw std::invalid_argument("--rate gives invalid k");
                RunTimeModel m = RunTimeModel::parse(*model, polarcomp::derive_seed(*seed, N));
                auto report = polarcomp::mds_decodability_time(m, N, k, *trials);
                for (std::size_t t = 0; t < *trials; ++t)
                    rows.push_back({static_cast<double>(N), static_cast<double>(t),
                                    report.decode_times[t]});
                std::printf("N=%zu k=%zu mean=%s var=%s\n", N, k, fmt(report.mean).c_str(),
                            fmt(report.variance).c_str());
            }
            polarcomp::write_csv(*out, "N,trial,decode_time", rows);
            write_manifest(*out + ".manifest.json",
                           {"sim", "mds", "--N", *N_list, "--rate", fmt(*rate), "--model",
                            *model, "--trials", fmt(*trials), "--seed", fmt(*seed), "--out", *out});
        });
    }
}

// ---- app ------------------------------------------------------------------

void add_cmd_app(CLI::App& app) {
    auto* grp = app.add_subcommand("app", "End-to-end applications");
    grp->require_subcommand(1);

    {
        auto* cmd = grp->add_subcommand("gd", "Coded gradient descent on synthetic least squares");
        auto rows = std::make_shared<std::size_t>(256);
        auto cols = std::make_shared<std::size_t>(32);
        auto iters = std::make_shared<std::size_t>(50);
        auto mu = std::make_shared<double>(0.0);
        auto N = std::make_shared<std::size_t>(32);
        auto s = std::make_shared<std::size_t>(24);
        auto epsilon = std::make_shared<double>(0.375);
        auto model = std::make_shared<std::string>("shiftexp:1,1");
        auto seed = std::make_shared<std::uint64_t>(1);
        auto threads = std::make_shared<std::size_t>(0);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--rows", *rows, "Rows of A");
        cmd->add_option("--cols", *cols, "Columns of A (divisible by s)");
        cmd->add_option("--iters", *iters, "Iterations");
        cmd->add_option("--mu", *mu, "Step size; <= 0 picks 1/lambda_max");
        cmd->add_option("--N", *N, "Workers");
        cmd->add_option("--s", *s, "Data inputs");
        cmd->add_option("--epsilon", *epsilon, "Design erasure probability");
        cmd->add_option("--model", *model, "Run-time model (simulated mode)");
        cmd->add_option("--seed", *seed, "Seed");
        cmd->add_option("--threads", *threads, "Run on a real thread pool instead of the model");
        cmd->add_option("--out", *out, "CSV: iteration,cost,sim_clock,wall_clock")->required();
        cmd->callback([=]() {
            if (*iters == 0) throw std::invalid_argument("--iters must be positive");
            Matrix A = Matrix::gaussian(*rows, *cols, polarcomp::derive_seed(*seed, 1));
            Matrix xt = Matrix::gaussian(*cols, 1, polarcomp::derive_seed(*seed, 2));
            Matrix y = A * xt;
            CodeConfig cfg = polarcomp::build_code(*N, *s, *epsilon, *seed);
            polarcomp::GDState state;
            if (*threads > 0) {
                state = polarcomp::coded_gd_least_squares(A, y, *mu, *iters, cfg, *threads);
            } else {
                RunTimeModel m = RunTimeModel::parse(*model, polarcomp::derive_seed(*seed, 3));
                state = polarcomp::coded_gd_least_squares(A, y, *mu, *iters, cfg, m, *seed);
            }
            std::vector<std::vector<double>> csv;
            double sim_clock = 0.0, wall = 0.0;
            for (std::size_t i = 0; i < state.history.size(); ++i) {
                sim_clock += state.history[i].decode_time;
                wall += state.history[i].wall_seconds;
                csv.push_back({static_cast<double>(i + 1), state.history[i].cost, sim_clock, wall});
            }
            polarcomp::write_csv(*out, "iteration,cost,sim_clock,wall_clock", csv);
            std::vector<std::string> argv = {"app", "gd", "--rows", fmt(*rows), "--cols", fmt(*cols),
                                             "--iters", fmt(*iters), "--mu", fmt(*mu),
                                             "--N", fmt(*N), "--s", fmt(*s),
                                             "--epsilon", fmt(*epsilon), "--model", *model,
                                             "--seed", fmt(*seed), "--out", *out};
            if (*threads > 0) argv.insert(argv.end(), {"--threads", fmt(*threads)});
            write_manifest(*out + ".manifest.json", argv);
            std::printf("gd finished: mu=%s final cost=%s\n", fmt(state.mu).c_str(),
                        fmt(state.history.back().cost).c_str());
        });
    }

    {
        auto* cmd = grp->add_subcommand("blackbox",
                                        "Three-way comparison of black-box gradient methods");
        auto objective = std::make_shared<std::string>("l1");
        auto d = std::make_shared<std::size_t>(32);
        auto rows = std::make_shared<std::size_t>(64);
        auto iters = std::make_shared<std::size_t>(60);
        auto step = std::make_shared<double>(0.002);
        auto delta = std::make_shared<double>(1e-5);
        auto seeds = std::make_shared<std::size_t>(21);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto guard = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--objective", *objective, "Objective (only 'l1')");
        cmd->add_option("--d", *d, "Parameter dimension (power of 2)");
        cmd->add_option("--rows", *rows, "Rows of the data matrix");
        cmd->add_option("--iters", *iters, "Iterations");
        cmd->add_option("--step", *step, "Step size");
        cmd->add_option("--delta", *delta, "Probe width");
        cmd->add_option("--seeds", *seeds, "Number of repetitions (median reported)");
        cmd->add_option("--seed", *seed, "Base seed");
        cmd->add_flag("--guard", *guard, "Discard coded updates that raise the objective");
        cmd->add_option("--out", *out, "CSV: iteration,fd_cost,es_cost,coded_cost")->required();
        cmd->callback([=]() {
            if (*objective != "l1") throw std::invalid_argument("unsupported objective: " + *objective);
            if (*iters == 0 || *seeds == 0)
                throw std::invalid_argument("--iters and --seeds must be positive");
            std::vector<polarcomp::BlackboxComparison> runs;
            for (std::size_t r = 0; r < *seeds; ++r) {
                std::uint64_t sr = polarcomp::derive_seed(*seed, 1000 + r);
                Matrix A = Matrix::gaussian(*rows, *d, polarcomp::derive_seed(sr, 1));
                Matrix b = Matrix::gaussian(*rows, 1, polarcomp::derive_seed(sr, 2));
                runs.push_back(
                    polarcomp::compare_blackbox_methods(A, b, *iters, *step, *delta, sr, *guard));
            }
            std::vector<std::vector<double>> csv;
            for (std::size_t i = 0; i < *iters; ++i) {
                std::vector<double> fd, es, coded;
                for (const auto& run : runs) {
                    fd.push_back(run.fd_cost[i]);
                    es.push_back(run.es_cost[i]);
                    coded.push_back(run.coded_cost[i]);
                }
                csv.push_back({static_cast<double>(i + 1), median_of(fd), median_of(es),
                               median_of(coded)});
            }
            polarcomp::write_csv(*out, "iteration,fd_cost,es_cost,coded_cost", csv);
            std::vector<std::string> argv = {"app", "blackbox", "--objective", *objective,
                                             "--d", fmt(*d), "--rows", fmt(*rows),
                                             "--iters", fmt(*iters), "--step", fmt(*step),
                                             "--delta", fmt(*delta), "--seeds", fmt(*seeds),
                                             "--seed", fmt(*seed), "--out", *out};
            if (*guard) argv.push_back("--guard");
            write_manifest(*out + ".manifest.json", argv);
            const auto& last = csv.back();
            std::printf("final median cost: fd=%s es=%s coded=%s\n", fmt(last[1]).c_str(),
                        fmt(last[2]).c_str(), fmt(last[3]).c_str());
        });
    }

    {
        auto* cmd = grp->add_subcommand("matmul2d",
                                        "Two-dimensional coded matrix multiply with peeling decode");
        auto n1 = std::make_shared<std::size_t>(4);
        auto s1 = std::make_shared<std::size_t>(2);
        auto n2 = std::make_shared<std::size_t>(4);
        auto s2 = std::make_shared<std::size_t>(2);
        auto rows = std::make_shared<std::size_t>(8);
        auto inner = std::make_shared<std::size_t>(6);
        auto cols = std::make_shared<std::size_t>(8);
        auto epsilon = std::make_shared<double>(0.5);
        auto keep = std::make_shared<double>(1.0);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto check = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--n1", *n1, "Workers along the row dimension");
        cmd->add_option("--s1", *s1, "Row bands of A");
        cmd->add_option("--n2", *n2, "Workers along the column dimension");
        cmd->add_option("--s2", *s2, "Column bands of B");
        cmd->add_option("--rows", *rows, "Rows of A (divisible by s1)");
        cmd->add_option("--inner", *inner, "Inner dimension");
        cmd->add_option("--cols", *cols, "Columns of B (divisible by s2)");
        cmd->add_option("--epsilon", *epsilon, "Design erasure probability");
        cmd->add_option("--keep-prob", *keep, "Probability each worker product survives");
        cmd->add_option("--seed", *seed, "Seed");
        cmd->add_flag("--check", *check, "Compare against the direct product; mismatch exits 4");
        cmd->add_option("--out", *out, "Result matrix path")->required();
        cmd->callback([=]() {
            if (*keep < 0.0 || *keep > 1.0)
                throw std::invalid_argument("--keep-prob must lie in [0,1]");
            Matrix A = Matrix::gaussian(*rows, *inner, polarcomp::derive_seed(*seed, 1));
            Matrix B = Matrix::gaussian(*inner, *cols, polarcomp::derive_seed(*seed, 2));
            CodeConfig cfg_rows = polarcomp::build_code(*n1, *s1, *epsilon,
                                                        polarcomp::derive_seed(*seed, 3));
            CodeConfig cfg_cols = polarcomp::build_code(*n2, *s2, *epsilon,
                                                        polarcomp::derive_seed(*seed, 4));
            polarcomp::Rng mask_rng(polarcomp::derive_seed(*seed, 5));
            std::vector<std::vector<std::uint8_t>> present(*n1, std::vector<std::uint8_t>(*n2, 1));
            for (auto& row : present)
                for (auto& cell : row) cell = mask_rng.uniform() < *keep ? 1 : 0;
            Matrix result = polarcomp::coded_matmul_2d(A, B, cfg_rows, cfg_cols, present);
            double err = polarcomp::relative_error(result, A * B);
            if (*check && !(err <= 1e-9))
                throw polarcomp::NumericalError("matmul2d mismatch: relative error " + fmt(err));
            write_matrix_auto(*out, result);
            std::vector<std::string> argv = {"app", "matmul2d", "--n1", fmt(*n1), "--s1", fmt(*s1),
                                             "--n2", fmt(*n2), "--s2", fmt(*s2),
                                             "--rows", fmt(*rows), "--inner", fmt(*inner),
                                             "--cols", fmt(*cols), "--epsilon", fmt(*epsilon),
                                             "--keep-prob", fmt(*keep), "--seed", fmt(*seed),
                                             "--out", *out};
            if (*check) argv.push_back("--check");
            write_manifest(*out + ".manifest.json", argv);
            std::printf("matmul2d %zux%zu, relative error vs direct product %s\n", result.rows,
                        result.cols, fmt(err).c_str());
        });
    }
}

// ---- rerun ----------------------------------------------------------------

void add_cmd_rerun(CLI::App& app, int& inner_code) {
    auto* cmd = app.add_subcommand("rerun", "Replay a recorded manifest");
    auto manifest = std::make_shared<std::string>();
    cmd->add_option("manifest", *manifest, "Path to a *.manifest.json file")->required();
    cmd->callback([=, &inner_code]() {
        std::ifstream in(*manifest);
        if (!in) throw std::invalid_argument("cannot read manifest: " + *manifest);
        nlohmann::json j = nlohmann::json::parse(in);
        if (!j.contains("argv") || !j["argv"].is_array())
            throw std::invalid_argument("manifest has no argv array: " + *manifest);
        std::vector<std::string> argv;
        for (const auto& item : j["argv"]) argv.push_back(item.get<std::string>());
        inner_code = run_cli(argv);
    });
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Randomized polar codes for straggler-resilient computation"};
    app.require_subcommand(1);
    int rerun_code = 0;

    add_cmd_build(app);
    add_cmd_encode(app);
    add_cmd_decode(app);
    add_cmd_estimate(app);
    add_cmd_sim(app);
    add_cmd_app(app);
    add_cmd_rerun(app, rerun_code);

    std::vector<const char*> argv;
    argv.push_back("polarcomp");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return rerun_code;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const polarcomp::NotDecodableError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const polarcomp::StalledError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const polarcomp::DivergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const polarcomp::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args);
}
