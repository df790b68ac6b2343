// Command-line front end: kernel benchmarks against the double oracle,
// the four statistical application workloads, and CSV pretty-printing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpnum/covariance.hpp"
#include "mpnum/errors.hpp"
#include "mpnum/io.hpp"
#include "mpnum/linalg.hpp"
#include "mpnum/rng.hpp"
#include "mpnum/workloads.hpp"

namespace {

using namespace mpnum;
using Clock = std::chrono::steady_clock;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double frob_norm_diff(const MPArray& a, const MPArray& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.at_linear(i) - b.at_linear(i);
        acc += d * d;
    }
    return std::sqrt(acc);
}

double frob_norm(const MPArray& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = a.at_linear(i);
        acc += v * v;
    }
    return std::sqrt(acc);
}

double rel_frob_err(const MPArray& result, const MPArray& reference) {
    const double ref = frob_norm(reference);
    if (ref == 0.0) return frob_norm_diff(result, reference);
    return frob_norm_diff(result, reference) / ref;
}

MPArray random_uniform_matrix(std::size_t n, Rng& rng) {
    std::vector<double> v(n * n);
    for (auto& x : v) x = rng.uniform();
    return MPArray::from_doubles(v, n, n, Precision::Double);
}

// Exponential covariance exp(-d) over the first n points of the smallest
// square unit grid holding them.
MPArray bench_covariance(std::size_t n) {
    const std::size_t side =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const auto grid = stats::grid_locations(std::max<std::size_t>(side, 2));
    MPArray cov = MPArray::zeros_matrix(n, n, Precision::Double);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            cov.set(i, j, std::exp(-grid.distances.get(i, j)));
    return cov;
}

struct BenchInputs {
    MPArray a;
    MPArray b;  // empty unless the op needs a second operand
    bool has_b = false;
};

BenchInputs make_bench_inputs(const std::string& op, std::size_t n,
                              std::uint64_t seed) {
    Rng rng(seed ^ (0x9E3779B9ull * n) ^ std::hash<std::string>{}(op));
    BenchInputs in;
    if (op == "chol") {
        in.a = bench_covariance(n);
    } else if (op == "backsolve") {
        in.a = linalg::chol(bench_covariance(n));
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform();
        in.b = MPArray::from_doubles(v, n, 1, Precision::Double);
        in.has_b = true;
    } else if (op == "gemm") {
        in.a = random_uniform_matrix(n, rng);
        in.b = random_uniform_matrix(n, rng);
        in.has_b = true;
    } else {
        in.a = random_uniform_matrix(n, rng);  // crossprod, svd
    }
    return in;
}

MPArray run_bench_op(const std::string& op, const BenchInputs& in, Precision p) {
    const MPArray a = in.a.converted(p);
    if (op == "chol") return linalg::chol(a);
    if (op == "crossprod") return linalg::crossprod(a);
    if (op == "backsolve") return linalg::backsolve(a, in.b.converted(p));
    if (op == "gemm") {
        MPArray c = MPArray::zeros_matrix(a.rows(), a.rows(), p);
        linalg::gemm(a, in.b.converted(p), c, {});
        return c;
    }
    if (op == "svd") {
        auto s = linalg::svd(a);
        MPArray d = MPArray::zeros(s.d.size(), Precision::Double);
        for (std::size_t i = 0; i < s.d.size(); ++i) d.set_linear(i, s.d.at_linear(i));
        return d;
    }
    throw InvalidParam("unknown benchmark op: " + op);
}

int cmd_bench(const std::string& op, const std::vector<std::size_t>& sizes,
              const std::vector<Precision>& precisions, int reps,
              std::uint64_t seed, const std::string& out_path,
              io::ResultsFormat format, bool allow_half_all, bool big) {
    const bool half_ok = op == "crossprod" || op == "gemm" || allow_half_all;
    for (Precision p : precisions) {
        if (p == Precision::Half && !half_ok) {
            std::cerr << "error: half precision benchmarks are restricted to "
                         "crossprod/gemm; pass --allow-half-all to override\n";
            return 2;
        }
    }
    for (std::size_t n : sizes) {
        if (n < 2) {
            std::cerr << "error: sizes must be >= 2\n";
            return 2;
        }
        if (n > 4096 && !big) {
            std::cerr << "error: n > 4096 needs --big\n";
            return 2;
        }
    }
    std::vector<io::BenchRecord> records;
    for (std::size_t n : sizes) {
        const BenchInputs inputs = make_bench_inputs(op, n, seed);
        const MPArray oracle = run_bench_op(op, inputs, Precision::Double);
        for (Precision p : precisions) {
            std::vector<double> times;
            MPArray result;
            for (int r = 0; r < reps; ++r) {
                const auto t0 = Clock::now();
                result = run_bench_op(op, inputs, p);
                times.push_back(
                    std::chrono::duration<double>(Clock::now() - t0).count());
            }
            std::sort(times.begin(), times.end());
            io::BenchRecord rec;
            rec.op = op;
            rec.n = static_cast<long>(n);
            rec.precision = precision_name(p);
            rec.placement = "CPU";
            rec.reps = reps;
            rec.median_seconds = times[times.size() / 2];
            rec.rel_frob_err = rel_frob_err(result, oracle);
            records.push_back(rec);
            std::printf("%-10s n=%-6zu %-7s median %.4fs rel_err %.3e\n", op.c_str(),
                        n, rec.precision.c_str(), rec.median_seconds,
                        rec.rel_frob_err);
        }
    }
    if (!out_path.empty()) io::write_results(out_path, records, format);
    return 0;
}

// Tracks artifacts so a failed run leaves nothing half-written behind.
struct ArtifactSet {
    std::vector<std::string> paths;
    bool committed = false;
    ~ArtifactSet() {
        if (committed) return;
        for (const auto& p : paths) std::remove(p.c_str());
    }
    std::string add(const std::string& p) {
        paths.push_back(p);
        return p;
    }
};

int cmd_app(const std::string& name, const std::vector<Precision>& precisions,
            std::size_t grid, std::size_t n_points, std::size_t rows,
            std::size_t cols, std::size_t k, std::uint64_t seed,
            const std::string& out_dir, bool big) {
    if (grid > 40 && !big) {
        std::cerr << "error: grid > 40 needs --big\n";
        return 2;
    }
    const std::string prefix = out_dir.empty() ? "." : out_dir;
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) {
            std::cerr << "error: cannot create " << out_dir << ": " << ec.message()
                      << "\n";
            return 2;
        }
    }
    ArtifactSet artifacts;
    nlohmann::json summary;
    summary["app"] = name;
    summary["seed"] = seed;

    if (name == "mala") {
        const auto g = stats::grid_locations(grid);
        const std::size_t n = grid * grid;
        stats::GaussianTarget target{
            MPArray::zeros(n, Precision::Double),
            stats::exp_cov(g.distances, 1.0, 0.5),
        };
        stats::MalaConfig cfg{0.01, stats::exp_cov(g.distances, 1.0, 0.05), 100,
                              seed};
        for (Precision p : precisions) {
            const auto res = stats::mala_run(target, cfg, p);
            const std::string trace_path = artifacts.add(
                prefix + "/mala_" + precision_name(p) + "_trace.csv");
            io::write_matrix_csv(trace_path, res.trace);
            summary["runs"][precision_name(p)] = {
                {"accept_rate", res.accept_rate},
                {"iterations", cfg.iterations},
                {"elapsed_seconds", res.elapsed_seconds},
                {"trace", trace_path},
            };
        }
    } else if (name == "matern-mle") {
        const auto g = stats::grid_locations(grid);
        const MPArray cov_true = stats::exp_cov(g.distances, 1.0, 0.03);
        Rng rng(seed);
        const MPArray z = stats::sample_gp(cov_true, rng);
        for (Precision p : precisions) {
            const auto res =
                stats::matern_mle(z, g.distances, p, std::log(0.1), std::log(0.5));
            summary["runs"][precision_name(p)] = {
                {"sigma2_hat", res.sigma2_hat},
                {"range_hat", res.range_hat},
                {"nu", res.nu},
                {"nll", res.nll},
                {"iterations", res.iterations},
                {"elapsed_seconds", res.elapsed_seconds},
            };
        }
    } else if (name == "pca") {
        // Separable low-rank space-time field plus noise.
        Rng rng(seed);
        std::vector<double> data(rows * cols);
        const std::size_t rank = std::max<std::size_t>(k, 3);
        std::vector<double> tu(rows * rank), sv(cols * rank);
        for (auto& x : tu) x = rng.normal();
        for (auto& x : sv) x = rng.normal();
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t i = 0; i < rows; ++i) {
                double v = 0.0;
                for (std::size_t r = 0; r < rank; ++r) {
                    const double scale = 10.0 / static_cast<double>(r + 1);
                    v += scale * tu[r * rows + i] * sv[r * cols + j];
                }
                data[j * rows + i] = v + 0.1 * rng.normal();
            }
        }
        const MPArray x =
            MPArray::from_doubles(data, rows, cols, Precision::Double);
        for (Precision p : precisions) {
            const auto res = stats::pca_eof(x, k, p);
            const std::string eof_path = artifacts.add(
                prefix + "/pca_" + precision_name(p) + "_eofs.csv");
            io::write_matrix_csv(eof_path, res.eofs);
            summary["runs"][precision_name(p)] = {
                {"pct_var", res.pct_var},
                {"elapsed_seconds", res.elapsed_seconds},
                {"eofs", eof_path},
            };
        }
    } else if (name == "laplace") {
        const auto data = stats::laplace_gen_data(n_points, 0.6, 0.1, 10.0, seed);
        for (Precision p : precisions) {
            const auto res = stats::posterior_grid(data.distances, data.y, p);
            const std::string post_path = artifacts.add(
                prefix + "/laplace_" + precision_name(p) + "_posterior.csv");
            std::vector<double> flat;
            for (std::size_t i = 0; i < res.alpha.size(); ++i) {
                flat.push_back(res.alpha[i]);
                flat.push_back(res.posterior[i]);
            }
            io::write_matrix_csv(post_path,
                                 MPArray::from_doubles(flat, 2, res.alpha.size(),
                                                       Precision::Double));
            const auto argmax =
                std::max_element(res.posterior.begin(), res.posterior.end());
            summary["runs"][precision_name(p)] = {
                {"alpha_map", res.alpha[argmax - res.posterior.begin()]},
                {"elapsed_seconds", res.elapsed_seconds},
                {"posterior", post_path},
            };
        }
    } else {
        std::cerr << "error: unknown app " << name << "\n";
        return 2;
    }

    const std::string summary_path =
        artifacts.add(prefix + "/" + name + "_summary.json");
    std::ofstream out(summary_path);
    if (!out) throw IoError("cannot open " + summary_path + " for writing");
    out << summary.dump(2) << '\n';
    artifacts.committed = true;
    std::cout << "wrote " << summary_path << "\n";
    return 0;
}

int cmd_print(const std::string& path, Precision prec) {
    const MPArray m = io::read_matrix_csv(path, prec);
    if (m.cols() == 1) {
        MPArray v = MPArray::zeros(std::max<std::size_t>(m.rows(), 1), prec);
        for (std::size_t i = 0; i < m.rows(); ++i) v.set_linear(i, m.get(i, 0));
        std::cout << v.format();
    } else {
        std::cout << m.format();
    }
    return 0;
}

int threads_from_env_or_flag(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("MPNUM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-precision linear algebra benchmarks and workloads"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads for kernels");

    // bench
    auto* bench = app.add_subcommand("bench", "benchmark a kernel vs the double oracle");
    std::string bench_op;
    bench->add_option("op", bench_op, "one of chol, crossprod, backsolve, gemm, svd")
        ->required();
    std::string sizes_str = "256,512";
    bench->add_option("--sizes", sizes_str, "comma-separated matrix sizes");
    std::string precisions_str = "single,double";
    bench->add_option("--precisions", precisions_str, "comma-separated precisions");
    int reps = 5;
    bench->add_option("--reps", reps, "repetitions per measurement");
    std::uint64_t seed = 42;
    bench->add_option("--seed", seed, "input generator seed");
    std::string out_path;
    bench->add_option("--out", out_path, "results file");
    std::string format_str = "csv";
    bench->add_option("--format", format_str, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    bool allow_half_all = false;
    bench->add_flag("--allow-half-all", allow_half_all,
                    "allow half precision for every op");
    bool big = false;
    bench->add_flag("--big", big, "lift the desk-scale size caps");

    // app
    auto* workload = app.add_subcommand("app", "run a statistical workload");
    std::string app_name;
    workload->add_option("name", app_name, "mala, matern-mle, pca, or laplace")
        ->required();
    std::string app_precisions = "double";
    workload->add_option("--precision", app_precisions, "comma-separated precisions");
    std::size_t grid = 16;
    workload->add_option("--grid", grid, "grid side length (mala, matern-mle)");
    std::size_t n_points = 100;
    workload->add_option("--n", n_points, "chain length (laplace)");
    std::size_t rows = 200, cols = 400, k = 3;
    workload->add_option("--rows", rows, "data rows (pca)");
    workload->add_option("--cols", cols, "data columns (pca)");
    workload->add_option("--k", k, "components (pca)");
    std::uint64_t app_seed = 4;
    workload->add_option("--seed", app_seed, "rng seed");
    std::string app_out = ".";
    workload->add_option("--out", app_out, "output directory");
    bool app_big = false;
    workload->add_flag("--big", app_big, "lift the desk-scale size caps");

    // print
    auto* print_cmd = app.add_subcommand("print", "pretty-print a CSV matrix");
    std::string print_path;
    print_cmd->add_option("path", print_path, "CSV file")->required();
    std::string print_prec = "double";
    print_cmd->add_option("--precision", print_prec, "storage precision");

    CLI11_PARSE(app, argc, argv);

    try {
        mpnum::linalg::set_num_threads(threads_from_env_or_flag(threads));
        if (bench->parsed()) {
            std::vector<std::size_t> sizes;
            for (const auto& s : split_list(sizes_str))
                sizes.push_back(static_cast<std::size_t>(std::stoul(s)));
            std::vector<Precision> precs;
            for (const auto& s : split_list(precisions_str))
                precs.push_back(parse_precision(s));
            return cmd_bench(bench_op, sizes, precs, reps, seed, out_path,
                             format_str == "json" ? io::ResultsFormat::Json
                                                  : io::ResultsFormat::Csv,
                             allow_half_all, big);
        }
        if (workload->parsed()) {
            std::vector<Precision> precs;
            for (const auto& s : split_list(app_precisions))
                precs.push_back(parse_precision(s));
            return cmd_app(app_name, precs, grid, n_points, rows, cols, k, app_seed,
                           app_out, app_big);
        }
        return cmd_print(print_path, parse_precision(print_prec));
    } catch (const InvalidParam& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RaggedRows& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}
