// Command-line front end: solve a single l1 regression instance or compare
// the inertial and non-inertial configurations across a suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iadmm/admm.hpp"
#include "iadmm/bench.hpp"
#include "iadmm/data.hpp"
#include "iadmm/oracle.hpp"
#include "iadmm/rates.hpp"

namespace {

constexpr int kExitSolver = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveOptions {
    std::string data_path;
    std::string format = "csv";
    bool generate = false;
    long n = 50;
    long d = 100;
    double sparsity = 0.1;
    double noise_sd = 0.05;
    std::uint64_t seed = 1;
    double alpha = 0.33;
    double sigma = 0.99;
    double tau = 0.999;
    double gamma = 1.0;
    double theta = 0.99;
    int k0 = 1;
    double tol = 1e-6;
    int max_outer = 100000;
    int max_inner = 10000;
    std::string rule = "summability";
    std::string out_dir = ".";
    bool checked = false;
    bool rates = false;
    std::string config_path;
};

iadmm::Dataset load_dataset(const SolveOptions& opt) {
    if (opt.generate) {
        iadmm::SyntheticSpec spec;
        spec.n = opt.n;
        spec.d = opt.d;
        spec.sparsity = opt.sparsity;
        spec.noise_sd = opt.noise_sd;
        spec.seed = opt.seed;
        return iadmm::gen_synthetic(spec).data;
    }
    if (opt.data_path.empty()) {
        throw iadmm::ConfigError("either --data or --gen is required");
    }
    if (opt.format == "csv") {
        return iadmm::load_csv(opt.data_path);
    }
    if (opt.format == "libsvm") {
        return iadmm::load_libsvm(opt.data_path);
    }
    throw iadmm::ConfigError("unknown --format '" + opt.format + "' (expected csv or libsvm)");
}

iadmm::AdmmConfig build_config(const SolveOptions& opt) {
    iadmm::AdmmConfig cfg;
    cfg.alpha = opt.alpha;
    cfg.sigma = opt.sigma;
    cfg.tau = opt.tau;
    cfg.gamma = opt.gamma;
    cfg.tol = opt.tol;
    cfg.max_outer = opt.max_outer;
    cfg.max_inner = opt.max_inner;
    cfg.checked = opt.checked;
    if (opt.rule == "constant") {
        cfg.rule = iadmm::InertialRule::constant();
    } else if (opt.rule == "summability") {
        cfg.rule = iadmm::InertialRule::summability(opt.theta, opt.k0);
    } else if (opt.rule == "belowbeta") {
        cfg.rule = iadmm::InertialRule::below_beta();
    } else {
        throw iadmm::ConfigError("unknown --rule '" + opt.rule +
                                 "' (expected constant, summability or belowbeta)");
    }
    return cfg;
}

// Values from an optional JSON config file fill in any option the user did
// not pass on the command line.
void apply_config_file(const CLI::App& cmd, SolveOptions& opt) {
    if (opt.config_path.empty()) {
        return;
    }
    std::ifstream in(opt.config_path);
    if (!in) {
        throw IoError("cannot open config file: " + opt.config_path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw iadmm::ConfigError("config file " + opt.config_path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw iadmm::ConfigError("config file " + opt.config_path + ": expected a JSON object");
    }
    auto take = [&](const char* flag, const char* key, auto& slot) {
        if (cmd.count(flag) == 0 && j.contains(key)) {
            try {
                j.at(key).get_to(slot);
            } catch (const nlohmann::json::exception& e) {
                throw iadmm::ConfigError("config file " + opt.config_path + ", key '" + key +
                                         "': " + e.what());
            }
        }
    };
    take("--alpha", "alpha", opt.alpha);
    take("--sigma", "sigma", opt.sigma);
    take("--tau", "tau", opt.tau);
    take("--gamma", "gamma", opt.gamma);
    take("--theta", "theta", opt.theta);
    take("--k0", "k0", opt.k0);
    take("--tol", "tol", opt.tol);
    take("--max-outer", "max_outer", opt.max_outer);
    take("--max-inner", "max_inner", opt.max_inner);
    take("--rule", "rule", opt.rule);
    take("--seed", "seed", opt.seed);
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << body;
    if (!out) {
        throw IoError("short write to " + path);
    }
}

int run_solve(const CLI::App& cmd, SolveOptions opt) {
    apply_config_file(cmd, opt);
    iadmm::Dataset raw = load_dataset(opt);
    iadmm::Preprocessed pre = iadmm::preprocess(std::move(raw));
    if (!pre.zero_columns.empty()) {
        std::cerr << "note: " << pre.zero_columns.size() << " zero column(s) left unscaled\n";
    }

    const iadmm::AdmmConfig cfg = build_config(opt);
    cfg.validate();
    const iadmm::Problem prob =
        iadmm::Problem::lasso(pre.data.A, pre.data.b, pre.nu);
    const iadmm::RunResult result = iadmm::run(prob, cfg);

    std::filesystem::create_directories(opt.out_dir);
    const auto out = [&](const std::string& leaf) {
        return (std::filesystem::path(opt.out_dir) / leaf).string();
    };

    const iadmm::RunSummary summary =
        iadmm::summarize_run(pre.data.name, cfg, pre.nu, opt.seed, prob, result);
    write_text_file(out("run_summary.json"), iadmm::run_summary_json(summary));

    std::ostringstream csv;
    iadmm::write_iterates_csv(csv, result.trace);
    write_text_file(out("iterates.csv"), csv.str());

    if (opt.rates) {
        std::optional<iadmm::PrimalDualPoint> reference;
        try {
            const iadmm::OracleSolution sol =
                iadmm::lasso_fista(pre.data.A, pre.data.b, pre.nu, 1e-11);
            reference = iadmm::reference_point(pre.data.A, pre.data.b, pre.nu, sol.x).p;
        } catch (const std::runtime_error&) {
            // No certified reference; the report keeps d0 null.
        }
        const iadmm::RateReport report = iadmm::build_rate_report(result, prob, cfg, reference);
        write_text_file(out("rates.json"), iadmm::rate_report_json(report));
    }

    std::cout << pre.data.name << ": " << summary.status << " after " << summary.outer_iters
              << " outer / " << summary.total_inner_iters << " inner iterations, residual "
              << summary.final_residual << ", objective " << summary.final_objective << "\n";
    std::cout << "wrote " << out("run_summary.json") << ", " << out("iterates.csv");
    if (opt.rates) {
        std::cout << ", " << out("rates.json");
    }
    std::cout << "\n";
    return summary.status == "converged" ? 0 : kExitSolver;
}

struct BenchOptions {
    std::vector<std::string> data_paths;
    std::string format = "csv";
    double alpha = 0.33;
    double sigma = 0.99;
    double tau = 0.999;
    double gamma = 1.0;
    double theta = 0.99;
    double tol = 1e-6;
    int max_outer = 100000;
    int max_inner = 10000;
    std::string rule = "summability";
    std::string out_dir = ".";
};

int run_bench(const BenchOptions& opt) {
    std::vector<iadmm::Preprocessed> problems;
    if (opt.data_paths.empty()) {
        for (const auto& spec : iadmm::default_bench_suite()) {
            problems.push_back(iadmm::preprocess(iadmm::gen_synthetic(spec).data));
        }
    } else {
        for (const auto& path : opt.data_paths) {
            iadmm::Dataset ds =
                opt.format == "libsvm" ? iadmm::load_libsvm(path) : iadmm::load_csv(path);
            problems.push_back(iadmm::preprocess(std::move(ds)));
        }
    }

    SolveOptions shared;
    shared.sigma = opt.sigma;
    shared.tau = opt.tau;
    shared.gamma = opt.gamma;
    shared.theta = opt.theta;
    shared.tol = opt.tol;
    shared.max_outer = opt.max_outer;
    shared.max_inner = opt.max_inner;

    SolveOptions base = shared;
    base.alpha = 0.0;
    base.rule = "constant";
    SolveOptions inertial = shared;
    inertial.alpha = opt.alpha;
    inertial.rule = opt.rule;

    iadmm::AdmmConfig cfg_base = build_config(base);
    iadmm::AdmmConfig cfg_inertial = build_config(inertial);
    cfg_base.keep_records = false;
    cfg_inertial.keep_records = false;
    cfg_base.validate();
    cfg_inertial.validate();

    std::vector<iadmm::BenchRow> rows;
    for (const auto& pre : problems) {
        const iadmm::Problem prob = iadmm::Problem::lasso(pre.data.A, pre.data.b, pre.nu);
        const iadmm::RunResult rb = iadmm::run(prob, cfg_base);
        const iadmm::RunResult ri = iadmm::run(prob, cfg_inertial);
        if (rb.status != iadmm::RunStatus::converged || ri.status != iadmm::RunStatus::converged) {
            std::cerr << pre.data.name << ": did not converge within --max-outer\n";
            return kExitSolver;
        }
        iadmm::BenchRow row;
        row.problem = pre.data.name;
        row.outer_base = rb.outer_iters;
        row.inner_base = rb.total_inner_iters;
        row.seconds_base = rb.wall_seconds;
        row.outer_inertial = ri.outer_iters;
        row.inner_inertial = ri.total_inner_iters;
        row.seconds_inertial = ri.wall_seconds;
        rows.push_back(std::move(row));
    }

    const iadmm::BenchTable table = iadmm::make_bench_table(std::move(rows));
    std::filesystem::create_directories(opt.out_dir);
    std::ostringstream csv;
    iadmm::write_bench_csv(csv, table);
    std::ostringstream md;
    iadmm::write_bench_markdown(md, table);
    const auto csv_path = (std::filesystem::path(opt.out_dir) / "bench_table.csv").string();
    const auto md_path = (std::filesystem::path(opt.out_dir) / "bench_table.md").string();
    write_text_file(csv_path, csv.str());
    write_text_file(md_path, md.str());

    std::cout << md.str();
    std::cout << "wrote " << csv_path << " and " << md_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inertial relative-error splitting solver for l1-regularized least squares"};
    app.require_subcommand(1);

    SolveOptions sopt;
    CLI::App* solve = app.add_subcommand("solve", "Solve one instance and write run artifacts");
    solve->add_option("--data", sopt.data_path, "Input file (features plus response)");
    solve->add_option("--format", sopt.format, "Input format: csv or libsvm")->capture_default_str();
    solve->add_flag("--gen", sopt.generate, "Generate a synthetic instance instead of reading a file");
    solve->add_option("--n", sopt.n, "Synthetic rows")->capture_default_str();
    solve->add_option("--d", sopt.d, "Synthetic columns")->capture_default_str();
    solve->add_option("--sparsity", sopt.sparsity, "Synthetic ground-truth density")->capture_default_str();
    solve->add_option("--noise-sd", sopt.noise_sd, "Synthetic noise level")->capture_default_str();
    solve->add_option("--seed", sopt.seed, "Synthetic generator seed")->capture_default_str();
    solve->add_option("--alpha", sopt.alpha, "Extrapolation weight cap")->capture_default_str();
    solve->add_option("--sigma", sopt.sigma, "Relative inner-solve tolerance")->capture_default_str();
    solve->add_option("--tau", sopt.tau, "Relaxation step")->capture_default_str();
    solve->add_option("--gamma", sopt.gamma, "Penalty parameter")->capture_default_str();
    solve->add_option("--theta", sopt.theta, "Geometric budget for the summability rule")->capture_default_str();
    solve->add_option("--k0", sopt.k0, "First iteration the summability cap applies to")->capture_default_str();
    solve->add_option("--tol", sopt.tol, "Stopping residual tolerance")->capture_default_str();
    solve->add_option("--max-outer", sopt.max_outer, "Outer iteration cap")->capture_default_str();
    solve->add_option("--max-inner", sopt.max_inner, "Inner iteration cap per outer pass")->capture_default_str();
    solve->add_option("--rule", sopt.rule, "Extrapolation rule: constant, summability or belowbeta")
        ->capture_default_str();
    solve->add_option("--out", sopt.out_dir, "Output directory")->capture_default_str();
    solve->add_flag("--checked", sopt.checked, "Re-derive and assert per-iteration identities");
    solve->add_flag("--rates", sopt.rates, "Also write rates.json");
    solve->add_option("--config", sopt.config_path, "JSON file with defaults for unset flags");

    BenchOptions bopt;
    CLI::App* bench = app.add_subcommand("bench", "Compare inertial vs non-inertial configurations");
    bench->add_option("--data", bopt.data_paths, "Input files (defaults to the bundled synthetic suite)");
    bench->add_option("--format", bopt.format, "Input format: csv or libsvm")->capture_default_str();
    bench->add_option("--alpha", bopt.alpha, "Extrapolation weight cap for the inertial runs")
        ->capture_default_str();
    bench->add_option("--sigma", bopt.sigma, "Relative inner-solve tolerance")->capture_default_str();
    bench->add_option("--tau", bopt.tau, "Relaxation step")->capture_default_str();
    bench->add_option("--gamma", bopt.gamma, "Penalty parameter")->capture_default_str();
    bench->add_option("--theta", bopt.theta, "Geometric budget for the summability rule")->capture_default_str();
    bench->add_option("--tol", bopt.tol, "Stopping residual tolerance")->capture_default_str();
    bench->add_option("--max-outer", bopt.max_outer, "Outer iteration cap")->capture_default_str();
    bench->add_option("--max-inner", bopt.max_inner, "Inner iteration cap per outer pass")->capture_default_str();
    bench->add_option("--rule", bopt.rule, "Extrapolation rule for the inertial runs")->capture_default_str();
    bench->add_option("--out", bopt.out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (solve->parsed()) {
            return run_solve(*solve, sopt);
        }
        return run_bench(bopt);
    } catch (const iadmm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const iadmm::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const iadmm::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}
