#include "iadmm/bench.hpp"

#include <cmath>
#include <iomanip>

#include <nlohmann/json.hpp>

namespace iadmm {

namespace {

const char* rule_name(InertialKind kind) {
    switch (kind) {
        case InertialKind::constant:
            return "constant";
        case InertialKind::summability:
            return "summability";
        case InertialKind::below_beta:
            return "belowbeta";
    }
    return "unknown";
}

nlohmann::json number_or_null(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

void write_full(std::ostream& os, double v) {
    os << std::setprecision(17) << v;
}

}  // namespace

RunSummary summarize_run(const std::string& problem_name, const AdmmConfig& cfg, double nu,
                         std::uint64_t seed, const Problem& prob, const RunResult& result) {
    RunSummary s;
    s.problem = problem_name;
    s.rule = rule_name(cfg.rule.kind);
    s.alpha = cfg.alpha;
    s.sigma = cfg.sigma;
    s.tau = cfg.tau;
    s.gamma = cfg.gamma;
    s.theta = cfg.rule.theta;
    s.nu = nu;
    s.tol = cfg.tol;
    s.seed = seed;
    s.max_outer = cfg.max_outer;
    s.max_inner = cfg.max_inner;
    s.status = result.status == RunStatus::converged ? "converged" : "max_outer_reached";
    s.outer_iters = result.outer_iters;
    s.total_inner_iters = result.total_inner_iters;
    s.final_residual = result.final_residual;
    s.final_objective = prob.objective(result.final_x);
    s.wall_seconds = result.wall_seconds;
    return s;
}

std::string run_summary_json(const RunSummary& s) {
    nlohmann::json j;
    j["problem"] = s.problem;
    j["rule"] = s.rule;
    j["alpha"] = s.alpha;
    j["sigma"] = s.sigma;
    j["tau"] = s.tau;
    j["gamma"] = s.gamma;
    j["theta"] = s.theta;
    j["nu"] = s.nu;
    j["tol"] = s.tol;
    j["seed"] = s.seed;
    j["max_outer"] = s.max_outer;
    j["max_inner"] = s.max_inner;
    j["status"] = s.status;
    j["outer_iters"] = s.outer_iters;
    j["total_inner_iters"] = s.total_inner_iters;
    j["final_residual"] = number_or_null(s.final_residual);
    j["final_objective"] = number_or_null(s.final_objective);
    j["wall_seconds"] = s.wall_seconds;
    return j.dump(2) + "\n";
}

void write_iterates_csv(std::ostream& os, const std::vector<IterTrace>& trace) {
    os << "k,alpha_k,residual,inner_iters,pointwise_r\n";
    for (const auto& t : trace) {
        os << t.k << ',';
        write_full(os, t.alpha_k);
        os << ',';
        write_full(os, t.residual);
        os << ',' << t.inner_iters << ',';
        write_full(os, t.pointwise_r);
        os << '\n';
    }
}

double BenchRow::outer_ratio() const {
    return static_cast<double>(outer_inertial) / static_cast<double>(outer_base);
}

double BenchRow::inner_ratio() const {
    return static_cast<double>(inner_inertial) / static_cast<double>(inner_base);
}

double BenchRow::seconds_ratio() const {
    return seconds_inertial / seconds_base;
}

BenchTable make_bench_table(std::vector<BenchRow> rows) {
    if (rows.empty()) {
        throw ConfigError("make_bench_table: no rows");
    }
    BenchTable t;
    t.rows = std::move(rows);
    double lo = 0.0;
    double li = 0.0;
    double ls = 0.0;
    for (const auto& r : t.rows) {
        if (r.outer_base <= 0 || r.inner_base <= 0 || !(r.seconds_base > 0.0)) {
            throw ConfigError("make_bench_table: baseline counts must be positive for '" + r.problem + "'");
        }
        lo += std::log(r.outer_ratio());
        li += std::log(r.inner_ratio());
        ls += std::log(r.seconds_ratio());
    }
    const auto n = static_cast<double>(t.rows.size());
    t.geo_outer = std::exp(lo / n);
    t.geo_inner = std::exp(li / n);
    t.geo_seconds = std::exp(ls / n);
    return t;
}

void write_bench_csv(std::ostream& os, const BenchTable& t) {
    os << "problem,outer_base,inner_base,seconds_base,outer_inertial,inner_inertial,seconds_inertial,"
          "outer_ratio,inner_ratio,seconds_ratio\n";
    for (const auto& r : t.rows) {
        os << r.problem << ',' << r.outer_base << ',' << r.inner_base << ',';
        write_full(os, r.seconds_base);
        os << ',' << r.outer_inertial << ',' << r.inner_inertial << ',';
        write_full(os, r.seconds_inertial);
        os << ',';
        write_full(os, r.outer_ratio());
        os << ',';
        write_full(os, r.inner_ratio());
        os << ',';
        write_full(os, r.seconds_ratio());
        os << '\n';
    }
    os << "geomean,,,,,,,";
    write_full(os, t.geo_outer);
    os << ',';
    write_full(os, t.geo_inner);
    os << ',';
    write_full(os, t.geo_seconds);
    os << '\n';
}

void write_bench_markdown(std::ostream& os, const BenchTable& t) {
    os << "| problem | outer (base) | outer (inertial) | outer ratio | inner ratio | time ratio |\n";
    os << "|---|---|---|---|---|---|\n";
    os << std::setprecision(4);
    for (const auto& r : t.rows) {
        os << "| " << r.problem << " | " << r.outer_base << " | " << r.outer_inertial << " | "
           << r.outer_ratio() << " | " << r.inner_ratio() << " | " << r.seconds_ratio() << " |\n";
    }
    os << "| **geomean** | | | " << t.geo_outer << " | " << t.geo_inner << " | " << t.geo_seconds
       << " |\n";
    const ReferenceRatios ref = reference_ratios();
    os << "\nReference geometric means on the published regression suite: outer " << ref.outer
       << ", inner " << ref.inner << ", time " << ref.seconds << ".\n";
}

ReferenceRatios reference_ratios() {
    return {0.7149, 0.7466, 0.7414};
}

std::vector<SyntheticSpec> default_bench_suite() {
    std::vector<SyntheticSpec> suite;
    for (std::uint64_t i = 0; i < 10; ++i) {
        SyntheticSpec spec;
        spec.n = 40;
        spec.d = 60 + 10 * static_cast<Eigen::Index>(i);
        spec.sparsity = 0.1;
        spec.noise_sd = 0.05;
        spec.seed = 1000 + i;
        suite.push_back(spec);
    }
    return suite;
}

}  // namespace iadmm
