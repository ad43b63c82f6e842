#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "iadmm/admm.hpp"
#include "iadmm/data.hpp"

namespace iadmm {

/// Flat record of one solver run, serializable to JSON.
struct RunSummary {
    std::string problem;
    std::string rule;
    double alpha = 0.0;
    double sigma = 0.0;
    double tau = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
    double nu = 0.0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    int max_outer = 0;
    int max_inner = 0;
    std::string status;
    int outer_iters = 0;
    long total_inner_iters = 0;
    double final_residual = 0.0;
    double final_objective = 0.0;
    double wall_seconds = 0.0;
};

RunSummary summarize_run(const std::string& problem_name, const AdmmConfig& cfg, double nu,
                         std::uint64_t seed, const Problem& prob, const RunResult& result);

std::string run_summary_json(const RunSummary& summary);

/// Per-iteration trace as CSV with header k,alpha_k,residual,inner_iters,pointwise_r.
void write_iterates_csv(std::ostream& os, const std::vector<IterTrace>& trace);

/// One problem measured under the baseline (no extrapolation) and inertial
/// configurations.
struct BenchRow {
    std::string problem;
    int outer_base = 0;
    long inner_base = 0;
    double seconds_base = 0.0;
    int outer_inertial = 0;
    long inner_inertial = 0;
    double seconds_inertial = 0.0;

    double outer_ratio() const;
    double inner_ratio() const;
    double seconds_ratio() const;
};

struct BenchTable {
    std::vector<BenchRow> rows;
    // Geometric means of the inertial/baseline ratios across rows.
    double geo_outer = 0.0;
    double geo_inner = 0.0;
    double geo_seconds = 0.0;
};

BenchTable make_bench_table(std::vector<BenchRow> rows);

void write_bench_csv(std::ostream& os, const BenchTable& table);
void write_bench_markdown(std::ostream& os, const BenchTable& table);

/// Geometric-mean ratios reported for this method on a nine-problem
/// regression suite (outer iterations, inner iterations, wall time);
/// printed alongside local results for context.
struct ReferenceRatios {
    double outer;
    double inner;
    double seconds;
};

ReferenceRatios reference_ratios();

/// Fixed synthetic problems used by the bundled benchmark comparison.
std::vector<SyntheticSpec> default_bench_suite();

}  // namespace iadmm
