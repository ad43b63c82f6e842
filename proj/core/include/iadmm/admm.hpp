#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "iadmm/inner.hpp"
#include "iadmm/prox.hpp"
#include "iadmm/spaces.hpp"

namespace iadmm {

/// Thrown in checked mode when a runtime identity or inequality that the
/// update scheme guarantees fails beyond its tolerance.
struct InvariantViolation : std::runtime_error {
    InvariantViolation(const std::string& message, int iteration);
    int iteration;
};

enum class InertialKind { constant, summability, below_beta };

/// Rule producing the extrapolation weight alpha_k for each iteration.
///  - constant: alpha_k = alpha for every k.
///  - summability: alpha_k = min(alpha, theta^k / ||p_k - p_{k-1}||^2) from
///    iteration k0 on, which makes the inertial correction summable.
///  - below_beta: a nondecreasing schedule capped at alpha, where alpha must
///    stay below the threshold beta(sigma, tau); an empty schedule means the
///    constant one.
struct InertialRule {
    InertialKind kind = InertialKind::constant;
    double theta = 0.99;
    int k0 = 1;
    std::function<double(int)> schedule;

    static InertialRule constant();
    static InertialRule summability(double theta = 0.99, int k0 = 1);
    static InertialRule below_beta();
    static InertialRule below_beta_schedule(std::function<double(int)> schedule);
};

struct BetaBound {
    double eta;
    double beta;
};

/// eta = (1 - tau)(1 - sigma)^2 / (4 tau) and the largest admissible
/// constant extrapolation weight beta = 2 eta / (1 + 2 eta + sqrt(1 + 8 eta)).
BetaBound beta_bound(double sigma, double tau);

/// q(t) = (eta - 1) t^2 - (1 + 2 eta) t + eta. Positive on [0, beta), zero
/// at beta.
double q_eval(double t, double eta);

struct AdmmConfig {
    double alpha = 0.33;
    double sigma = 0.99;
    double tau = 0.999;
    double gamma = 1.0;
    InertialRule rule{};
    double tol = 1e-6;
    int max_outer = 100000;
    int max_inner = 10000;
    /// Re-derive and assert the per-iteration identities while running.
    bool checked = false;
    /// Keep the full per-iteration records (the slim trace is always kept).
    bool keep_records = true;
    /// Permit tau == 1, which reduces the update to the classical scheme;
    /// meant for cross-checks against that scheme, not production runs.
    bool allow_unit_tau = false;

    void validate() const;
};

/// Problem data: first block f, second block g, coupling operator, and an
/// optional stopping residual evaluated at each new x. Without a stopping
/// residual the solver runs to max_outer.
struct Problem {
    FirstBlock first;
    SecondBlock second;
    LinearOp op;
    std::function<double(const Vec&)> stopping;

    static Problem lasso(Eigen::MatrixXd A, Vec b, double nu);

    double objective(const Vec& x) const;
    void validate() const;
};

/// Everything produced by one outer iteration.
struct IterateRecord {
    int k = 0;
    double alpha_k = 0.0;
    Vec z_hat;
    Vec y_hat;
    Vec x;
    ApproxSolution approx;
    Vec z_prime;
    Vec z_breve;
    Vec y_breve;
    Vec z_next;
    Vec y_next;
    double stopping_residual = 0.0;
};

/// Slim per-iteration log kept for every run.
struct IterTrace {
    int k = 0;
    double alpha_k = 0.0;
    double residual = 0.0;
    int inner_iters = 0;
    double pointwise_r = 0.0;
};

enum class RunStatus { converged, max_outer_reached };

struct RunResult {
    RunStatus status = RunStatus::max_outer_reached;
    int outer_iters = 0;
    long total_inner_iters = 0;
    double final_residual = 0.0;
    Vec final_x;
    Vec z0;
    Vec y0;
    std::vector<IterateRecord> records;
    std::vector<IterTrace> trace;
    double wall_seconds = 0.0;
};

struct StartPoint {
    Vec z0;
    Vec y0;
};

struct Extrapolated {
    Vec z_hat;
    Vec y_hat;
};

/// p_hat = p + alpha_k (p - p_prev), applied blockwise.
Extrapolated extrapolate(const PrimalDualPoint& p, const PrimalDualPoint& p_prev, double alpha_k);

/// Summable-correction weight min(alpha, theta^k / ||p - p_prev||^2) in the
/// weighted metric, with alpha returned when the displacement vanishes or
/// k < k0.
double alpha_summability(int k, const PrimalDualPoint& p, const PrimalDualPoint& p_prev, double alpha,
                         double theta, int k0, const GammaMetric& m);

/// z_prime = z_hat + gamma (Lx - y_hat): the multiplier certified by the
/// first-block minimization.
Vec z_prime_point(const Vec& z_hat, const Vec& lx, const Vec& y_hat, double gamma);

struct BrevePoint {
    Vec z;
    Vec y;
};

/// Fully corrected point: z = z_hat + gamma (Lx - y_tilde),
/// y = (z_hat + gamma Lx - v) / gamma.
BrevePoint breve_point(const Vec& z_hat, const Vec& lx, const ApproxSolution& approx, double gamma);

struct NextPoint {
    Vec z;
    Vec y;
};

/// Relaxed update: z_next = z_hat + tau gamma (Lx - y_tilde),
/// y_next = (1 - tau) y_hat + (tau/gamma)(z_hat + gamma Lx - v).
NextPoint update(const Vec& z_hat, const Vec& y_hat, const Vec& lx, const ApproxSolution& approx,
                 double tau, double gamma);

/// Componentwise distance of 0 to the subdifferential of
/// nu ||x||_1 + 0.5 ||Ax - b||^2, maximized over components.
double stopping_residual_lasso(const Vec& x, const Eigen::MatrixXd& A, const Vec& b, double nu);

RunResult run(const Problem& prob, const AdmmConfig& cfg);
RunResult run(const Problem& prob, const AdmmConfig& cfg, const StartPoint& start);

/// Gaps between stored record fields and their re-derived values, plus the
/// inequalities the update scheme promises for every iteration. All the
/// quantities are recomputed from the record itself, and every gap except
/// first_block_gap is normalized by the size of the quantities involved.
struct RecordDiagnostics {
    /// ||p_next - ((1-tau) p_hat + tau p_breve)|| in the weighted metric.
    double combination_gap = 0.0;
    /// Relative gap between gamma ||Lx - y_tilde||^2 + (1/gamma)||z' - v||^2
    /// and ||p_breve - p_hat||^2.
    double residual_identity_gap = 0.0;
    /// Relative gap between ||p_tilde - p_breve||^2 and
    /// (1/gamma)(||e||^2 + ||v - z_hat||^2).
    double distance_identity_gap = 0.0;
    /// max(0, ||p_breve - p_hat|| - 2 ||p_tilde - p_hat||), scaled.
    double contraction_excess = 0.0;
    bool certificate_ok = false;
    /// Componentwise violation of -z_prime being a subgradient of f at x.
    double first_block_gap = 0.0;
    /// Distance between the stored equation residual and its recomputation.
    double stored_e_gap = 0.0;
    /// Worst relative gap between stored derived fields (z_prime, breve,
    /// next) and their recomputation from z_hat, y_hat, x, and the inner
    /// solution.
    double derived_fields_gap = 0.0;
};

RecordDiagnostics diagnose_record(const IterateRecord& rec, const Problem& prob, const AdmmConfig& cfg);

/// Throws InvariantViolation when any diagnostic exceeds its tolerance.
void assert_record_invariants(const IterateRecord& rec, const Problem& prob, const AdmmConfig& cfg);

}  // namespace iadmm
