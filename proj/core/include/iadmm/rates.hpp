#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iadmm/admm.hpp"
#include "iadmm/spaces.hpp"

namespace iadmm {

struct PointwiseEntry {
    int k = 0;
    double r = 0.0;
    double eps = 0.0;
};

struct ErgodicEntry {
    int k = 0;
    double residual = 0.0;
    double delta_a = 0.0;
    double eps_a = 0.0;
};

/// Iteration residual r_k = gamma ||Lx - y_tilde||^2 + (1/gamma)||z' - v||^2.
double pointwise_residual(const IterateRecord& rec, const LinearOp& op, const GammaMetric& m);

struct BestIterate {
    int index = -1;
    double delta = 0.0;
};

/// Index minimizing max(r/2, 2 eps / sigma^2); the eps term is dropped when
/// sigma is zero. Ties resolve to the smallest index.
BestIterate best_index(const std::vector<PointwiseEntry>& entries, double sigma);

/// Constant in the best-iterate residual bound 2 C d0^2 / k. Requires
/// q(alpha) > 0, i.e. alpha below beta(sigma, tau).
double constant_C(double alpha, double sigma, double tau);

/// Constant in the ergodic residual bound D^2 d0^2 / k^2. Same requirement.
double constant_D(double alpha, double sigma, double tau);

/// Running averages of (x, y_tilde, z_prime, v, eps) over the iterations
/// seen so far, kept in O(dimension) memory. The two cross terms needed for
/// the averaged gap values are accumulated alongside, so a report costs one
/// operator application regardless of how many iterations were added.
class ErgodicAccumulator {
  public:
    ErgodicAccumulator(Eigen::Index primal_dim, Eigen::Index split_dim);

    void add(const Vec& x, const Vec& y_tilde, const Vec& z_prime, const Vec& v, double eps,
             const LinearOp& op);
    void add(const IterateRecord& rec, const LinearOp& op);

    int count() const { return count_; }
    Vec mean_x() const;
    Vec mean_y_tilde() const;
    Vec mean_z_prime() const;
    Vec mean_v() const;
    double mean_eps() const;

    /// Averaged residual plus the averaged gap pair (delta_a, eps_a) for the
    /// iterations added so far.
    ErgodicEntry report(const GammaMetric& m, const LinearOp& op) const;

  private:
    int count_ = 0;
    Eigen::VectorXd sum_x_;
    Eigen::VectorXd sum_y_;
    Eigen::VectorXd sum_zp_;
    Eigen::VectorXd sum_v_;
    double sum_zp_lx_ = 0.0;
    double sum_y_v_ = 0.0;
    double sum_eps_ = 0.0;
};

/// Per-run rate summary. C, D and d0 are NaN when unavailable (parameters
/// outside the admissible range for the constants, or no reference point).
/// Bound verdicts are only computed for constant extrapolation weights with
/// valid constants; otherwise the residual histories are reported as data.
struct RateReport {
    double C = 0.0;
    double D = 0.0;
    double d0 = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    double tau = 0.0;
    double gamma = 1.0;
    std::vector<PointwiseEntry> pointwise;
    std::vector<ErgodicEntry> ergodic;
    BestIterate best;
    bool bounds_checked = false;
    bool bounds_ok = false;
};

RateReport build_rate_report(const RunResult& result, const Problem& prob, const AdmmConfig& cfg,
                             const std::optional<PrimalDualPoint>& reference);

/// JSON document with keys C, D, d0, pointwise, ergodic, bounds_ok.
std::string rate_report_json(const RateReport& report);

struct BoundCheck {
    bool ok = true;
    int violation_k = -1;
    std::string detail;
};

/// For every k >= 1 some iterate i <= k must satisfy r_i <= 2 C d0^2 / k,
/// and eps_i <= sigma^2 C d0^2 / (2k) when sigma > 0.
BoundCheck check_best_iterate_bound(const RateReport& report);

/// For every k >= 1 the averaged residual must satisfy the D^2 d0^2 / k^2
/// bound and the averaged gap pair must be nonnegative (to -1e-10) with
/// delta_a + eps_a within its 1/k bound.
BoundCheck check_ergodic_bounds(const RateReport& report);

/// Distance-to-reference sequences of a recorded run. Index k runs over
/// 0..K for h and disp (disp[0] = 0 by the equal-start convention) and over
/// 0..K-1 for the per-iteration weights.
struct DistanceSequences {
    std::vector<double> h;      ///< ||p_k - ref||^2 in the weighted metric
    std::vector<double> s;      ///< s[k] = tau(1-tau)(1-sigma)^2 ||p_tilde - p_hat||^2 of iteration k-1; s[0] = 0
    std::vector<double> delta;  ///< alpha_k (1 + alpha_k) disp[k]
    std::vector<double> disp;   ///< ||p_k - p_{k-1}||^2 in the weighted metric
    std::vector<double> alpha;  ///< weight used at iteration k
};

DistanceSequences distance_sequences(const RunResult& result, const PrimalDualPoint& reference,
                                     const AdmmConfig& cfg, const LinearOp& op);

/// Per-iteration descent toward the reference:
/// h_{k+1} - h_k - alpha_k (h_k - h_{k-1}) + s_{k+1} <= delta_k + slack.
BoundCheck check_descent_recursion(const DistanceSequences& seq);

/// Summed descent: h_k + sum_{j=1..k} s_j <= h_0 + (1/(1-alpha_cap)) sum_{j<k} delta_j
/// with additive slack 1e-8 (1 + h_0).
BoundCheck check_telescoped_bound(const DistanceSequences& seq, double alpha_cap);

/// Direct progress inequality at each iteration:
/// ||ref - p_hat_k||^2 - ||ref - p_{k+1}||^2 >= tau(1-tau)(1-sigma)^2 ||p_tilde_k - p_hat_k||^2 - slack.
BoundCheck check_fejer_descent(const RunResult& result, const PrimalDualPoint& reference,
                               const AdmmConfig& cfg, const LinearOp& op);

}  // namespace iadmm
