#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>

#include "iadmm/spaces.hpp"

namespace iadmm {

/// Inexact solution of the second-block subproblem together with its
/// certificate: candidate y_tilde, subgradient v of g at y_tilde up to
/// slack eps, and the equation residual e = v - z_hat + gamma(y_tilde - Lx).
struct ApproxSolution {
    Vec y_tilde;
    Vec v;
    double eps = 0.0;
    Vec e;
    int inner_iters = 0;
};

/// Thrown when an inner solver exhausts its iteration budget without
/// producing a certified solution.
struct InnerSolveError : std::runtime_error {
    InnerSolveError(const std::string& message, double residual_norm, int iters);

    double last_residual_norm;
    int iters;
    int outer_iteration = -1;
};

/// Relative-error acceptance test
///   ||e||^2 + 2 gamma eps <= sigma^2 min{gamma^2 ||Lx - y_hat||^2, ||v - z_hat||^2}.
/// Callers pass the two squared norms so the same arithmetic can be replayed
/// when certificates are re-audited later.
bool check_sigma(const Vec& e, double eps, const GammaMetric& m, double sigma,
                 double lx_minus_yhat_sq, double v_minus_zhat_sq);

/// Second-block objective g(y) = 0.5 ||Ay - b||^2 with the pieces the inner
/// solvers need: the gradient, the normal matrix A'A + gamma I applied to a
/// vector, and the constant part A'b of the optimality system.
class QuadraticLeastSquares {
  public:
    QuadraticLeastSquares(Eigen::MatrixXd A, Vec b);

    Eigen::Index dim() const { return A_.cols(); }
    const Eigen::MatrixXd& A() const { return A_; }
    const Vec& b() const { return b_; }

    double value(const Vec& y) const;
    /// A'(Ay - b), evaluated through A so certificates reproduce bitwise.
    Vec gradient(const Vec& y) const;
    /// (A'A) p via the cached normal matrix.
    Vec normal_apply(const Vec& p) const;
    const Vec& normal_rhs() const { return atb_; }

  private:
    Eigen::MatrixXd A_;
    Vec b_;
    Eigen::MatrixXd gram_;
    Vec atb_;
};

/// Conjugate-gradient solver for the regularized normal equations
///   (A'A + gamma I) y = A'b + z_hat + gamma Lx,
/// stopped at the first iterate whose certificate passes check_sigma.
/// The subgradient v = A'(Ay - b) and the residual e are recomputed from
/// scratch at every iterate, so the returned certificate is exactly what a
/// later audit recomputes. Requires sigma in (0,1); when the acceptance
/// threshold is identically zero the solve is delegated to
/// exact_inner_solve, since only the exact solution can then qualify.
ApproxSolution cg_inner_solve(const QuadraticLeastSquares& g, const Vec& lx, const Vec& z_hat,
                              const Vec& y_hat, const GammaMetric& m, double sigma, int max_iters,
                              const std::optional<Vec>& warm_start = std::nullopt);

/// Direct factorization of the same optimality system. The certificate is
/// exact by construction: v is derived from the equation as
/// v = z_hat + gamma(Lx - y_tilde), which pins e to zero, and the rounding
/// error of the solve is carried by v instead (it stays within the backward
/// error of the factorization of the gradient relation v = A'(Ay - b)).
ApproxSolution exact_inner_solve(const QuadraticLeastSquares& g, const Vec& lx, const Vec& z_hat,
                                 const GammaMetric& m);

/// Inputs handed to a second-block solver for one outer iteration.
struct InnerRequest {
    Vec lx;
    Vec z_hat;
    Vec y_hat;
    GammaMetric metric{1.0};
    double sigma = 0.0;
    int max_iters = 0;
    std::optional<Vec> warm_start;
};

/// Second block of the splitting: either least squares solved by the
/// solvers above, or a user-supplied routine (used to exercise certificates
/// with nonzero eps).
class SecondBlock {
  public:
    using CustomSolver = std::function<ApproxSolution(const InnerRequest&)>;

    static SecondBlock least_squares(Eigen::MatrixXd A, Vec b);
    static SecondBlock custom(CustomSolver solver, Eigen::Index dim);

    ApproxSolution solve(const InnerRequest& request) const;
    double value(const Vec& y) const;

    Eigen::Index dim() const { return dim_; }
    bool is_least_squares() const { return static_cast<bool>(quadratic_); }
    const QuadraticLeastSquares& quadratic() const;

  private:
    SecondBlock() = default;

    std::optional<QuadraticLeastSquares> quadratic_;
    CustomSolver custom_;
    Eigen::Index dim_ = 0;
};

}  // namespace iadmm
