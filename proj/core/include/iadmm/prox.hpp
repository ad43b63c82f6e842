#pragma once

#include <Eigen/Dense>

#include "iadmm/spaces.hpp"

namespace iadmm {

/// Componentwise shrinkage: sign(u_i) * max(|u_i| - kappa, 0).
Vec soft_threshold(const Vec& u, double kappa);

/// First-block objective together with a closed-form minimizer of the
/// augmented subproblem. Supports a weighted l1 norm and a convex
/// quadratic; both assume the identity coupling operator.
class FirstBlock {
  public:
    /// f(x) = nu * ||x||_1 with nu > 0.
    static FirstBlock l1(double nu);

    /// f(x) = 0.5 x'Qx + c'x with Q symmetric positive definite.
    static FirstBlock quadratic(Eigen::MatrixXd Q, Vec c);

    /// Minimizer of f(x) + <z_hat, x - y_hat> + (gamma/2)||x - y_hat||^2.
    Vec solve(const Vec& z_hat, const Vec& y_hat, const GammaMetric& m) const;

    double value(const Vec& x) const;

    /// Largest componentwise violation of -z_prime being a subgradient of f
    /// at x. Zero (up to rounding) whenever x came from solve().
    double certificate_gap(const Vec& x, const Vec& z_prime) const;

    bool is_l1() const { return kind_ == Kind::l1; }
    double nu() const;

  private:
    enum class Kind { l1, quadratic };

    FirstBlock(Kind kind, double nu, Eigen::MatrixXd Q, Vec c);

    Kind kind_;
    double nu_ = 0.0;
    Eigen::MatrixXd Q_;
    Vec c_;
};

}  // namespace iadmm
