#pragma once

#include <Eigen/Dense>

#include <vector>

#include "iadmm/spaces.hpp"

namespace iadmm {

/// Independently certified minimizer of nu ||x||_1 + 0.5 ||Ax - b||^2.
struct OracleSolution {
    Vec x;
    double objective = 0.0;
    long iterations = 0;
};

double lasso_objective(const Eigen::MatrixXd& A, const Vec& b, double nu, const Vec& x);

/// Exhaustive search over sign patterns of the solution, limited to 12
/// columns. Each candidate pattern is solved on its support and kept only
/// if the full optimality conditions certify it. Falls back to the
/// iterative solver when no pattern certifies (rank-deficient supports).
OracleSolution lasso_support_enum(const Eigen::MatrixXd& A, const Vec& b, double nu);

/// Accelerated proximal-gradient solver run until the stopping residual
/// drops below tol. Periodically tries a direct solve on the current
/// support, which is kept only when it certifies at the same tolerance.
OracleSolution lasso_fista(const Eigen::MatrixXd& A, const Vec& b, double nu, double tol,
                           long max_iters = 2000000);

/// Solution-set member built from a certified minimizer x: the pair
/// (A'(Ax - b), x) together with the optimality residual at x.
struct ReferencePoint {
    PrimalDualPoint p;
    Vec x;
    double certified_residual = 0.0;
};

/// Certifies x_star to residual 1e-10 and packages the reference pair;
/// throws (naming the worst component) when certification fails.
ReferencePoint reference_point(const Eigen::MatrixXd& A, const Vec& b, double nu, const Vec& x_star);

struct ClassicIterate {
    Vec x;
    Vec y;
    Vec z;
};

/// Classical alternating scheme for the same problem: soft-threshold step in
/// x, direct normal-equations solve in y, multiplier step
/// z <- z + gamma (x - y). Used as the ground truth the relaxed update must
/// reproduce when extrapolation and relaxation are switched off.
std::vector<ClassicIterate> standard_admm_reference(const Eigen::MatrixXd& A, const Vec& b, double nu,
                                                    double gamma, int iters, const Vec& y0, const Vec& z0);

}  // namespace iadmm
