#include "iadmm/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "iadmm/admm.hpp"
#include "iadmm/prox.hpp"

namespace iadmm {

namespace {

void check_lasso_inputs(const Eigen::MatrixXd& A, const Vec& b, double nu, const char* who) {
    if (A.rows() != b.dim()) {
        throw DimensionError(std::string(who) + ": rows of A vs b", A.rows(), b.dim());
    }
    if (A.rows() == 0 || A.cols() == 0) {
        throw ConfigError(std::string(who) + ": empty design matrix");
    }
    if (!A.allFinite()) {
        throw ConfigError(std::string(who) + ": design matrix has non-finite entries");
    }
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw ConfigError(std::string(who) + ": nu must be positive and finite");
    }
}

// Largest eigenvalue of a symmetric PSD matrix, overestimated slightly so it
// is safe as a gradient Lipschitz constant.
double spectral_bound(const Eigen::MatrixXd& G) {
    const Eigen::Index d = G.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(d);
    v.normalize();
    double rayleigh = 0.0;
    for (int it = 0; it < 120; ++it) {
        Eigen::VectorXd w = G * v;
        const double norm = w.norm();
        if (norm == 0.0) {
            break;
        }
        v = w / norm;
        rayleigh = std::max(rayleigh, v.dot(G * v));
    }
    return std::max(rayleigh * 1.05, 1e-12);
}

std::vector<Eigen::Index> support_of(const Eigen::VectorXd& x, double cutoff) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) > cutoff) {
            idx.push_back(i);
        }
    }
    return idx;
}

// Solves the optimality system restricted to a support with fixed signs and
// verifies the result certifies for the full problem. Returns false when the
// restricted system is singular, a sign flips, or an off-support condition
// fails.
bool certify_support(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double nu,
                     const Eigen::MatrixXd& G, const Eigen::VectorXd& atb,
                     const std::vector<Eigen::Index>& sup, const std::vector<double>& signs,
                     double slack, Eigen::VectorXd& out) {
    const Eigen::Index m = static_cast<Eigen::Index>(sup.size());
    Eigen::MatrixXd gss(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            gss(r, c) = G(sup[static_cast<std::size_t>(r)], sup[static_cast<std::size_t>(c)]);
        }
        rhs[r] = atb[sup[static_cast<std::size_t>(r)]] - nu * signs[static_cast<std::size_t>(r)];
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gss);
    if (ldlt.info() != Eigen::Success) {
        return false;
    }
    const Eigen::VectorXd xs = ldlt.solve(rhs);
    if (!xs.allFinite() || (gss * xs - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) {
        return false;
    }
    for (Eigen::Index r = 0; r < m; ++r) {
        if (xs[r] * signs[static_cast<std::size_t>(r)] <= 0.0) {
            return false;
        }
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
    for (Eigen::Index r = 0; r < m; ++r) {
        x[sup[static_cast<std::size_t>(r)]] = xs[r];
    }
    const Eigen::VectorXd grad = A.transpose() * (A * x - b);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (x[j] != 0.0) {
            if (std::abs(grad[j] + nu * ((x[j] > 0.0) ? 1.0 : -1.0)) > slack) {
                return false;
            }
        } else if (std::abs(grad[j]) > nu + slack) {
            return false;
        }
    }
    out = std::move(x);
    return true;
}

}  // namespace

double lasso_objective(const Eigen::MatrixXd& A, const Vec& b, double nu, const Vec& x) {
    check_lasso_inputs(A, b, nu, "lasso_objective");
    if (x.dim() != A.cols()) {
        throw DimensionError("lasso_objective: cols of A vs x", A.cols(), x.dim());
    }
    const Eigen::VectorXd r = A * x.data() - b.data();
    return nu * x.data().lpNorm<1>() + 0.5 * r.squaredNorm();
}

OracleSolution lasso_support_enum(const Eigen::MatrixXd& A, const Vec& b, double nu) {
    check_lasso_inputs(A, b, nu, "lasso_support_enum");
    const Eigen::Index d = A.cols();
    if (d > 12) {
        throw ConfigError("lasso_support_enum: supports at most 12 columns, got " + std::to_string(d));
    }
    const Eigen::MatrixXd G = A.transpose() * A;
    const Eigen::VectorXd atb = A.transpose() * b.data();
    const double slack = 1e-10 * (1.0 + atb.lpNorm<Eigen::Infinity>());

    // Base-3 counter over per-column states {zero, positive, negative},
    // scanned in lexicographic order so the certified answer is reproducible.
    std::vector<int> digit(static_cast<std::size_t>(d), 0);
    long patterns = 0;
    while (true) {
        ++patterns;
        std::vector<Eigen::Index> sup;
        std::vector<double> signs;
        for (Eigen::Index j = 0; j < d; ++j) {
            const int s = digit[static_cast<std::size_t>(j)];
            if (s != 0) {
                sup.push_back(j);
                signs.push_back(s == 1 ? 1.0 : -1.0);
            }
        }
        if (sup.empty()) {
            if (atb.lpNorm<Eigen::Infinity>() <= nu + slack) {
                Vec x = Vec::zeros(d);
                return {x, lasso_objective(A, b, nu, x), patterns};
            }
        } else if (static_cast<Eigen::Index>(sup.size()) <= std::min(A.rows(), d)) {
            Eigen::VectorXd x;
            if (certify_support(A, b.data(), nu, G, atb, sup, signs, slack, x)) {
                Vec xv(x);
                return {xv, lasso_objective(A, b, nu, xv), patterns};
            }
        }

        Eigen::Index pos = d - 1;
        while (pos >= 0 && digit[static_cast<std::size_t>(pos)] == 2) {
            digit[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++digit[static_cast<std::size_t>(pos)];
    }
    // Every sign pattern failed (possible with exactly collinear columns);
    // defer to the iterative solver.
    return lasso_fista(A, b, nu, 1e-11);
}

OracleSolution lasso_fista(const Eigen::MatrixXd& A, const Vec& b, double nu, double tol, long max_iters) {
    check_lasso_inputs(A, b, nu, "lasso_fista");
    if (!(tol > 0.0)) {
        throw ConfigError("lasso_fista: tol must be positive");
    }
    if (max_iters < 1) {
        throw ConfigError("lasso_fista: max_iters must be at least 1");
    }
    const Eigen::Index d = A.cols();
    const Eigen::MatrixXd G = A.transpose() * A;
    const Eigen::VectorXd atb = A.transpose() * b.data();
    const double step = 1.0 / spectral_bound(G);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd y = x;
    double t = 1.0;
    const double sign_slack = 1e-10 * (1.0 + atb.lpNorm<Eigen::Infinity>());

    for (long k = 1; k <= max_iters; ++k) {
        const Eigen::VectorXd grad = G * y - atb;
        const Vec x_new = soft_threshold(Vec(y - step * grad), nu * step);
        const double res = stopping_residual_lasso(x_new, A, b, nu);
        if (res <= tol) {
            return {x_new, lasso_objective(A, b, nu, x_new), k};
        }

        if (k % 25 == 0) {
            // Direct solve on the current support; accepted only when it
            // certifies at the requested tolerance.
            const auto sup = support_of(x_new.data(), 0.0);
            if (!sup.empty() && static_cast<Eigen::Index>(sup.size()) <= std::min(A.rows(), d)) {
                std::vector<double> signs;
                signs.reserve(sup.size());
                for (const auto j : sup) {
                    signs.push_back(x_new[j] > 0.0 ? 1.0 : -1.0);
                }
                Eigen::VectorXd polished;
                if (certify_support(A, b.data(), nu, G, atb, sup, signs, sign_slack, polished)) {
                    Vec xp(polished);
                    if (stopping_residual_lasso(xp, A, b, nu) <= tol) {
                        return {xp, lasso_objective(A, b, nu, xp), k};
                    }
                }
            }
        }

        // Gradient-based adaptive restart.
        const Eigen::VectorXd dx = x_new.data() - x;
        if ((y - x_new.data()).dot(dx) > 0.0) {
            t = 1.0;
            y = x_new.data();
        } else {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            y = x_new.data() + ((t - 1.0) / t_next) * dx;
            t = t_next;
        }
        x = x_new.data();
    }
    throw std::runtime_error("lasso_fista: residual tolerance not reached within iteration budget");
}

ReferencePoint reference_point(const Eigen::MatrixXd& A, const Vec& b, double nu, const Vec& x_star) {
    check_lasso_inputs(A, b, nu, "reference_point");
    if (x_star.dim() != A.cols()) {
        throw DimensionError("reference_point: cols of A vs x_star", A.cols(), x_star.dim());
    }
    const double res = stopping_residual_lasso(x_star, A, b, nu);
    if (!(res <= 1e-10)) {
        // Name the worst component so a bad candidate is easy to inspect.
        const Eigen::VectorXd grad = A.transpose() * (A * x_star.data() - b.data());
        Eigen::Index worst = 0;
        double worst_gap = -1.0;
        for (Eigen::Index i = 0; i < x_star.dim(); ++i) {
            double gap;
            if (x_star[i] != 0.0) {
                gap = std::abs(grad[i] + nu * ((x_star[i] > 0.0) ? 1.0 : -1.0));
            } else {
                gap = std::max(std::abs(grad[i]) - nu, 0.0);
            }
            if (gap > worst_gap) {
                worst_gap = gap;
                worst = i;
            }
        }
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "reference_point: candidate fails optimality at component %ld (gap %.3e, tolerance 1e-10)",
                      static_cast<long>(worst), worst_gap);
        throw std::runtime_error(msg);
    }
    Vec z_star(A.transpose() * (A * x_star.data() - b.data()));
    return {PrimalDualPoint(z_star, x_star), x_star, res};
}

std::vector<ClassicIterate> standard_admm_reference(const Eigen::MatrixXd& A, const Vec& b, double nu,
                                                    double gamma, int iters, const Vec& y0, const Vec& z0) {
    check_lasso_inputs(A, b, nu, "standard_admm_reference");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ConfigError("standard_admm_reference: gamma must be positive and finite");
    }
    if (iters < 0) {
        throw ConfigError("standard_admm_reference: iters must be nonnegative");
    }
    const Eigen::Index d = A.cols();
    if (y0.dim() != d || z0.dim() != d) {
        throw DimensionError("standard_admm_reference: cols of A vs start point",
                             d, y0.dim() != d ? y0.dim() : z0.dim());
    }
    Eigen::MatrixXd M = A.transpose() * A;
    M.diagonal().array() += gamma;
    const Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
        throw ConfigError("standard_admm_reference: normal system is not positive definite");
    }
    const Eigen::VectorXd atb = A.transpose() * b.data();

    std::vector<ClassicIterate> out;
    out.reserve(static_cast<std::size_t>(iters));
    Vec y = y0;
    Vec z = z0;
    for (int k = 0; k < iters; ++k) {
        const Vec x = soft_threshold(Vec(y.data() - (1.0 / gamma) * z.data()), nu / gamma);
        const Vec y_next(llt.solve(atb + z.data() + gamma * x.data()));
        const Vec z_next(z.data() + gamma * (x.data() - y_next.data()));
        out.push_back({x, y_next, z_next});
        y = y_next;
        z = z_next;
    }
    return out;
}

}  // namespace iadmm
