#include "iadmm/prox.hpp"

#include <cmath>
#include <utility>

namespace iadmm {

Vec soft_threshold(const Vec& u, double kappa) {
    if (!(kappa >= 0.0)) throw ConfigError("soft_threshold: threshold must be nonnegative");
    Eigen::VectorXd out(u.dim());
    for (Eigen::Index i = 0; i < u.dim(); ++i) {
        const double mag = std::abs(u[i]) - kappa;
        out(i) = mag > 0.0 ? (u[i] > 0.0 ? mag : -mag) : 0.0;
    }
    return Vec(std::move(out));
}

FirstBlock::FirstBlock(Kind kind, double nu, Eigen::MatrixXd Q, Vec c)
    : kind_(kind), nu_(nu), Q_(std::move(Q)), c_(std::move(c)) {}

FirstBlock FirstBlock::l1(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("FirstBlock::l1: nu must be positive");
    return FirstBlock(Kind::l1, nu, Eigen::MatrixXd(), Vec());
}

FirstBlock FirstBlock::quadratic(Eigen::MatrixXd Q, Vec c) {
    if (Q.rows() != Q.cols()) throw DimensionError("FirstBlock::quadratic", Q.rows(), Q.cols());
    if (Q.rows() != c.dim()) throw DimensionError("FirstBlock::quadratic", Q.rows(), c.dim());
    if (!Q.allFinite()) throw std::invalid_argument("FirstBlock::quadratic: non-finite entry in Q");
    if (!Q.isApprox(Q.transpose())) throw ConfigError("FirstBlock::quadratic: Q must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(Q);
    if (llt.info() != Eigen::Success) throw ConfigError("FirstBlock::quadratic: Q must be positive definite");
    return FirstBlock(Kind::quadratic, 0.0, std::move(Q), std::move(c));
}

double FirstBlock::nu() const {
    if (kind_ != Kind::l1) throw std::logic_error("FirstBlock::nu: not an l1 objective");
    return nu_;
}

Vec FirstBlock::solve(const Vec& z_hat, const Vec& y_hat, const GammaMetric& m) const {
    if (z_hat.dim() != y_hat.dim()) throw DimensionError("FirstBlock::solve", z_hat.dim(), y_hat.dim());
    const double gamma = m.gamma;
    if (kind_ == Kind::l1) {
        const Vec shifted = y_hat - (1.0 / gamma) * z_hat;
        return soft_threshold(shifted, nu_ / gamma);
    }
    if (Q_.rows() != z_hat.dim()) throw DimensionError("FirstBlock::solve", Q_.rows(), z_hat.dim());
    Eigen::MatrixXd M = Q_;
    M.diagonal().array() += gamma;
    const Eigen::VectorXd rhs = gamma * y_hat.data() - z_hat.data() - c_.data();
    return Vec(Eigen::LLT<Eigen::MatrixXd>(M).solve(rhs));
}

double FirstBlock::value(const Vec& x) const {
    if (kind_ == Kind::l1) return nu_ * x.data().lpNorm<1>();
    if (Q_.rows() != x.dim()) throw DimensionError("FirstBlock::value", Q_.rows(), x.dim());
    return 0.5 * x.data().dot(Q_ * x.data()) + c_.dot(x);
}

double FirstBlock::certificate_gap(const Vec& x, const Vec& z_prime) const {
    if (x.dim() != z_prime.dim()) throw DimensionError("FirstBlock::certificate_gap", x.dim(), z_prime.dim());
    if (kind_ == Kind::quadratic) {
        if (Q_.rows() != x.dim()) throw DimensionError("FirstBlock::certificate_gap", Q_.rows(), x.dim());
        // Smooth case: the subgradient is the gradient, -z_prime = Qx + c.
        return (Q_ * x.data() + c_.data() + z_prime.data()).cwiseAbs().maxCoeff();
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.dim(); ++i) {
        double gap;
        if (x[i] == 0.0) {
            gap = std::max(std::abs(z_prime[i]) - nu_, 0.0);
        } else {
            const double sign = x[i] > 0.0 ? 1.0 : -1.0;
            gap = std::abs(z_prime[i] + nu_ * sign);
        }
        worst = std::max(worst, gap);
    }
    return worst;
}

}  // namespace iadmm
