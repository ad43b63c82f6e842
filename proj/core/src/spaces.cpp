#include "iadmm/spaces.hpp"

#include <cmath>
#include <utility>

namespace iadmm {

namespace {

void require_same_dim(const char* context, Eigen::Index a, Eigen::Index b) {
    if (a != b) throw DimensionError(context, a, b);
}

}  // namespace

DimensionError::DimensionError(const std::string& context, Eigen::Index lhs_dim, Eigen::Index rhs_dim)
    : std::invalid_argument(context + ": dimension mismatch (" + std::to_string(lhs_dim) + " vs " +
                            std::to_string(rhs_dim) + ")"),
      lhs(lhs_dim),
      rhs(rhs_dim) {}

Vec::Vec(Eigen::VectorXd values) : v_(std::move(values)) {
    if (v_.allFinite()) return;
    for (Eigen::Index i = 0; i < v_.size(); ++i) {
        if (!std::isfinite(v_(i))) {
            throw std::invalid_argument("Vec: non-finite entry at index " + std::to_string(i));
        }
    }
}

Vec Vec::zeros(Eigen::Index dim) { return Vec(Eigen::VectorXd::Zero(dim)); }

double Vec::dot(const Vec& other) const {
    require_same_dim("Vec::dot", dim(), other.dim());
    return v_.dot(other.v_);
}

Vec operator+(const Vec& a, const Vec& b) {
    require_same_dim("Vec::operator+", a.dim(), b.dim());
    return Vec(a.data() + b.data());
}

Vec operator-(const Vec& a, const Vec& b) {
    require_same_dim("Vec::operator-", a.dim(), b.dim());
    return Vec(a.data() - b.data());
}

Vec operator*(double s, const Vec& a) { return Vec(s * a.data()); }

Vec operator-(const Vec& a) { return Vec(-a.data()); }

LinearOp::LinearOp(bool identity, Eigen::Index in, Eigen::Index out, Eigen::MatrixXd m)
    : identity_(identity), in_(in), out_(out), m_(std::move(m)) {}

LinearOp LinearOp::identity(Eigen::Index dim) {
    if (dim < 0) throw ConfigError("LinearOp::identity: negative dimension");
    return LinearOp(true, dim, dim, Eigen::MatrixXd());
}

LinearOp LinearOp::dense(Eigen::MatrixXd matrix) {
    if (!matrix.allFinite()) throw std::invalid_argument("LinearOp::dense: non-finite entry");
    const Eigen::Index in = matrix.cols();
    const Eigen::Index out = matrix.rows();
    return LinearOp(false, in, out, std::move(matrix));
}

Vec LinearOp::apply(const Vec& x) const {
    require_same_dim("LinearOp::apply", x.dim(), in_);
    if (identity_) return x;
    return Vec(m_ * x.data());
}

Vec LinearOp::adjoint(const Vec& u) const {
    require_same_dim("LinearOp::adjoint", u.dim(), out_);
    if (identity_) return u;
    return Vec(m_.transpose() * u.data());
}

GammaMetric::GammaMetric(double gamma_value) : gamma(gamma_value) {
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw ConfigError("GammaMetric: gamma must be finite and positive, got " + std::to_string(gamma));
    }
}

PrimalDualPoint::PrimalDualPoint(Vec z_block, Vec w_block) : z(std::move(z_block)), w(std::move(w_block)) {
    require_same_dim("PrimalDualPoint", z.dim(), w.dim());
}

PrimalDualPoint operator+(const PrimalDualPoint& p, const PrimalDualPoint& q) {
    return PrimalDualPoint(p.z + q.z, p.w + q.w);
}

PrimalDualPoint operator-(const PrimalDualPoint& p, const PrimalDualPoint& q) {
    return PrimalDualPoint(p.z - q.z, p.w - q.w);
}

PrimalDualPoint operator*(double s, const PrimalDualPoint& p) { return PrimalDualPoint(s * p.z, s * p.w); }

double gamma_inner(const PrimalDualPoint& p, const PrimalDualPoint& q, const GammaMetric& m) {
    require_same_dim("gamma_inner", p.dim(), q.dim());
    return p.z.dot(q.z) / m.gamma + m.gamma * p.w.dot(q.w);
}

double gamma_norm_sq(const PrimalDualPoint& p, const GammaMetric& m) {
    return p.z.norm_sq() / m.gamma + m.gamma * p.w.norm_sq();
}

double gamma_norm(const PrimalDualPoint& p, const GammaMetric& m) { return std::sqrt(gamma_norm_sq(p, m)); }

}  // namespace iadmm
