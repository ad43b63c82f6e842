#include "iadmm/inner.hpp"

#include <cmath>
#include <utility>

namespace iadmm {

InnerSolveError::InnerSolveError(const std::string& message, double residual_norm, int iter_count)
    : std::runtime_error(message), last_residual_norm(residual_norm), iters(iter_count) {}

bool check_sigma(const Vec& e, double eps, const GammaMetric& m, double sigma,
                 double lx_minus_yhat_sq, double v_minus_zhat_sq) {
    if (sigma < 0.0 || sigma >= 1.0) throw ConfigError("check_sigma: sigma must lie in [0, 1)");
    if (eps < 0.0) throw ConfigError("check_sigma: eps must be nonnegative");
    const double gamma = m.gamma;
    const double bound =
        sigma * sigma * std::min(gamma * gamma * lx_minus_yhat_sq, v_minus_zhat_sq);
    return e.norm_sq() + 2.0 * gamma * eps <= bound;
}

QuadraticLeastSquares::QuadraticLeastSquares(Eigen::MatrixXd A, Vec b_rhs)
    : A_(std::move(A)), b_(std::move(b_rhs)) {
    if (A_.rows() != b_.dim()) throw DimensionError("QuadraticLeastSquares", A_.rows(), b_.dim());
    if (!A_.allFinite()) throw std::invalid_argument("QuadraticLeastSquares: non-finite entry in A");
    gram_ = A_.transpose() * A_;
    atb_ = Vec(A_.transpose() * b_.data());
}

double QuadraticLeastSquares::value(const Vec& y) const {
    if (y.dim() != dim()) throw DimensionError("QuadraticLeastSquares::value", y.dim(), dim());
    return 0.5 * (A_ * y.data() - b_.data()).squaredNorm();
}

Vec QuadraticLeastSquares::gradient(const Vec& y) const {
    if (y.dim() != dim()) throw DimensionError("QuadraticLeastSquares::gradient", y.dim(), dim());
    return Vec(A_.transpose() * (A_ * y.data() - b_.data()));
}

Vec QuadraticLeastSquares::normal_apply(const Vec& p) const {
    if (p.dim() != dim()) throw DimensionError("QuadraticLeastSquares::normal_apply", p.dim(), dim());
    return Vec(gram_ * p.data());
}

namespace {

Vec equation_residual(const Vec& v, const Vec& z_hat, const Vec& y, const Vec& lx, double gamma) {
    return Vec(v.data() - z_hat.data() + gamma * (y.data() - lx.data()));
}

}  // namespace

ApproxSolution exact_inner_solve(const QuadraticLeastSquares& g, const Vec& lx, const Vec& z_hat,
                                 const GammaMetric& m) {
    const Eigen::Index d = g.dim();
    if (lx.dim() != d) throw DimensionError("exact_inner_solve", lx.dim(), d);
    if (z_hat.dim() != d) throw DimensionError("exact_inner_solve", z_hat.dim(), d);
    const double gamma = m.gamma;

    Eigen::MatrixXd M = g.A().transpose() * g.A();
    M.diagonal().array() += gamma;
    const Eigen::VectorXd rhs = g.normal_rhs().data() + z_hat.data() + gamma * lx.data();
    Vec y(Eigen::LLT<Eigen::MatrixXd>(M).solve(rhs));

    ApproxSolution out;
    out.v = Vec(z_hat.data() + gamma * (lx.data() - y.data()));
    out.e = Vec::zeros(d);
    out.eps = 0.0;
    out.inner_iters = 0;
    out.y_tilde = std::move(y);
    return out;
}

ApproxSolution cg_inner_solve(const QuadraticLeastSquares& g, const Vec& lx, const Vec& z_hat,
                              const Vec& y_hat, const GammaMetric& m, double sigma, int max_iters,
                              const std::optional<Vec>& warm_start) {
    const Eigen::Index d = g.dim();
    if (lx.dim() != d) throw DimensionError("cg_inner_solve", lx.dim(), d);
    if (z_hat.dim() != d) throw DimensionError("cg_inner_solve", z_hat.dim(), d);
    if (y_hat.dim() != d) throw DimensionError("cg_inner_solve", y_hat.dim(), d);
    if (!(sigma > 0.0) || sigma >= 1.0) throw ConfigError("cg_inner_solve: sigma must lie in (0, 1)");
    if (max_iters < 0) throw ConfigError("cg_inner_solve: negative iteration budget");
    const double gamma = m.gamma;

    const double fixed_arm = gamma * gamma * (lx - y_hat).norm_sq();
    if (fixed_arm == 0.0) {
        // Acceptance threshold is identically zero; only the exact solution
        // can be certified.
        return exact_inner_solve(g, lx, z_hat, m);
    }

    Vec y = warm_start.has_value() ? *warm_start : y_hat;
    if (y.dim() != d) throw DimensionError("cg_inner_solve: warm start", y.dim(), d);

    const auto certify = [&](const Vec& candidate, int iters) -> std::optional<ApproxSolution> {
        Vec v = g.gradient(candidate);
        Vec e = equation_residual(v, z_hat, candidate, lx, gamma);
        const double moving_arm = (v - z_hat).norm_sq();
        if (check_sigma(e, 0.0, m, sigma, (lx - y_hat).norm_sq(), moving_arm)) {
            ApproxSolution out;
            out.y_tilde = candidate;
            out.v = std::move(v);
            out.eps = 0.0;
            out.e = std::move(e);
            out.inner_iters = iters;
            return out;
        }
        return std::nullopt;
    };

    if (auto done = certify(y, 0)) return *done;

    // Conjugate gradients on (A'A + gamma I) y = A'b + z_hat + gamma Lx.
    // The negative equation residual is exactly the linear-system residual,
    // so the recomputed certificate doubles as the CG residual.
    Vec r(-(equation_residual(g.gradient(y), z_hat, y, lx, gamma)).data());
    Vec p = r;
    double rs = r.norm_sq();
    double last_residual = std::sqrt(rs);

    for (int iter = 1; iter <= max_iters; ++iter) {
        if (rs == 0.0) break;
        const Vec Mp = Vec(g.normal_apply(p).data() + gamma * p.data());
        const double curvature = p.dot(Mp);
        if (curvature <= 0.0) {
            throw InnerSolveError("cg_inner_solve: lost positive definiteness", last_residual, iter);
        }
        const double step = rs / curvature;
        y = Vec(y.data() + step * p.data());

        if (auto done = certify(y, iter)) return *done;

        const Vec r_next(-(equation_residual(g.gradient(y), z_hat, y, lx, gamma)).data());
        const double rs_next = r_next.norm_sq();
        p = Vec(r_next.data() + (rs_next / rs) * p.data());
        r = r_next;
        rs = rs_next;
        last_residual = std::sqrt(rs);
    }

    throw InnerSolveError("cg_inner_solve: no certified iterate within budget", last_residual, max_iters);
}

SecondBlock SecondBlock::least_squares(Eigen::MatrixXd A, Vec b) {
    SecondBlock out;
    out.quadratic_.emplace(std::move(A), std::move(b));
    out.dim_ = out.quadratic_->dim();
    return out;
}

SecondBlock SecondBlock::custom(CustomSolver solver, Eigen::Index dim) {
    if (!solver) throw ConfigError("SecondBlock::custom: empty solver");
    if (dim <= 0) throw ConfigError("SecondBlock::custom: dimension must be positive");
    SecondBlock out;
    out.custom_ = std::move(solver);
    out.dim_ = dim;
    return out;
}

const QuadraticLeastSquares& SecondBlock::quadratic() const {
    if (!quadratic_) throw std::logic_error("SecondBlock::quadratic: custom block");
    return *quadratic_;
}

double SecondBlock::value(const Vec& y) const {
    if (!quadratic_) throw std::logic_error("SecondBlock::value: custom block has no objective");
    return quadratic_->value(y);
}

ApproxSolution SecondBlock::solve(const InnerRequest& request) const {
    if (custom_) return custom_(request);
    if (request.sigma == 0.0) {
        return exact_inner_solve(*quadratic_, request.lx, request.z_hat, request.metric);
    }
    return cg_inner_solve(*quadratic_, request.lx, request.z_hat, request.y_hat, request.metric,
                          request.sigma, request.max_iters, request.warm_start);
}

}  // namespace iadmm
