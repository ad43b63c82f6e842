#include "iadmm/admm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

namespace iadmm {

namespace {

double rel_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

double vec_gap(const Vec& stored, const Vec& recomputed) {
    return (stored - recomputed).norm() / (1.0 + recomputed.norm());
}

}  // namespace

InvariantViolation::InvariantViolation(const std::string& message, int iter)
    : std::runtime_error("iteration " + std::to_string(iter) + ": " + message), iteration(iter) {}

InertialRule InertialRule::constant() { return InertialRule{InertialKind::constant, 0.99, 1, nullptr}; }

InertialRule InertialRule::summability(double theta, int k0) {
    return InertialRule{InertialKind::summability, theta, k0, nullptr};
}

InertialRule InertialRule::below_beta() { return InertialRule{InertialKind::below_beta, 0.99, 1, nullptr}; }

InertialRule InertialRule::below_beta_schedule(std::function<double(int)> schedule) {
    return InertialRule{InertialKind::below_beta, 0.99, 1, std::move(schedule)};
}

BetaBound beta_bound(double sigma, double tau) {
    if (!(sigma >= 0.0 && sigma < 1.0)) throw ConfigError("beta_bound: sigma must lie in [0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("beta_bound: tau must lie in (0, 1)");
    const double eta = (1.0 - tau) * (1.0 - sigma) * (1.0 - sigma) / (4.0 * tau);
    const double beta = 2.0 * eta / (1.0 + 2.0 * eta + std::sqrt(1.0 + 8.0 * eta));
    return {eta, beta};
}

double q_eval(double t, double eta) { return (eta - 1.0) * t * t - (1.0 + 2.0 * eta) * t + eta; }

void AdmmConfig::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("AdmmConfig: alpha must lie in [0, 1)");
    if (!(sigma >= 0.0 && sigma < 1.0)) throw ConfigError("AdmmConfig: sigma must lie in [0, 1)");
    const bool tau_interior = tau > 0.0 && tau < 1.0;
    if (!tau_interior && !(allow_unit_tau && tau == 1.0)) {
        throw ConfigError("AdmmConfig: tau must lie in (0, 1)");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("AdmmConfig: gamma must be positive");
    if (!(tol > 0.0)) throw ConfigError("AdmmConfig: tol must be positive");
    if (max_outer < 1) throw ConfigError("AdmmConfig: max_outer must be at least 1");
    if (max_inner < 0) throw ConfigError("AdmmConfig: max_inner must be nonnegative");
    if (rule.kind == InertialKind::summability) {
        if (!(rule.theta > 0.0 && rule.theta < 1.0)) {
            throw ConfigError("AdmmConfig: summability theta must lie in (0, 1)");
        }
        if (rule.k0 < 1) throw ConfigError("AdmmConfig: summability k0 must be at least 1");
    }
    if (rule.kind == InertialKind::below_beta) {
        const BetaBound bb = beta_bound(sigma, tau);
        if (!(alpha < bb.beta)) {
            throw ConfigError("AdmmConfig: alpha = " + std::to_string(alpha) +
                              " must stay below beta(sigma, tau) = " + std::to_string(bb.beta));
        }
    }
}

Problem Problem::lasso(Eigen::MatrixXd A, Vec b, double nu) {
    const Eigen::Index d = A.cols();
    Eigen::MatrixXd A_res = A;
    Vec b_res = b;
    return Problem{
        FirstBlock::l1(nu), SecondBlock::least_squares(std::move(A), std::move(b)), LinearOp::identity(d),
        [A_res = std::move(A_res), b_res = std::move(b_res), nu](const Vec& x) {
            return stopping_residual_lasso(x, A_res, b_res, nu);
        }};
}

double Problem::objective(const Vec& x) const { return first.value(x) + second.value(op.apply(x)); }

void Problem::validate() const {
    if (!op.is_identity()) {
        throw ConfigError("Problem: the closed-form first-block solvers require the identity coupling");
    }
    if (second.dim() != op.output_dim()) {
        throw DimensionError("Problem: second block vs coupling operator", second.dim(), op.output_dim());
    }
}

Extrapolated extrapolate(const PrimalDualPoint& p, const PrimalDualPoint& p_prev, double alpha_k) {
    if (p.dim() != p_prev.dim()) throw DimensionError("extrapolate", p.dim(), p_prev.dim());
    if (!(alpha_k >= 0.0 && alpha_k < 1.0)) throw ConfigError("extrapolate: alpha_k must lie in [0, 1)");
    Vec z_hat(p.z.data() + alpha_k * (p.z.data() - p_prev.z.data()));
    Vec y_hat(p.w.data() + alpha_k * (p.w.data() - p_prev.w.data()));
    return {std::move(z_hat), std::move(y_hat)};
}

double alpha_summability(int k, const PrimalDualPoint& p, const PrimalDualPoint& p_prev, double alpha,
                         double theta, int k0, const GammaMetric& m) {
    if (k < 1) throw ConfigError("alpha_summability: k must be at least 1");
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("alpha_summability: theta must lie in (0, 1)");
    if (k0 < 1) throw ConfigError("alpha_summability: k0 must be at least 1");
    if (k < k0) return alpha;
    const double displacement = gamma_norm_sq(p - p_prev, m);
    if (displacement == 0.0) return alpha;
    return std::min(alpha, std::pow(theta, k) / displacement);
}

Vec z_prime_point(const Vec& z_hat, const Vec& lx, const Vec& y_hat, double gamma) {
    return Vec(z_hat.data() + gamma * (lx.data() - y_hat.data()));
}

BrevePoint breve_point(const Vec& z_hat, const Vec& lx, const ApproxSolution& approx, double gamma) {
    Vec z(z_hat.data() + gamma * (lx.data() - approx.y_tilde.data()));
    Vec y((1.0 / gamma) * (z_hat.data() + gamma * lx.data() - approx.v.data()));
    return {std::move(z), std::move(y)};
}

NextPoint update(const Vec& z_hat, const Vec& y_hat, const Vec& lx, const ApproxSolution& approx,
                 double tau, double gamma) {
    Vec z(z_hat.data() + tau * gamma * (lx.data() - approx.y_tilde.data()));
    Vec y((1.0 - tau) * y_hat.data() + (tau / gamma) * (z_hat.data() + gamma * lx.data() - approx.v.data()));
    return {std::move(z), std::move(y)};
}

double stopping_residual_lasso(const Vec& x, const Eigen::MatrixXd& A, const Vec& b, double nu) {
    if (A.cols() != x.dim()) throw DimensionError("stopping_residual_lasso: A vs x", A.cols(), x.dim());
    if (A.rows() != b.dim()) throw DimensionError("stopping_residual_lasso: A vs b", A.rows(), b.dim());
    if (!(nu > 0.0)) throw ConfigError("stopping_residual_lasso: nu must be positive");
    const Eigen::VectorXd grad = A.transpose() * (A * x.data() - b.data());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.dim(); ++i) {
        double gap;
        if (x[i] != 0.0) {
            gap = std::abs(grad(i) + (x[i] > 0.0 ? nu : -nu));
        } else {
            gap = std::max(std::abs(grad(i)) - nu, 0.0);
        }
        worst = std::max(worst, gap);
    }
    return worst;
}

RecordDiagnostics diagnose_record(const IterateRecord& rec, const Problem& prob, const AdmmConfig& cfg) {
    const GammaMetric m(cfg.gamma);
    const double gamma = cfg.gamma;
    const Vec lx = prob.op.apply(rec.x);
    const ApproxSolution& a = rec.approx;
    const PrimalDualPoint p_hat(rec.z_hat, rec.y_hat);
    const PrimalDualPoint p_breve(rec.z_breve, rec.y_breve);
    const PrimalDualPoint p_next(rec.z_next, rec.y_next);
    const PrimalDualPoint p_tilde(a.v, lx);

    RecordDiagnostics d;

    const PrimalDualPoint mix = (1.0 - cfg.tau) * p_hat + cfg.tau * p_breve;
    const double mix_scale = 1.0 + gamma_norm(p_next, m) + gamma_norm(p_hat, m) + gamma_norm(p_breve, m);
    d.combination_gap = gamma_norm(p_next - mix, m) / mix_scale;

    const double r = gamma * (lx - a.y_tilde).norm_sq() + (rec.z_prime - a.v).norm_sq() / gamma;
    d.residual_identity_gap = rel_gap(r, gamma_norm_sq(p_breve - p_hat, m));

    const double tilde_breve = gamma_norm_sq(p_tilde - p_breve, m);
    const double split = (a.e.norm_sq() + (a.v - rec.z_hat).norm_sq()) / gamma;
    d.distance_identity_gap = rel_gap(tilde_breve, split);

    const double breve_dist = gamma_norm(p_breve - p_hat, m);
    const double tilde_dist = gamma_norm(p_tilde - p_hat, m);
    d.contraction_excess = std::max(0.0, breve_dist - 2.0 * tilde_dist) / (1.0 + 2.0 * tilde_dist);

    d.certificate_ok =
        check_sigma(a.e, a.eps, m, cfg.sigma, (lx - rec.y_hat).norm_sq(), (a.v - rec.z_hat).norm_sq());

    d.first_block_gap = prob.first.certificate_gap(rec.x, prob.op.adjoint(rec.z_prime));

    const Vec e_readback(a.v.data() - rec.z_hat.data() + gamma * (a.y_tilde.data() - lx.data()));
    const double e_scale =
        1.0 + a.v.norm() + rec.z_hat.norm() + gamma * (a.y_tilde.norm() + lx.norm());
    d.stored_e_gap = (a.e - e_readback).norm() / e_scale;

    const Vec zp = z_prime_point(rec.z_hat, lx, rec.y_hat, gamma);
    const BrevePoint br = breve_point(rec.z_hat, lx, a, gamma);
    const NextPoint nxt = update(rec.z_hat, rec.y_hat, lx, a, cfg.tau, gamma);
    double worst = vec_gap(rec.z_prime, zp);
    worst = std::max(worst, vec_gap(rec.z_breve, br.z));
    worst = std::max(worst, vec_gap(rec.y_breve, br.y));
    worst = std::max(worst, vec_gap(rec.z_next, nxt.z));
    worst = std::max(worst, vec_gap(rec.y_next, nxt.y));
    d.derived_fields_gap = worst;

    return d;
}

void assert_record_invariants(const IterateRecord& rec, const Problem& prob, const AdmmConfig& cfg) {
    const RecordDiagnostics d = diagnose_record(rec, prob, cfg);
    const auto fail = [&](const char* what, double gap, double tol) {
        throw InvariantViolation(std::string(what) + " (gap " + std::to_string(gap) + ", tolerance " +
                                     std::to_string(tol) + ")",
                                 rec.k);
    };
    if (d.combination_gap > 1e-14) fail("update is not the stated convex combination", d.combination_gap, 1e-14);
    if (d.residual_identity_gap > 1e-12) {
        fail("progress residual does not match the corrected-point distance", d.residual_identity_gap, 1e-12);
    }
    if (d.distance_identity_gap > 1e-12) {
        fail("certificate norms do not match the corrected-point gap", d.distance_identity_gap, 1e-12);
    }
    if (d.contraction_excess > 1e-12) fail("corrected step exceeds twice the certified step", d.contraction_excess, 1e-12);
    if (!d.certificate_ok) throw InvariantViolation("inner certificate failed re-audit", rec.k);
    if (d.first_block_gap > 1e-10) fail("first-block optimality violated", d.first_block_gap, 1e-10);
    if (d.stored_e_gap > 1e-14) fail("stored equation residual does not recompute", d.stored_e_gap, 1e-14);
    if (d.derived_fields_gap > 1e-12) fail("derived record fields do not recompute", d.derived_fields_gap, 1e-12);
}

RunResult run(const Problem& prob, const AdmmConfig& cfg) {
    const Eigen::Index gdim = prob.op.output_dim();
    return run(prob, cfg, StartPoint{Vec::zeros(gdim), Vec::zeros(gdim)});
}

RunResult run(const Problem& prob, const AdmmConfig& cfg, const StartPoint& start) {
    cfg.validate();
    prob.validate();
    const GammaMetric m(cfg.gamma);
    const Eigen::Index gdim = prob.op.output_dim();
    if (start.z0.dim() != gdim) throw DimensionError("run: z0", start.z0.dim(), gdim);
    if (start.y0.dim() != gdim) throw DimensionError("run: y0", start.y0.dim(), gdim);

    RunResult out;
    out.z0 = start.z0;
    out.y0 = start.y0;
    out.final_x = Vec::zeros(prob.op.input_dim());
    out.final_residual = std::numeric_limits<double>::quiet_NaN();

    PrimalDualPoint p(start.z0, start.y0);
    PrimalDualPoint p_prev = p;
    std::optional<Vec> warm;
    double schedule_floor = 0.0;

    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < cfg.max_outer; ++k) {
        double alpha_k = cfg.alpha;
        switch (cfg.rule.kind) {
            case InertialKind::constant:
                break;
            case InertialKind::summability:
                alpha_k = k == 0 ? 0.0
                                 : alpha_summability(k, p, p_prev, cfg.alpha, cfg.rule.theta, cfg.rule.k0, m);
                break;
            case InertialKind::below_beta:
                if (cfg.rule.schedule) {
                    alpha_k = std::min(cfg.rule.schedule(k), cfg.alpha);
                    if (!(alpha_k >= 0.0)) throw ConfigError("run: inertial schedule produced a negative weight");
                    if (alpha_k < schedule_floor) {
                        throw InvariantViolation("inertial schedule must be nondecreasing", k);
                    }
                    schedule_floor = alpha_k;
                }
                break;
        }

        Extrapolated ex = extrapolate(p, p_prev, alpha_k);
        Vec x = prob.first.solve(ex.z_hat, ex.y_hat, m);
        const double residual =
            prob.stopping ? prob.stopping(x) : std::numeric_limits<double>::quiet_NaN();
        if (prob.stopping && residual <= cfg.tol) {
            out.status = RunStatus::converged;
            out.final_x = std::move(x);
            out.final_residual = residual;
            break;
        }

        Vec lx = prob.op.apply(x);
        InnerRequest req;
        req.lx = lx;
        req.z_hat = ex.z_hat;
        req.y_hat = ex.y_hat;
        req.metric = m;
        req.sigma = cfg.sigma;
        req.max_iters = cfg.max_inner;
        req.warm_start = warm;
        ApproxSolution approx;
        try {
            approx = prob.second.solve(req);
        } catch (InnerSolveError& err) {
            err.outer_iteration = k;
            throw;
        }

        Vec zp = z_prime_point(ex.z_hat, lx, ex.y_hat, cfg.gamma);
        BrevePoint br = breve_point(ex.z_hat, lx, approx, cfg.gamma);
        NextPoint nxt = update(ex.z_hat, ex.y_hat, lx, approx, cfg.tau, cfg.gamma);

        const double r_k =
            cfg.gamma * (lx - approx.y_tilde).norm_sq() + (zp - approx.v).norm_sq() / cfg.gamma;
        out.trace.push_back(IterTrace{k, alpha_k, residual, approx.inner_iters, r_k});
        out.total_inner_iters += approx.inner_iters;

        IterateRecord rec{k,       alpha_k,        std::move(ex.z_hat), std::move(ex.y_hat),
                          x,       std::move(approx), std::move(zp),    std::move(br.z),
                          std::move(br.y), nxt.z,  nxt.y,             residual};
        if (cfg.checked) assert_record_invariants(rec, prob, cfg);

        warm = rec.approx.y_tilde;
        p_prev = std::move(p);
        p = PrimalDualPoint(std::move(nxt.z), std::move(nxt.y));
        out.final_x = std::move(x);
        out.final_residual = residual;
        out.outer_iters = k + 1;
        if (cfg.keep_records) out.records.push_back(std::move(rec));
    }

    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace iadmm
