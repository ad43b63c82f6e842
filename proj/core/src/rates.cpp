#include "iadmm/rates.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>

namespace iadmm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PrimalDualPoint state_at(const RunResult& result, int k) {
    if (k <= 0) return PrimalDualPoint(result.z0, result.y0);
    const IterateRecord& rec = result.records.at(static_cast<std::size_t>(k - 1));
    return PrimalDualPoint(rec.z_next, rec.y_next);
}

double delta_of(const PointwiseEntry& entry, double sigma) {
    double value = 0.5 * entry.r;
    if (sigma > 0.0) value = std::max(value, 2.0 * entry.eps / (sigma * sigma));
    return value;
}

nlohmann::json json_number(double value) {
    if (std::isfinite(value)) return value;
    return nullptr;
}

}  // namespace

double pointwise_residual(const IterateRecord& rec, const LinearOp& op, const GammaMetric& m) {
    const Vec lx = op.apply(rec.x);
    const double gamma = m.gamma;
    return gamma * (lx - rec.approx.y_tilde).norm_sq() + (rec.z_prime - rec.approx.v).norm_sq() / gamma;
}

BestIterate best_index(const std::vector<PointwiseEntry>& entries, double sigma) {
    if (sigma < 0.0 || sigma >= 1.0) throw ConfigError("best_index: sigma must lie in [0, 1)");
    BestIterate best{-1, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double value = delta_of(entries[i], sigma);
        if (value < best.delta) {
            best.delta = value;
            best.index = static_cast<int>(i);
        }
    }
    return best;
}

namespace {

double progression_boost(double alpha, double sigma, double tau) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("rate constants: alpha must lie in [0, 1)");
    const BetaBound bb = beta_bound(sigma, tau);
    const double q = q_eval(alpha, bb.eta);
    if (!(q > 0.0)) {
        throw ConfigError("rate constants: q(alpha) must be positive, so alpha must stay below beta");
    }
    return 2.0 * alpha * (1.0 + alpha) / ((1.0 - alpha) * (1.0 - alpha) * q);
}

}  // namespace

double constant_C(double alpha, double sigma, double tau) {
    const double boost = progression_boost(alpha, sigma, tau);
    return (1.0 + boost) / (tau * (1.0 - tau) * (1.0 - sigma) * (1.0 - sigma));
}

double constant_D(double alpha, double sigma, double tau) {
    const double boost = progression_boost(alpha, sigma, tau);
    return (1.0 + alpha) / tau * (1.0 + std::sqrt(1.0 + boost));
}

ErgodicAccumulator::ErgodicAccumulator(Eigen::Index primal_dim, Eigen::Index split_dim)
    : sum_x_(Eigen::VectorXd::Zero(primal_dim)),
      sum_y_(Eigen::VectorXd::Zero(split_dim)),
      sum_zp_(Eigen::VectorXd::Zero(split_dim)),
      sum_v_(Eigen::VectorXd::Zero(split_dim)) {}

void ErgodicAccumulator::add(const Vec& x, const Vec& y_tilde, const Vec& z_prime, const Vec& v,
                             double eps, const LinearOp& op) {
    if (x.dim() != sum_x_.size()) throw DimensionError("ErgodicAccumulator::add x", x.dim(), sum_x_.size());
    if (y_tilde.dim() != sum_y_.size()) {
        throw DimensionError("ErgodicAccumulator::add y_tilde", y_tilde.dim(), sum_y_.size());
    }
    if (z_prime.dim() != sum_zp_.size()) {
        throw DimensionError("ErgodicAccumulator::add z_prime", z_prime.dim(), sum_zp_.size());
    }
    if (v.dim() != sum_v_.size()) throw DimensionError("ErgodicAccumulator::add v", v.dim(), sum_v_.size());
    if (eps < 0.0) throw ConfigError("ErgodicAccumulator::add: eps must be nonnegative");
    sum_x_ += x.data();
    sum_y_ += y_tilde.data();
    sum_zp_ += z_prime.data();
    sum_v_ += v.data();
    sum_zp_lx_ += z_prime.dot(op.apply(x));
    sum_y_v_ += y_tilde.dot(v);
    sum_eps_ += eps;
    ++count_;
}

void ErgodicAccumulator::add(const IterateRecord& rec, const LinearOp& op) {
    add(rec.x, rec.approx.y_tilde, rec.z_prime, rec.approx.v, rec.approx.eps, op);
}

Vec ErgodicAccumulator::mean_x() const {
    if (count_ == 0) throw std::logic_error("ErgodicAccumulator: empty");
    return Vec(sum_x_ / count_);
}

Vec ErgodicAccumulator::mean_y_tilde() const {
    if (count_ == 0) throw std::logic_error("ErgodicAccumulator: empty");
    return Vec(sum_y_ / count_);
}

Vec ErgodicAccumulator::mean_z_prime() const {
    if (count_ == 0) throw std::logic_error("ErgodicAccumulator: empty");
    return Vec(sum_zp_ / count_);
}

Vec ErgodicAccumulator::mean_v() const {
    if (count_ == 0) throw std::logic_error("ErgodicAccumulator: empty");
    return Vec(sum_v_ / count_);
}

double ErgodicAccumulator::mean_eps() const {
    if (count_ == 0) throw std::logic_error("ErgodicAccumulator: empty");
    return sum_eps_ / count_;
}

ErgodicEntry ErgodicAccumulator::report(const GammaMetric& m, const LinearOp& op) const {
    if (count_ == 0) throw std::logic_error("ErgodicAccumulator: empty");
    const double gamma = m.gamma;
    const Vec x_bar = mean_x();
    const Vec y_bar = mean_y_tilde();
    const Vec zp_bar = mean_z_prime();
    const Vec v_bar = mean_v();
    const Vec lx_bar = op.apply(x_bar);

    ErgodicEntry entry;
    entry.k = count_ - 1;
    entry.residual = gamma * (lx_bar - y_bar).norm_sq() + (zp_bar - v_bar).norm_sq() / gamma;
    entry.delta_a = zp_bar.dot(lx_bar) - sum_zp_lx_ / count_;
    entry.eps_a = sum_eps_ / count_ + sum_y_v_ / count_ - y_bar.dot(v_bar);
    return entry;
}

RateReport build_rate_report(const RunResult& result, const Problem& prob, const AdmmConfig& cfg,
                             const std::optional<PrimalDualPoint>& reference) {
    RateReport report;
    report.alpha = cfg.alpha;
    report.sigma = cfg.sigma;
    report.tau = cfg.tau;
    report.gamma = cfg.gamma;
    report.C = kNaN;
    report.D = kNaN;
    report.d0 = kNaN;

    const GammaMetric m(cfg.gamma);
    try {
        report.C = constant_C(cfg.alpha, cfg.sigma, cfg.tau);
        report.D = constant_D(cfg.alpha, cfg.sigma, cfg.tau);
    } catch (const ConfigError&) {
        // Constants undefined for these parameters; residuals are still reported.
    }
    if (reference.has_value()) {
        report.d0 = gamma_norm(PrimalDualPoint(result.z0, result.y0) - *reference, m);
    }

    ErgodicAccumulator acc(prob.op.input_dim(), prob.op.output_dim());
    report.pointwise.reserve(result.records.size());
    report.ergodic.reserve(result.records.size());
    for (const IterateRecord& rec : result.records) {
        report.pointwise.push_back(PointwiseEntry{rec.k, pointwise_residual(rec, prob.op, m), rec.approx.eps});
        acc.add(rec, prob.op);
        report.ergodic.push_back(acc.report(m, prob.op));
    }
    report.best = best_index(report.pointwise, cfg.sigma);

    const bool constant_weights =
        cfg.rule.kind == InertialKind::constant ||
        (cfg.rule.kind == InertialKind::below_beta && !cfg.rule.schedule);
    if (constant_weights && std::isfinite(report.C) && std::isfinite(report.D) &&
        std::isfinite(report.d0) && !report.pointwise.empty()) {
        report.bounds_checked = true;
        report.bounds_ok = check_best_iterate_bound(report).ok && check_ergodic_bounds(report).ok;
    }
    return report;
}

std::string rate_report_json(const RateReport& report) {
    nlohmann::json j;
    j["C"] = json_number(report.C);
    j["D"] = json_number(report.D);
    j["d0"] = json_number(report.d0);
    j["pointwise"] = nlohmann::json::array();
    for (const PointwiseEntry& p : report.pointwise) {
        j["pointwise"].push_back({{"k", p.k}, {"r", p.r}, {"eps", p.eps}});
    }
    j["ergodic"] = nlohmann::json::array();
    for (const ErgodicEntry& e : report.ergodic) {
        j["ergodic"].push_back(
            {{"k", e.k}, {"residual", e.residual}, {"delta_a", e.delta_a}, {"eps_a", e.eps_a}});
    }
    if (report.bounds_checked) {
        j["bounds_ok"] = report.bounds_ok;
    } else {
        j["bounds_ok"] = nullptr;
    }
    return j.dump(2);
}

BoundCheck check_best_iterate_bound(const RateReport& report) {
    BoundCheck check;
    if (!std::isfinite(report.C) || !std::isfinite(report.d0)) {
        return BoundCheck{false, -1, "constants unavailable"};
    }
    const double cd = report.C * report.d0 * report.d0;
    BestIterate incumbent{-1, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < report.pointwise.size(); ++i) {
        const double value = delta_of(report.pointwise[i], report.sigma);
        if (value < incumbent.delta) {
            incumbent.delta = value;
            incumbent.index = static_cast<int>(i);
        }
        const int k = report.pointwise[i].k;
        if (k < 1) continue;
        const double r_bound = 2.0 * cd / k;
        const double eps_bound = report.sigma * report.sigma * cd / (2.0 * k);
        const auto passes = [&](const PointwiseEntry& entry) {
            return entry.r <= r_bound && (report.sigma == 0.0 || entry.eps <= eps_bound);
        };
        if (passes(report.pointwise[static_cast<std::size_t>(incumbent.index)])) continue;
        bool found = false;
        for (std::size_t j = 0; j <= i && !found; ++j) found = passes(report.pointwise[j]);
        if (!found) {
            check.ok = false;
            check.violation_k = k;
            check.detail = "no iterate within the best-iterate bound at k = " + std::to_string(k);
            return check;
        }
    }
    return check;
}

BoundCheck check_ergodic_bounds(const RateReport& report) {
    BoundCheck check;
    if (!std::isfinite(report.C) || !std::isfinite(report.D) || !std::isfinite(report.d0)) {
        return BoundCheck{false, -1, "constants unavailable"};
    }
    const double d0_sq = report.d0 * report.d0;
    const BetaBound bb = beta_bound(report.sigma, report.tau);
    const double q = q_eval(report.alpha, bb.eta);
    const double gap_const =
        report.alpha * (1.0 + report.alpha) / (report.tau * (1.0 - report.alpha) * q) +
        report.D * (1.0 + 2.0 * std::sqrt(3.0)) * std::sqrt(report.C);
    for (const ErgodicEntry& entry : report.ergodic) {
        if (entry.k < 1) continue;
        const double k = entry.k;
        if (entry.residual > report.D * report.D * d0_sq / (k * k)) {
            return BoundCheck{false, entry.k, "averaged residual exceeds its k^-2 bound"};
        }
        if (entry.delta_a < -1e-10) return BoundCheck{false, entry.k, "delta_a negative beyond tolerance"};
        if (entry.eps_a < -1e-10) return BoundCheck{false, entry.k, "eps_a negative beyond tolerance"};
        if (entry.delta_a + entry.eps_a > gap_const * d0_sq / k) {
            return BoundCheck{false, entry.k, "averaged gap exceeds its 1/k bound"};
        }
    }
    return check;
}

DistanceSequences distance_sequences(const RunResult& result, const PrimalDualPoint& reference,
                                     const AdmmConfig& cfg, const LinearOp& op) {
    const GammaMetric m(cfg.gamma);
    const int K = static_cast<int>(result.records.size());
    DistanceSequences seq;
    seq.h.resize(K + 1);
    seq.s.assign(K + 1, 0.0);
    seq.delta.resize(K);
    seq.disp.resize(K + 1);
    seq.alpha.resize(K);

    const double step_factor =
        cfg.tau * (1.0 - cfg.tau) * (1.0 - cfg.sigma) * (1.0 - cfg.sigma);
    for (int k = 0; k <= K; ++k) {
        const PrimalDualPoint pk = state_at(result, k);
        seq.h[k] = gamma_norm_sq(pk - reference, m);
        seq.disp[k] = k == 0 ? 0.0 : gamma_norm_sq(pk - state_at(result, k - 1), m);
    }
    for (int k = 0; k < K; ++k) {
        const IterateRecord& rec = result.records[static_cast<std::size_t>(k)];
        const PrimalDualPoint p_hat(rec.z_hat, rec.y_hat);
        const PrimalDualPoint p_tilde(rec.approx.v, op.apply(rec.x));
        seq.s[k + 1] = step_factor * gamma_norm_sq(p_tilde - p_hat, m);
        seq.alpha[k] = rec.alpha_k;
        seq.delta[k] = rec.alpha_k * (1.0 + rec.alpha_k) * seq.disp[k];
    }
    return seq;
}

BoundCheck check_descent_recursion(const DistanceSequences& seq) {
    const int K = static_cast<int>(seq.delta.size());
    for (int k = 0; k < K; ++k) {
        const double h_prev = k == 0 ? seq.h[0] : seq.h[k - 1];
        const double lhs = seq.h[k + 1] - seq.h[k] - seq.alpha[k] * (seq.h[k] - h_prev) + seq.s[k + 1];
        const double slack = 1e-8 * (1.0 + seq.h[k + 1] + seq.h[k] + h_prev);
        if (lhs > seq.delta[k] + slack) {
            return BoundCheck{false, k,
                              "descent recursion violated by " + std::to_string(lhs - seq.delta[k])};
        }
    }
    return BoundCheck{};
}

BoundCheck check_telescoped_bound(const DistanceSequences& seq, double alpha_cap) {
    if (!(alpha_cap >= 0.0 && alpha_cap < 1.0)) {
        throw ConfigError("check_telescoped_bound: alpha_cap must lie in [0, 1)");
    }
    const int K = static_cast<int>(seq.delta.size());
    const double slack = 1e-8 * (1.0 + seq.h[0]);
    double s_sum = 0.0;
    double delta_sum = 0.0;
    for (int k = 1; k <= K; ++k) {
        s_sum += seq.s[k];
        delta_sum += seq.delta[k - 1];
        const double bound = seq.h[0] + delta_sum / (1.0 - alpha_cap) + slack;
        if (seq.h[k] + s_sum > bound) {
            return BoundCheck{false, k, "summed descent bound violated at k = " + std::to_string(k)};
        }
    }
    return BoundCheck{};
}

BoundCheck check_fejer_descent(const RunResult& result, const PrimalDualPoint& reference,
                               const AdmmConfig& cfg, const LinearOp& op) {
    const GammaMetric m(cfg.gamma);
    const double step_factor =
        cfg.tau * (1.0 - cfg.tau) * (1.0 - cfg.sigma) * (1.0 - cfg.sigma);
    for (const IterateRecord& rec : result.records) {
        const PrimalDualPoint p_hat(rec.z_hat, rec.y_hat);
        const PrimalDualPoint p_next(rec.z_next, rec.y_next);
        const PrimalDualPoint p_tilde(rec.approx.v, op.apply(rec.x));
        const double hat_dist = gamma_norm_sq(reference - p_hat, m);
        const double lhs = hat_dist - gamma_norm_sq(reference - p_next, m);
        const double rhs = step_factor * gamma_norm_sq(p_tilde - p_hat, m);
        if (lhs < rhs - 1e-8 * (1.0 + hat_dist)) {
            return BoundCheck{false, rec.k, "progress inequality violated at k = " + std::to_string(rec.k)};
        }
    }
    return BoundCheck{};
}

}  // namespace iadmm
