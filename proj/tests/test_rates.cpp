#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>

#include "helpers.hpp"
#include "iadmm/rates.hpp"

using namespace iadmm;
using testutil::certified_reference;
using testutil::constant_config;
using testutil::lasso_problem;
using testutil::make_instance;
using testutil::recommended_config;

namespace {

// A converged constant-weight run with its certified reference, shared by
// the descent and bound tests.
struct RateFixture {
    testutil::Instance ins;
    Problem prob;
    AdmmConfig cfg;
    RunResult res;
    PrimalDualPoint ref;

    explicit RateFixture(double alpha, std::uint64_t seed = 301)
        : ins(make_instance(25, 15, seed)),
          prob(lasso_problem(ins)),
          cfg(constant_config(alpha)),
          res((cfg.tol = 1e-9, run(prob, cfg))),
          ref(certified_reference(ins).p) {}
};

}  // namespace

TEST_SUITE("rates") {

TEST_CASE("descent constants on hand-worked settings") {
    // alpha = 0: C = 1 / (tau (1 - tau) (1 - sigma)^2) and D = (1/tau)(1 + 1).
    CHECK(constant_C(0.0, 0.0, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(constant_D(0.0, 0.0, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
    // alpha = 0.1 inflates both through the progression factor.
    CHECK(constant_C(0.1, 0.0, 0.5) == doctest::Approx(15.745078411745084).epsilon(1e-13));
    CHECK(constant_D(0.1, 0.0, 0.5) == doctest::Approx(6.564807541944039).epsilon(1e-13));
    // Outside the admissible range the quadratic is nonpositive.
    CHECK_THROWS_AS(constant_C(0.33, 0.99, 0.999), ConfigError);
    CHECK_THROWS_AS(constant_D(0.2, 0.0, 0.5), ConfigError);
}

TEST_CASE("pointwise residual matches its definition") {
    RateFixture fx(0.0);
    REQUIRE(!fx.res.records.empty());
    const GammaMetric m(fx.cfg.gamma);
    for (const auto& rec : fx.res.records) {
        const Vec lx = fx.prob.op.apply(rec.x);
        const double direct = fx.cfg.gamma * (lx - rec.approx.y_tilde).norm_sq() +
                              (rec.z_prime - rec.approx.v).norm_sq() / fx.cfg.gamma;
        CHECK(pointwise_residual(rec, fx.prob.op, m) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("best iterate minimizes the certified merit") {
    std::vector<PointwiseEntry> entries;
    entries.push_back({0, 4.0, 0.0});
    entries.push_back({1, 2.0, 0.1});
    entries.push_back({2, 2.0, 0.9});
    SUBCASE("eps participates when sigma is positive") {
        // Merits with sigma = 0.5: max(r/2, 2 eps / 0.25).
        const BestIterate best = best_index(entries, 0.5);
        CHECK(best.index == 1);
        CHECK(best.delta == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("eps is ignored when sigma is zero") {
        const BestIterate best = best_index(entries, 0.0);
        CHECK(best.index == 1);  // tie on r/2 between 1 and 2, first wins
        CHECK(best.delta == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(best_index({}, 0.5).index == -1);
}

TEST_CASE("running averages match direct summation") {
    RateFixture fx(0.05);
    const GammaMetric m(fx.cfg.gamma);
    ErgodicAccumulator acc(fx.prob.op.input_dim(), fx.prob.op.output_dim());
    Eigen::VectorXd sx = Eigen::VectorXd::Zero(fx.prob.op.input_dim());
    Eigen::VectorXd sy = Eigen::VectorXd::Zero(fx.prob.op.output_dim());
    Eigen::VectorXd szp = Eigen::VectorXd::Zero(fx.prob.op.output_dim());
    Eigen::VectorXd sv = Eigen::VectorXd::Zero(fx.prob.op.output_dim());
    double s_zp_lx = 0.0;
    double s_y_v = 0.0;
    long n = 0;

    REQUIRE(fx.res.records.size() >= 10);
    for (const auto& rec : fx.res.records) {
        acc.add(rec, fx.prob.op);
        const Vec lx = fx.prob.op.apply(rec.x);
        sx += rec.x.data();
        sy += rec.approx.y_tilde.data();
        szp += rec.z_prime.data();
        sv += rec.approx.v.data();
        s_zp_lx += rec.z_prime.dot(lx);
        s_y_v += rec.approx.y_tilde.dot(rec.approx.v);
        ++n;

        const auto nd = static_cast<double>(n);
        const ErgodicEntry entry = acc.report(m, fx.prob.op);
        const Vec mean_x(Eigen::VectorXd(sx / nd));
        const Vec mean_y(Eigen::VectorXd(sy / nd));
        const Vec mean_zp(Eigen::VectorXd(szp / nd));
        const Vec mean_v(Eigen::VectorXd(sv / nd));
        const Vec mean_lx = fx.prob.op.apply(mean_x);
        const double residual = fx.cfg.gamma * (mean_lx - mean_y).norm_sq() +
                                (mean_zp - mean_v).norm_sq() / fx.cfg.gamma;
        const double delta_a = mean_zp.dot(mean_lx) - s_zp_lx / nd;
        const double eps_a = s_y_v / nd - mean_y.dot(mean_v);

        CHECK(entry.k == n - 1);
        CHECK(entry.residual == doctest::Approx(residual).epsilon(1e-12));
        CHECK(entry.delta_a == doctest::Approx(delta_a).epsilon(1e-10));
        CHECK(entry.eps_a == doctest::Approx(eps_a).epsilon(1e-10));
    }
    CHECK(acc.count() == static_cast<int>(fx.res.records.size()));
}

TEST_CASE("accumulator rejects empty reports") {
    ErgodicAccumulator acc(3, 3);
    const GammaMetric m(1.0);
    CHECK_THROWS_AS(acc.report(m, LinearOp::identity(3)), std::logic_error);
    CHECK_THROWS_AS(acc.mean_x(), std::logic_error);
}

TEST_CASE("distance sequences satisfy the descent recursion and its telescoped form") {
    for (double alpha : {0.0, 0.047877538267962746}) {
        RateFixture fx(alpha);
        REQUIRE(fx.res.status == RunStatus::converged);
        const DistanceSequences seq = distance_sequences(fx.res, fx.ref, fx.cfg, fx.prob.op);
        REQUIRE(seq.h.size() == fx.res.records.size() + 1);

        const BoundCheck rec_check = check_descent_recursion(seq);
        CHECK(rec_check.ok);
        if (!rec_check.ok) {
            MESSAGE(rec_check.detail);
        }
        const BoundCheck tel_check = check_telescoped_bound(seq, fx.cfg.alpha);
        CHECK(tel_check.ok);
        if (!tel_check.ok) {
            MESSAGE(tel_check.detail);
        }
        const BoundCheck fejer = check_fejer_descent(fx.res, fx.ref, fx.cfg, fx.prob.op);
        CHECK(fejer.ok);
        if (!fejer.ok) {
            MESSAGE(fejer.detail);
        }
    }
}

TEST_CASE("rate report carries bounds only for constant weights") {
    RateFixture fx(0.04);
    const RateReport with_ref = build_rate_report(fx.res, fx.prob, fx.cfg, fx.ref);
    CHECK(with_ref.bounds_checked);
    CHECK(with_ref.bounds_ok);
    CHECK(std::isfinite(with_ref.C));
    CHECK(with_ref.d0 > 0.0);
    CHECK(with_ref.pointwise.size() == fx.res.records.size());
    CHECK(with_ref.ergodic.size() == fx.res.records.size());
    CHECK(with_ref.best.index >= 0);

    const BoundCheck best = check_best_iterate_bound(with_ref);
    CHECK(best.ok);
    const BoundCheck erg = check_ergodic_bounds(with_ref);
    CHECK(erg.ok);

    // Without a reference there is no d0 and nothing to check.
    const RateReport no_ref = build_rate_report(fx.res, fx.prob, fx.cfg, std::nullopt);
    CHECK_FALSE(no_ref.bounds_checked);
    CHECK(std::isnan(no_ref.d0));

    // The summable rule has no constant-weight guarantee.
    const auto ins = make_instance(25, 15, 307);
    const Problem prob = lasso_problem(ins);
    const AdmmConfig cfg = recommended_config();
    const RunResult res = run(prob, cfg);
    const RateReport summable = build_rate_report(res, prob, cfg, certified_reference(ins).p);
    CHECK_FALSE(summable.bounds_checked);
    CHECK(std::isnan(summable.C));
}

TEST_CASE("rate report serializes to the documented schema") {
    RateFixture fx(0.04);
    const RateReport report = build_rate_report(fx.res, fx.prob, fx.cfg, fx.ref);
    const auto j = nlohmann::json::parse(rate_report_json(report));
    REQUIRE(j.contains("C"));
    REQUIRE(j.contains("D"));
    REQUIRE(j.contains("d0"));
    REQUIRE(j.contains("pointwise"));
    REQUIRE(j.contains("ergodic"));
    REQUIRE(j.contains("bounds_ok"));
    CHECK(j["C"].is_number());
    CHECK(j["d0"].is_number());
    CHECK(j["bounds_ok"].is_boolean());
    REQUIRE(j["pointwise"].is_array());
    REQUIRE(!j["pointwise"].empty());
    CHECK(j["pointwise"][0].contains("k"));
    CHECK(j["pointwise"][0].contains("r"));
    CHECK(j["pointwise"][0].contains("eps"));
    CHECK(j["ergodic"][0].contains("residual"));
    CHECK(j["ergodic"][0].contains("delta_a"));
    CHECK(j["ergodic"][0].contains("eps_a"));

    const RateReport incomplete = build_rate_report(fx.res, fx.prob, fx.cfg, std::nullopt);
    const auto j2 = nlohmann::json::parse(rate_report_json(incomplete));
    CHECK(j2["d0"].is_null());
    CHECK(j2["bounds_ok"].is_null());
}

TEST_CASE("ergodic gaps are nonnegative up to rounding") {
    RateFixture fx(0.03, 311);
    const RateReport report = build_rate_report(fx.res, fx.prob, fx.cfg, fx.ref);
    for (const auto& e : report.ergodic) {
        CHECK(e.delta_a >= -1e-10);
        CHECK(e.eps_a >= -1e-10);
    }
}

}  // TEST_SUITE
