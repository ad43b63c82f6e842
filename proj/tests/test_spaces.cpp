#include <doctest.h>

#include <cmath>
#include <string>

#include "helpers.hpp"
#include "iadmm/spaces.hpp"

using namespace iadmm;
using testutil::random_vec;
using testutil::vec1;
using testutil::vec2;

TEST_SUITE("spaces") {

TEST_CASE("vectors reject non-finite entries and name the offender") {
    Eigen::VectorXd v(3);
    v << 1.0, std::nan(""), 2.0;
    CHECK_THROWS_WITH_AS(Vec{v}, doctest::Contains("index 1"), std::invalid_argument);
    v[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Vec{v}, std::invalid_argument);
}

TEST_CASE("vector arithmetic checks dimensions") {
    const Vec a = Vec::zeros(3);
    const Vec b = Vec::zeros(4);
    CHECK_THROWS_AS(a + b, DimensionError);
    CHECK_THROWS_AS(a - b, DimensionError);
    CHECK_THROWS_AS(a.dot(b), DimensionError);
    try {
        a.dot(b);
    } catch (const DimensionError& e) {
        CHECK(e.lhs == 3);
        CHECK(e.rhs == 4);
    }
}

TEST_CASE("norms and scaling") {
    const Vec v = vec2(3.0, -4.0);
    CHECK(v.norm() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(v.norm_sq() == doctest::Approx(25.0).epsilon(1e-15));
    CHECK(v.linf_norm() == doctest::Approx(4.0).epsilon(1e-15));
    const Vec w = 2.0 * v;
    CHECK(w[0] == 6.0);
    CHECK(w[1] == -8.0);
    CHECK((-v)[1] == 4.0);
}

TEST_CASE("metric rejects bad gamma") {
    CHECK_THROWS_AS(GammaMetric(0.0), ConfigError);
    CHECK_THROWS_AS(GammaMetric(-1.0), ConfigError);
    CHECK_THROWS_AS(GammaMetric(std::numeric_limits<double>::infinity()), ConfigError);
    CHECK(GammaMetric(2.5).gamma == 2.5);
}

TEST_CASE("weighted inner product on small examples") {
    const GammaMetric m2(2.0);
    const PrimalDualPoint p(vec1(2.0), vec1(1.0));
    // (1/2) * 4 + 2 * 1
    CHECK(gamma_inner(p, p, m2) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(gamma_norm_sq(p, m2) == doctest::Approx(4.0).epsilon(1e-15));

    const GammaMetric m_half(0.5);
    const PrimalDualPoint q(vec1(1.0), vec1(2.0));
    // (1/0.5) * 1 + 0.5 * 4
    CHECK(gamma_norm_sq(q, m_half) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(gamma_norm(q, m_half) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("weighted metric satisfies Cauchy-Schwarz and the parallelogram law") {
    const GammaMetric m(0.7);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const PrimalDualPoint p(random_vec(6, 100 + s), random_vec(6, 200 + s));
        const PrimalDualPoint q(random_vec(6, 300 + s), random_vec(6, 400 + s));
        const double ip = gamma_inner(p, q, m);
        CHECK(std::abs(ip) <= gamma_norm(p, m) * gamma_norm(q, m) + 1e-12);
        const double lhs = gamma_norm_sq(p + q, m) + gamma_norm_sq(p - q, m);
        const double rhs = 2.0 * gamma_norm_sq(p, m) + 2.0 * gamma_norm_sq(q, m);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("point arithmetic requires matching block dimensions") {
    CHECK_THROWS_AS(PrimalDualPoint(Vec::zeros(2), Vec::zeros(3)), DimensionError);
    const PrimalDualPoint p(Vec::zeros(2), Vec::zeros(2));
    const PrimalDualPoint q(Vec::zeros(3), Vec::zeros(3));
    CHECK_THROWS_AS(p + q, DimensionError);
    CHECK_THROWS_AS(gamma_inner(p, q, GammaMetric(1.0)), DimensionError);
}

TEST_CASE("identity operator passes vectors through") {
    const LinearOp id = LinearOp::identity(4);
    const Vec x = random_vec(4, 9);
    CHECK((id.apply(x) - x).norm() == 0.0);
    CHECK((id.adjoint(x) - x).norm() == 0.0);
    CHECK(id.is_identity());
    CHECK(id.input_dim() == 4);
    CHECK(id.output_dim() == 4);
    CHECK_THROWS_AS(id.apply(Vec::zeros(5)), DimensionError);
}

TEST_CASE("dense operator satisfies the adjoint identity") {
    const Eigen::MatrixXd M = testutil::random_matrix(5, 3, 42);
    const LinearOp L = LinearOp::dense(M);
    CHECK(L.input_dim() == 3);
    CHECK(L.output_dim() == 5);
    for (std::uint64_t s = 0; s < 30; ++s) {
        const Vec x = random_vec(3, 500 + s);
        const Vec u = random_vec(5, 600 + s);
        const double a = L.apply(x).dot(u);
        const double b = x.dot(L.adjoint(u));
        CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
    Eigen::MatrixXd bad = M;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(LinearOp::dense(bad), std::invalid_argument);
}

}  // TEST_SUITE
