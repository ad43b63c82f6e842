#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "iadmm/prox.hpp"

using namespace iadmm;
using testutil::random_vec;
using testutil::vec2;
using testutil::vec3;

TEST_SUITE("prox") {

TEST_CASE("shrinkage on hand-worked values") {
    const Vec u = vec3(3.0, -0.5, 0.2);
    const Vec s = soft_threshold(u, 1.0);
    CHECK(s[0] == 2.0);
    CHECK(s[1] == 0.0);
    CHECK(s[2] == 0.0);
    const Vec t = soft_threshold(u, 0.0);
    CHECK((t - u).norm() == 0.0);
    CHECK_THROWS_AS(soft_threshold(u, -0.1), ConfigError);
}

TEST_CASE("shrinkage is nonexpansive") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const Vec u = random_vec(8, 70 + s);
        const Vec v = random_vec(8, 170 + s);
        const double lhs = (soft_threshold(u, 0.3) - soft_threshold(v, 0.3)).norm();
        CHECK(lhs <= (u - v).norm() + 1e-14);
    }
}

TEST_CASE("shrinkage output satisfies its own optimality conditions") {
    // x = S_kappa(u) minimizes kappa ||x||_1 + 0.5 ||x - u||^2, so u - x must
    // be a subgradient of kappa ||.||_1 at x, componentwise.
    const double kappa = 0.4;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Vec u = random_vec(10, 900 + s);
        const Vec x = soft_threshold(u, kappa);
        for (Eigen::Index i = 0; i < u.dim(); ++i) {
            const double g = u[i] - x[i];
            if (x[i] != 0.0) {
                CHECK(g == doctest::Approx(kappa * (x[i] > 0.0 ? 1.0 : -1.0)).epsilon(1e-14));
            } else {
                CHECK(std::abs(g) <= kappa + 1e-14);
            }
        }
    }
}

TEST_CASE("l1 block solves its shifted prox step in closed form") {
    const FirstBlock f = FirstBlock::l1(0.7);
    CHECK(f.is_l1());
    CHECK(f.nu() == 0.7);
    const GammaMetric m(2.0);
    const Vec z_hat = vec2(0.4, -1.0);
    const Vec y_hat = vec2(1.0, 0.1);
    const Vec x = f.solve(z_hat, y_hat, m);
    const Vec expect = soft_threshold(y_hat - 0.5 * z_hat, 0.35);
    CHECK((x - expect).norm() == 0.0);

    // The certified multiplier -z' must lie in the subdifferential at x.
    const Vec z_prime = z_hat + 2.0 * (x - y_hat);
    CHECK(f.certificate_gap(x, z_prime) <= 1e-12);

    CHECK(f.value(vec2(1.0, -2.0)) == doctest::Approx(0.7 * 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(FirstBlock::l1(0.0), ConfigError);
    CHECK_THROWS_AS(FirstBlock::l1(-1.0), ConfigError);
}

TEST_CASE("quadratic block solves the regularized stationarity system") {
    Eigen::MatrixXd Q(2, 2);
    Q << 2.0, 0.5, 0.5, 1.0;
    const Vec c = vec2(0.3, -0.2);
    const FirstBlock f = FirstBlock::quadratic(Q, c);
    CHECK_FALSE(f.is_l1());
    CHECK_THROWS_AS(f.nu(), std::logic_error);

    const GammaMetric m(1.5);
    const Vec z_hat = vec2(0.1, 0.2);
    const Vec y_hat = vec2(-0.4, 1.0);
    const Vec x = f.solve(z_hat, y_hat, m);
    // (Q + gamma I) x = gamma y_hat - z_hat - c
    const Vec lhs(Q * x.data() + 1.5 * x.data());
    const Vec rhs = 1.5 * y_hat - z_hat - c;
    CHECK((lhs - rhs).linf_norm() <= 1e-13);

    const Vec z_prime = z_hat + 1.5 * (x - y_hat);
    CHECK(f.certificate_gap(x, z_prime) <= 1e-13);
    CHECK(f.value(x) == doctest::Approx(0.5 * x.data().dot(Q * x.data()) + c.dot(x)).epsilon(1e-14));
}

TEST_CASE("quadratic block validates its matrix") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.3, -0.3, 1.0;
    CHECK_THROWS_AS(FirstBlock::quadratic(asym, Vec::zeros(2)), ConfigError);

    Eigen::MatrixXd indef(2, 2);
    indef << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(FirstBlock::quadratic(indef, Vec::zeros(2)), ConfigError);

    Eigen::MatrixXd rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(FirstBlock::quadratic(rect, Vec::zeros(3)), DimensionError);

    Eigen::MatrixXd ok(2, 2);
    ok << 1.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(FirstBlock::quadratic(ok, Vec::zeros(3)), DimensionError);
}

TEST_CASE("certificate gap flags a wrong multiplier") {
    const FirstBlock f = FirstBlock::l1(1.0);
    const Vec x = vec2(2.0, 0.0);
    // At a positive component the multiplier must be exactly -nu.
    const Vec bad = vec2(-0.2, 0.0);
    CHECK(f.certificate_gap(x, bad) == doctest::Approx(0.8).epsilon(1e-14));
    // At a zero component anything within [-nu, nu] is fine.
    const Vec ok = vec2(-1.0, 0.9);
    CHECK(f.certificate_gap(x, ok) <= 1e-14);
    const Vec outside = vec2(-1.0, 1.4);
    CHECK(f.certificate_gap(x, outside) == doctest::Approx(0.4).epsilon(1e-13));
}

}  // TEST_SUITE
