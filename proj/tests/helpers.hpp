#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "iadmm/admm.hpp"
#include "iadmm/data.hpp"
#include "iadmm/oracle.hpp"

namespace testutil {

/// Preprocessed synthetic instance with the ground truth carried along.
struct Instance {
    iadmm::Dataset data;
    double nu = 0.0;
    iadmm::Vec x_true;
};

inline Instance make_instance(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                              double noise_sd = 0.05, double sparsity = 0.1) {
    iadmm::SyntheticSpec spec;
    spec.n = n;
    spec.d = d;
    spec.sparsity = sparsity;
    spec.noise_sd = noise_sd;
    spec.seed = seed;
    auto gen = iadmm::gen_synthetic(spec);
    auto pre = iadmm::preprocess(std::move(gen.data));
    return {std::move(pre.data), pre.nu, std::move(gen.x_true)};
}

inline iadmm::Problem lasso_problem(const Instance& ins) {
    return iadmm::Problem::lasso(ins.data.A, ins.data.b, ins.nu);
}

/// The recommended runtime settings: summable correction with a tight
/// relative inner tolerance.
inline iadmm::AdmmConfig recommended_config() {
    iadmm::AdmmConfig cfg;
    cfg.alpha = 0.33;
    cfg.sigma = 0.99;
    cfg.tau = 0.999;
    cfg.gamma = 1.0;
    cfg.rule = iadmm::InertialRule::summability(0.99, 1);
    return cfg;
}

/// Constant-weight settings for which the descent constants are finite.
inline iadmm::AdmmConfig constant_config(double alpha, double sigma = 0.5, double tau = 0.5) {
    iadmm::AdmmConfig cfg;
    cfg.alpha = alpha;
    cfg.sigma = sigma;
    cfg.tau = tau;
    cfg.gamma = 1.0;
    cfg.rule = iadmm::InertialRule::constant();
    return cfg;
}

/// Certified solution-set member for d0 and descent checks.
inline iadmm::ReferencePoint certified_reference(const Instance& ins, double tol = 1e-11) {
    const auto sol = iadmm::lasso_fista(ins.data.A, ins.data.b, ins.nu, tol);
    return iadmm::reference_point(ins.data.A, ins.data.b, ins.nu, sol.x);
}

/// Deterministic dense vector with entries in [-1, 1].
inline iadmm::Vec random_vec(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        v[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    }
    return iadmm::Vec(v);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
        }
    }
    return m;
}

inline iadmm::Vec vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return iadmm::Vec(v);
}

inline iadmm::Vec vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return iadmm::Vec(v);
}

inline iadmm::Vec vec1(double a) {
    Eigen::VectorXd v(1);
    v << a;
    return iadmm::Vec(v);
}

}  // namespace testutil
