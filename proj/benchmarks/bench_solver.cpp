#include <benchmark/benchmark.h>

#include "iadmm/admm.hpp"
#include "iadmm/data.hpp"
#include "iadmm/inner.hpp"
#include "iadmm/prox.hpp"

namespace {

iadmm::Preprocessed instance(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    iadmm::SyntheticSpec spec;
    spec.n = n;
    spec.d = d;
    spec.seed = seed;
    return iadmm::preprocess(iadmm::gen_synthetic(spec).data);
}

void BM_soft_threshold(benchmark::State& state) {
    const auto d = static_cast<Eigen::Index>(state.range(0));
    iadmm::SyntheticSpec spec;
    spec.n = 1;
    spec.d = d;
    spec.seed = 7;
    const iadmm::Vec u(iadmm::gen_synthetic(spec).data.A.row(0).transpose());
    for (auto _ : state) {
        benchmark::DoNotOptimize(iadmm::soft_threshold(u, 0.3));
    }
}
BENCHMARK(BM_soft_threshold)->Arg(1 << 10)->Arg(1 << 16);

void BM_inner_solve(benchmark::State& state) {
    const auto pre = instance(50, static_cast<Eigen::Index>(state.range(0)), 21);
    const auto second = iadmm::SecondBlock::least_squares(pre.data.A, pre.data.b);
    const Eigen::Index d = pre.data.cols();
    iadmm::InnerRequest req{iadmm::Vec::zeros(d), iadmm::Vec::zeros(d), iadmm::Vec::zeros(d),
                            iadmm::GammaMetric(1.0), 0.99, 10000, std::nullopt};
    iadmm::SyntheticSpec ss;
    ss.n = 1;
    ss.d = d;
    ss.seed = 3;
    req.lx = iadmm::Vec(iadmm::gen_synthetic(ss).data.A.row(0).transpose());
    for (auto _ : state) {
        benchmark::DoNotOptimize(second.solve(req));
    }
}
BENCHMARK(BM_inner_solve)->Arg(100)->Arg(400);

void BM_lasso_solve(benchmark::State& state) {
    const bool inertial = state.range(0) != 0;
    const auto pre = instance(50, 150, 33);
    const auto prob = iadmm::Problem::lasso(pre.data.A, pre.data.b, pre.nu);
    iadmm::AdmmConfig cfg;
    cfg.keep_records = false;
    if (!inertial) {
        cfg.alpha = 0.0;
        cfg.rule = iadmm::InertialRule::constant();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(iadmm::run(prob, cfg));
    }
}
BENCHMARK(BM_lasso_solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
