// Compares the OpenMP kernels against their serial reference implementations.
#include <benchmark/benchmark.h>

#include <random>

#include "zx/montecarlo.hpp"
#include "zx/mvn.hpp"
#include "zx/ser_bound.hpp"

namespace {

zx::MvnRectangle sample_rect() {
    const int d = 5;
    zx::MvnRectangle r;
    Eigen::MatrixXd b(d, d);
    std::mt19937_64 eng(99);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = gauss(eng);
    r.sigma = b * b.transpose() + 0.2 * Eigen::MatrixXd::Identity(d, d);
    r.mu = Eigen::VectorXd::Zero(d);
    r.lower = Eigen::VectorXd::Constant(d, -1.0);
    r.upper = Eigen::VectorXd::Constant(d, 2.0);
    return r;
}

void bm_mvn_parallel(benchmark::State& state) {
    const auto rect = sample_rect();
    zx::MvnOptions opts;
    opts.eps = 1e-7;
    for (auto _ : state) benchmark::DoNotOptimize(zx::mvn_rect_prob(rect, opts).p);
}
BENCHMARK(bm_mvn_parallel);

void bm_mvn_serial(benchmark::State& state) {
    const auto rect = sample_rect();
    zx::MvnOptions opts;
    opts.eps = 1e-7;
    for (auto _ : state) benchmark::DoNotOptimize(zx::mvn_rect_prob_serial(rect, opts).p);
}
BENCHMARK(bm_mvn_serial);

zx::McConfig mc_config() {
    zx::McConfig cfg;
    cfg.system.m_rx = 3;
    cfg.system.m_tx = 3;
    cfg.system.n_symbols = 1;
    cfg.gamma = 2.0;
    cfg.n_blocks = 20000;
    cfg.seed = 5;
    return cfg;
}

void bm_mc_parallel(benchmark::State& state) {
    const auto cfg = mc_config();
    const auto ops = zx::build_operators(cfg.system);
    for (auto _ : state) benchmark::DoNotOptimize(zx::run_point(cfg, ops, true).symbol_errors);
}
BENCHMARK(bm_mc_parallel);

void bm_mc_serial(benchmark::State& state) {
    const auto cfg = mc_config();
    const auto ops = zx::build_operators(cfg.system);
    for (auto _ : state) benchmark::DoNotOptimize(zx::run_point(cfg, ops, false).symbol_errors);
}
BENCHMARK(bm_mc_serial);

}  // namespace

BENCHMARK_MAIN();
