#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "zx/precoding.hpp"
#include "zx/ser_bound.hpp"
#include "zx/signal_chain.hpp"
#include "zx/zx_modem.hpp"

namespace zx {

enum class ChannelModel { Identity, Fixed, IidGaussian };

struct McConfig {
    SystemConfig system;
    double gamma = 1.0;
    int n_blocks = 1000;
    std::uint64_t seed = 1;
    ChannelModel channel = ChannelModel::Identity;
    Eigen::MatrixXcd fixed_h;  // used when channel == Fixed
};

struct McResult {
    double gamma = 0.0;
    double ser = 0.0;
    double ber = 0.0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t symbols = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double ci95_ser = 0.0;
};

/// 1-bit quantizer: sign(Re) + i sign(Im), with sign(0) := +1.
Eigen::VectorXcd q1_quantize(const Eigen::VectorXcd& y);

/// One seeded link-simulation point. Blocks are simulated with independent
/// per-block RNG substreams (splitmix64-seeded mt19937_64), so the integer
/// error counts are identical for any worker count.
McResult run_point(const McConfig& cfg, const SignalOperators& ops,
                   bool parallel = true);

/// One McResult per gamma; per-point seeds derived from cfg.seed by index.
std::vector<McResult> run_sweep(const McConfig& cfg,
                                const std::vector<double>& gamma_grid,
                                const SignalOperators& ops,
                                bool parallel = true);

}  // namespace zx
