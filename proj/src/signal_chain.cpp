#include "zx/signal_chain.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace zx {

Eigen::MatrixXd build_filter_matrix(const SampledPulse& pulse, const SystemConfig& cfg) {
    const int n_tot = cfg.n_tot();
    const int len = 2 * n_tot + 1;
    if (static_cast<int>(pulse.samples.size()) != len)
        throw ConfigError("filter pulse length must be 2*N_tot + 1");

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_tot, 3 * n_tot);
    for (int i = 0; i < n_tot; ++i)
        for (int k = 0; k < len; ++k)
            g(i, i + k) = pulse.scale * pulse.samples[static_cast<std::size_t>(k)];
    return g;
}

Eigen::MatrixXd build_upsampler(const SystemConfig& cfg) {
    cfg.validate();
    const int m = cfg.upsampling();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(cfg.n_tot(), cfg.n_q());
    for (int n = 0; n < cfg.n_q(); ++n) {
        const int row = m * n;  // 1-based: M*(n-1)+1
        if (row < cfg.n_tot()) u(row, n) = 1.0;
    }
    return u;
}

Eigen::MatrixXd build_combined_v(const SystemConfig& cfg, int refine) {
    cfg.validate();
    if (refine < 8) throw ConfigError("refine must be >= 8");
    const double T = cfg.symbol_period;
    const int n_tot = cfg.n_tot();
    const double h = T / (cfg.m_rx * refine);
    // integration span; both pulses decay at least as 1/t^2
    const double span = 30.0 * T;
    const int n_steps = static_cast<int>(std::ceil(2.0 * span / h));

    std::vector<double> gtx(static_cast<std::size_t>(n_steps));
    for (int k = 0; k < n_steps; ++k) {
        const double s = -span + (k + 0.5) * h;
        gtx[static_cast<std::size_t>(k)] = rc_pulse(s, cfg.rolloff_tx, T);
    }

    std::vector<double> lags(static_cast<std::size_t>(n_tot));
    for (int lag = 0; lag < n_tot; ++lag) {
        const double tau = lag * T / cfg.m_rx;
        double acc = 0.0;
        for (int k = 0; k < n_steps; ++k) {
            const double s = -span + (k + 0.5) * h;
            acc += gtx[static_cast<std::size_t>(k)] * rrc_pulse(tau - s, cfg.rolloff_rx, T);
        }
        lags[static_cast<std::size_t>(lag)] = acc * h;
    }

    Eigen::MatrixXd v(n_tot, n_tot);
    for (int i = 0; i < n_tot; ++i)
        for (int j = 0; j < n_tot; ++j)
            v(i, j) = lags[static_cast<std::size_t>(std::abs(j - i))];
    return v;
}

Eigen::MatrixXd build_w(const SystemConfig& cfg, const Eigen::MatrixXd& g_tx_mat,
                        const Eigen::MatrixXd& u_mat) {
    if (g_tx_mat.rows() != cfg.n_tot() || g_tx_mat.cols() != 3 * cfg.n_tot() ||
        u_mat.rows() != cfg.n_tot() || u_mat.cols() != cfg.n_q())
        throw ConfigError("build_w: operand dimensions do not match the configuration");
    return g_tx_mat.transpose() * u_mat;
}

Eigen::MatrixXd noise_covariance(const SystemConfig& cfg, const Eigen::MatrixXd& g_rx_mat) {
    return cfg.real_dim_noise_var() * (g_rx_mat * g_rx_mat.transpose());
}

SignalOperators build_operators(const SystemConfig& cfg, int refine) {
    cfg.validate();
    SignalOperators ops;
    ops.cfg = cfg;
    const SampledPulse tx = sample_pulse(PulseShape::RaisedCosine, cfg, FilterSide::Tx);
    const SampledPulse rx = sample_pulse(PulseShape::RootRaisedCosine, cfg, FilterSide::Rx);
    ops.g_tx_mat = build_filter_matrix(tx, cfg);
    ops.g_rx_mat = build_filter_matrix(rx, cfg);
    ops.v_mat = build_combined_v(cfg, refine);
    ops.u_mat = build_upsampler(cfg);
    ops.w_mat = build_w(cfg, ops.g_tx_mat, ops.u_mat);
    ops.noise_cov = noise_covariance(cfg, ops.g_rx_mat);
    return ops;
}

}  // namespace zx
