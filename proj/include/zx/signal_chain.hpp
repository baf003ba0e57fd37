#pragma once

#include <Eigen/Dense>

#include "zx/pulses.hpp"
#include "zx/system_config.hpp"

namespace zx {

/// Dense operators of the discrete transmission chain. Immutable after
/// construction; safe for concurrent reads.
struct SignalOperators {
    SystemConfig cfg;
    Eigen::MatrixXd g_tx_mat;   // N_tot x 3N_tot banded Toeplitz
    Eigen::MatrixXd g_rx_mat;   // N_tot x 3N_tot banded Toeplitz
    Eigen::MatrixXd v_mat;      // N_tot x N_tot symmetric Toeplitz, Tx*Rx combined waveform
    Eigen::MatrixXd u_mat;      // N_tot x N_q upsampler (0/1)
    Eigen::MatrixXd w_mat;      // 3N_tot x N_q, W = G_Tx^T U
    Eigen::MatrixXd noise_cov;  // N_tot x N_tot per real dimension
};

/// Banded Toeplitz filter matrix: row i holds scale * pulse shifted right by
/// i columns (N_tot x 3N_tot). Throws ConfigError on a length mismatch.
Eigen::MatrixXd build_filter_matrix(const SampledPulse& pulse, const SystemConfig& cfg);

/// M-fold upsampler, U[m][n] = 1 iff m = M*(n-1)+1 in 1-based indexing.
Eigen::MatrixXd build_upsampler(const SystemConfig& cfg);

/// Combined waveform matrix V with entries v((j-i) T/M_Rx) where
/// v = g_Tx * g_Rx is evaluated by midpoint-rule convolution on a grid with
/// spacing T/(M_Rx * refine).
Eigen::MatrixXd build_combined_v(const SystemConfig& cfg, int refine = 64);

/// W = G_Tx^T U.
Eigen::MatrixXd build_w(const SystemConfig& cfg, const Eigen::MatrixXd& g_tx_mat,
                        const Eigen::MatrixXd& u_mat);

/// Filtered-noise covariance sigma_r^2 * G_Rx G_Rx^T for one real dimension.
Eigen::MatrixXd noise_covariance(const SystemConfig& cfg, const Eigen::MatrixXd& g_rx_mat);

/// Builds every operator for a configuration.
SignalOperators build_operators(const SystemConfig& cfg, int refine = 64);

}  // namespace zx
