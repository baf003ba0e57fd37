#pragma once

#include <stdexcept>
#include <string>

namespace zx {

/// How the complex noise variance sigma_n^2 is split across the two real
/// dimensions. PerRealDimFull assigns sigma_n^2 to each real dimension,
/// PerRealDimHalf assigns sigma_n^2 / 2.
enum class NoiseSplit { PerRealDimFull, PerRealDimHalf };

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Scenario parameters for the oversampled 1-bit downlink chain.
/// All times are expressed in units of the symbol period T.
struct SystemConfig {
    int n_symbols = 1;       // N, symbols per block
    int m_rx = 3;            // receive oversampling factor
    int m_tx = 3;            // signaling-rate factor (faster-than-Nyquist)
    int n_users = 1;         // N_u
    int n_tx_antennas = 1;   // N_t
    double rolloff_tx = 0.22;
    double rolloff_rx = 0.22;
    double symbol_period = 1.0;
    double noise_variance = 1.0;    // sigma_n^2
    double beamforming_gain = 1.0;  // beta
    NoiseSplit noise_split = NoiseSplit::PerRealDimFull;
    bool tx_scale_exact_energy = false;

    // Derived sizes.
    int upsampling() const { return m_rx / m_tx; }            // M
    int n_tot() const { return n_symbols * m_rx + 1; }        // N_tot
    int n_q() const { return m_tx * n_symbols + 1; }          // N_q

    double real_dim_noise_var() const {
        return noise_split == NoiseSplit::PerRealDimFull ? noise_variance
                                                         : 0.5 * noise_variance;
    }

    void validate() const {
        if (n_symbols < 1) throw ConfigError("n_symbols must be positive");
        if (m_rx < 1) throw ConfigError("m_rx must be positive");
        if (m_tx < 1) throw ConfigError("m_tx must be positive");
        if (m_rx % m_tx != 0)
            throw ConfigError("m_rx must be an integer multiple of m_tx");
        if (n_users < 1) throw ConfigError("n_users must be positive");
        if (n_tx_antennas < n_users)
            throw ConfigError("n_tx_antennas must be >= n_users for zero-forcing");
        if (!(rolloff_tx > 0.0 && rolloff_tx <= 1.0))
            throw ConfigError("rolloff_tx must lie in (0, 1]");
        if (!(rolloff_rx > 0.0 && rolloff_rx <= 1.0))
            throw ConfigError("rolloff_rx must lie in (0, 1]");
        if (!(symbol_period > 0.0)) throw ConfigError("symbol_period must be positive");
        if (!(noise_variance > 0.0)) throw ConfigError("noise_variance must be positive");
        if (!(beamforming_gain > 0.0)) throw ConfigError("beamforming_gain must be positive");
    }
};

}  // namespace zx
