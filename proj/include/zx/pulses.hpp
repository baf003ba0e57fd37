#pragma once

#include <vector>

#include "zx/system_config.hpp"

namespace zx {

/// Raised-cosine impulse response, normalized to unit energy in continuous
/// time. Removable singularities at t = +-T/(2*rolloff) are evaluated by
/// their analytic limits (guard band 1e-9 * T).
double rc_pulse(double t, double rolloff, double T = 1.0);

/// Root-raised-cosine impulse response, unit continuous-time energy.
/// Singular points t = 0 and t = +-T/(4*rolloff) use the analytic limits.
double rrc_pulse(double t, double rolloff, double T = 1.0);

enum class FilterSide { Tx, Rx };
enum class PulseShape { RaisedCosine, RootRaisedCosine };

/// A pulse sampled on the T/M_Rx grid over [-T(N + 1/M_Rx), +T(N + 1/M_Rx)],
/// length 2*N_tot + 1, together with the discrete normalization constant.
struct SampledPulse {
    std::vector<double> samples;
    double spacing = 0.0;     // T / M_Rx
    int center_index = 0;
    double scale = 1.0;       // a_Tx = sqrt(T/M_Tx) or a_Rx = sqrt(T/M_Rx)
};

/// Samples the requested pulse for the configured span. For the Tx side the
/// scale is a_Tx = sqrt(T/M_Tx) unless cfg.tx_scale_exact_energy is set, in
/// which case the scale renormalizes the discrete vector to exact unit norm.
SampledPulse sample_pulse(PulseShape shape, const SystemConfig& cfg, FilterSide side);

}  // namespace zx
