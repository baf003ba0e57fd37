#include "zx/pulses.hpp"

#include <cmath>
#include <numbers>

namespace zx {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

double rc_pulse(double t, double rolloff, double T) {
    const double x = t / T;
    const double guard = 1e-9;
    // peak value 1 at t=0 before energy normalization; continuous energy of
    // the unnormalized pulse is T*(1 - rolloff/4)
    const double norm = 1.0 / std::sqrt(T * (1.0 - rolloff / 4.0));
    const double sing = 1.0 / (2.0 * rolloff);
    double val;
    if (std::abs(std::abs(x) - sing) < guard) {
        val = (kPi / 4.0) * sinc(sing);
    } else {
        val = sinc(x) * std::cos(kPi * rolloff * x) /
              (1.0 - (2.0 * rolloff * x) * (2.0 * rolloff * x));
    }
    return norm * val;
}

double rrc_pulse(double t, double rolloff, double T) {
    const double x = t / T;
    const double guard = 1e-9;
    const double norm = 1.0 / std::sqrt(T);
    const double sing = 1.0 / (4.0 * rolloff);
    double val;
    if (std::abs(x) < guard) {
        val = 1.0 - rolloff + 4.0 * rolloff / kPi;
    } else if (std::abs(std::abs(x) - sing) < guard) {
        val = (rolloff / std::sqrt(2.0)) *
              ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * rolloff)) +
               (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * rolloff)));
    } else {
        val = (std::sin(kPi * x * (1.0 - rolloff)) +
               4.0 * rolloff * x * std::cos(kPi * x * (1.0 + rolloff))) /
              (kPi * x * (1.0 - 16.0 * rolloff * rolloff * x * x));
    }
    return norm * val;
}

SampledPulse sample_pulse(PulseShape shape, const SystemConfig& cfg, FilterSide side) {
    cfg.validate();
    const double T = cfg.symbol_period;
    const int n_tot = cfg.n_tot();
    const double spacing = T / cfg.m_rx;
    const double rolloff = side == FilterSide::Tx ? cfg.rolloff_tx : cfg.rolloff_rx;

    SampledPulse p;
    p.spacing = spacing;
    p.center_index = n_tot;
    p.samples.resize(2 * n_tot + 1);
    for (int k = -n_tot; k <= n_tot; ++k) {
        const double t = k * spacing;
        p.samples[k + n_tot] = shape == PulseShape::RaisedCosine
                                   ? rc_pulse(t, rolloff, T)
                                   : rrc_pulse(t, rolloff, T);
    }

    if (side == FilterSide::Rx) {
        p.scale = std::sqrt(T / cfg.m_rx);
    } else if (cfg.tx_scale_exact_energy) {
        double e = 0.0;
        for (double s : p.samples) e += s * s;
        p.scale = 1.0 / std::sqrt(e);
    } else {
        p.scale = std::sqrt(T / cfg.m_tx);
    }
    return p;
}

}  // namespace zx
