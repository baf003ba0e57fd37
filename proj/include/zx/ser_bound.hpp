#pragma once

#include <vector>

#include "zx/mvn.hpp"
#include "zx/signal_chain.hpp"
#include "zx/zx_modem.hpp"

namespace zx {

/// Correct-detection integration regions. Each row is an orthant of the
/// d = m_rx*block_len + 1 received samples under the positive-reference
/// convention (first coordinate always [0, inf)).
struct RegionRow {
    int symbol = 0;               // block-symbol id, 1..alphabet_size
    std::vector<int> mu_signs;    // +-1, length d; mean is gamma * mu_signs
    std::vector<double> lower;    // 0 or -inf per coordinate
    std::vector<double> upper;    // 0 or +inf per coordinate
};

struct RegionTable {
    int m_rx = 0;
    int block_len = 0;       // 1 for m_rx = 3, 2 for m_rx = 2
    int alphabet_size = 0;   // 4 or 8
    std::vector<RegionRow> rows;

    int dimension() const { return m_rx * block_len + 1; }
};

/// The published tables transcribed verbatim, including one internally
/// inconsistent row for m_rx = 2 (see derive_region_table).
RegionTable paper_region_table(int m_rx);

/// Enumerates every +-1 pattern with a positive leading sample, detects it
/// with the block Hamming detector, and groups correct detections into
/// orthant rows. This produces a true partition of the pattern space; the
/// published m_rx = 2 table differs from it in exactly one row, where the
/// printed region columns repeat the preceding symbol's row instead of
/// matching the printed received sequence.
RegionTable derive_region_table(int m_rx, int block_len, const ZxAlphabet& alphabet);

struct BoundResult {
    double gamma = 0.0;
    double ser_ub = 0.0;
    double ber_ub = 0.0;
    double err_est = 0.0;
};

/// Bits per transmit symbol used in the BER bound (2 or 1.5).
double bound_bits_per_symbol(int m_rx);

/// SER_ub(gamma) = 1 - (1/m) sum_l P'(b_l) where P'(b_l) sums the orthant
/// probabilities of symbol l's rows under N(gamma * mu, Sigma_d), Sigma_d the
/// leading d x d block of the filtered-noise covariance.
BoundResult ser_upper_bound(double gamma, const RegionTable& table,
                            const SignalOperators& ops, double eps = 1e-5,
                            std::uint64_t seed = 1,
                            std::uint64_t max_samples = std::uint64_t{1} << 20);
BoundResult ser_upper_bound(double gamma, int m_rx, const SignalOperators& ops,
                            double eps = 1e-5, std::uint64_t seed = 1,
                            std::uint64_t max_samples = std::uint64_t{1} << 20);

struct TargetUnreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Largest grid multiple of grid_step in [grid_step, 8] with
/// SER_ub(gamma) >= ser_target, found by bisection over the monotone grid.
/// eps <= 0 selects an accuracy proportional to the target (a few percent
/// relative), which every magnitude of ser_target needs near its threshold.
double gamma_for_target(double ser_target, int m_rx, const SignalOperators& ops,
                        double grid_step = 0.05, double eps = 0.0,
                        std::uint64_t seed = 1);

}  // namespace zx
