#include "zx/ser_bound.hpp"

#include <cmath>
#include <limits>

namespace zx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RegionRow make_row(int symbol, std::vector<int> mu, const std::vector<int>& region_pattern) {
    RegionRow row;
    row.symbol = symbol;
    row.mu_signs = std::move(mu);
    for (int s : region_pattern) {
        row.lower.push_back(s > 0 ? 0.0 : -kInf);
        row.upper.push_back(s > 0 ? kInf : 0.0);
    }
    return row;
}

}  // namespace

RegionTable paper_region_table(int m_rx) {
    RegionTable t;
    t.m_rx = m_rx;
    if (m_rx == 3) {
        t.block_len = 1;
        t.alphabet_size = 4;
        t.rows = {
            make_row(1, {1, 1, 1, 1}, {1, 1, 1, 1}),
            make_row(1, {1, 1, 1, 1}, {1, 1, -1, 1}),
            make_row(1, {1, 1, 1, 1}, {1, -1, 1, 1}),
            make_row(2, {1, 1, 1, -1}, {1, 1, 1, -1}),
            make_row(2, {1, 1, 1, -1}, {1, -1, 1, -1}),
            make_row(3, {1, 1, -1, -1}, {1, 1, -1, -1}),
            make_row(4, {1, -1, -1, -1}, {1, -1, -1, -1}),
            make_row(4, {1, -1, -1, -1}, {1, -1, -1, 1}),
        };
        return t;
    }
    if (m_rx == 2) {
        t.block_len = 2;
        t.alphabet_size = 8;
        t.rows = {
            make_row(1, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}),
            make_row(1, {1, 1, 1, 1, 1}, {1, 1, 1, -1, 1}),
            make_row(1, {1, 1, 1, 1, 1}, {1, 1, -1, 1, 1}),
            make_row(1, {1, 1, 1, 1, 1}, {1, -1, 1, 1, 1}),
            make_row(2, {1, 1, 1, 1, -1}, {1, 1, 1, 1, -1}),
            make_row(2, {1, 1, 1, 1, -1}, {1, 1, -1, 1, -1}),
            make_row(2, {1, 1, 1, 1, -1}, {1, -1, 1, 1, -1}),
            make_row(3, {1, 1, 1, -1, -1}, {1, 1, 1, -1, -1}),
            make_row(3, {1, 1, 1, -1, -1}, {1, -1, 1, -1, -1}),
            make_row(4, {1, 1, -1, -1, -1}, {1, 1, -1, -1, -1}),
            make_row(5, {1, 1, -1, -1, 1}, {1, 1, -1, -1, 1}),
            make_row(6, {1, -1, -1, -1, 1}, {1, -1, -1, -1, 1}),
            make_row(6, {1, -1, -1, -1, 1}, {1, -1, 1, -1, 1}),
            make_row(7, {1, -1, -1, -1, -1}, {1, -1, -1, -1, -1}),
            // as published: the region columns of this row repeat the previous
            // symbol's second row instead of the printed received sequence
            // [1,-1,-1,1,-1]
            make_row(7, {1, -1, -1, -1, -1}, {1, -1, 1, -1, 1}),
            make_row(8, {1, -1, -1, 1, 1}, {1, -1, -1, 1, 1}),
        };
        return t;
    }
    throw ConfigError("region tables defined for m_rx in {2, 3}");
}

RegionTable derive_region_table(int m_rx, int block_len, const ZxAlphabet& alphabet) {
    const BlockCodebook book = BlockCodebook::make(m_rx, block_len, alphabet);
    RegionTable t;
    t.m_rx = m_rx;
    t.block_len = block_len;
    t.alphabet_size = book.num_used;
    const int d = book.dimension();
    if (d > 12) throw ConfigError("pattern space too large to enumerate");

    for (int sym = 1; sym <= book.num_used; ++sym) {
        for (unsigned bits = 0; bits < (1u << (d - 1)); ++bits) {
            std::vector<int> pattern(static_cast<std::size_t>(d), 1);
            for (int k = 1; k < d; ++k)
                if (bits & (1u << (k - 1))) pattern[static_cast<std::size_t>(k)] = -1;
            if (book.detect(pattern) != sym) continue;
            t.rows.push_back(make_row(sym, book.codewords[static_cast<std::size_t>(sym - 1)], pattern));
        }
    }
    return t;
}

double bound_bits_per_symbol(int m_rx) { return bits_per_symbol(m_rx); }

BoundResult ser_upper_bound(double gamma, const RegionTable& table,
                            const SignalOperators& ops, double eps,
                            std::uint64_t seed, std::uint64_t max_samples) {
    if (gamma <= 0.0) throw ConfigError("gamma must be positive");
    const int d = table.dimension();
    if (ops.noise_cov.rows() < d)
        throw ConfigError("noise covariance smaller than the region dimension");
    const Eigen::MatrixXd sigma = ops.noise_cov.topLeftCorner(d, d);

    double total = 0.0, err = 0.0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const RegionRow& row = table.rows[r];
        MvnRectangle rect;
        rect.mu.resize(d);
        rect.lower.resize(d);
        rect.upper.resize(d);
        for (int i = 0; i < d; ++i) {
            rect.mu(i) = gamma * row.mu_signs[static_cast<std::size_t>(i)];
            rect.lower(i) = row.lower[static_cast<std::size_t>(i)];
            rect.upper(i) = row.upper[static_cast<std::size_t>(i)];
        }
        rect.sigma = sigma;
        MvnOptions opts;
        opts.eps = eps;
        opts.seed = seed + r;
        opts.max_samples = max_samples;
        const MvnResult res = mvn_rect_prob(rect, opts);
        total += res.p;
        err += res.err_est;
    }
    BoundResult out;
    out.gamma = gamma;
    out.ser_ub = 1.0 - total / table.alphabet_size;
    out.ber_ub = out.ser_ub / bound_bits_per_symbol(table.m_rx);
    out.err_est = err / table.alphabet_size;
    return out;
}

BoundResult ser_upper_bound(double gamma, int m_rx, const SignalOperators& ops,
                            double eps, std::uint64_t seed,
                            std::uint64_t max_samples) {
    return ser_upper_bound(gamma, paper_region_table(m_rx), ops, eps, seed,
                           max_samples);
}

double gamma_for_target(double ser_target, int m_rx, const SignalOperators& ops,
                        double grid_step, double eps, std::uint64_t seed) {
    if (ser_target <= 0.0 || ser_target >= 1.0)
        throw ConfigError("ser_target must be in (0, 1)");
    const RegionTable table = paper_region_table(m_rx);
    // accuracy proportional to the target: the threshold comparison needs a
    // few percent relative error at every magnitude, not a fixed absolute one
    const double eps_eff =
        eps > 0.0 ? eps : std::clamp(0.05 * ser_target, 1e-8, 1e-3);
    // small targets need a larger sample budget: the threshold sits in the
    // bound's far tail where the default cap leaves ~1e-6 residual noise
    const std::uint64_t max_samples = eps_eff <= 1e-7   ? std::uint64_t{1} << 24
                                      : eps_eff <= 1e-6 ? std::uint64_t{1} << 23
                                                        : std::uint64_t{1} << 20;
    // certify with ser_ub - err_est: keep only grid points where the bound is
    // demonstrably at or above the target, so integrator noise in the far
    // tail cannot inflate the reported gamma beyond the grid resolution
    auto ser_at = [&](int idx) {
        const BoundResult r = ser_upper_bound(idx * grid_step, table, ops,
                                              eps_eff, seed, max_samples);
        return r.ser_ub - r.err_est;
    };
    const int hi_idx = static_cast<int>(std::floor(8.0 / grid_step + 1e-9));
    if (ser_at(hi_idx) >= ser_target)
        throw TargetUnreachable("SER target not reachable on the search interval");
    if (ser_at(1) < ser_target)
        throw TargetUnreachable("SER target above the bound at the smallest gamma");
    // monotone bisection on the grid: keep lo with SER >= target
    int lo = 1, hi = hi_idx;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (ser_at(mid) >= ser_target)
            lo = mid;
        else
            hi = mid;
    }
    return lo * grid_step;
}

}  // namespace zx
