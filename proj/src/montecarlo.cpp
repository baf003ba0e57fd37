#include "zx/montecarlo.hpp"

#include <omp.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace zx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// All symbol sequences the bit source can produce, with their frames and
/// noise-free receive means, for both pilot signs.
struct PatternBank {
    // key: pilot-first +-1 frame pattern
    std::map<std::vector<int>, Eigen::VectorXd> means;
    std::vector<std::vector<int>> sequences;  // drawable symbol sequences
};

PatternBank warm_patterns(const McConfig& cfg, const SignalOperators& ops,
                          const ZxAlphabet& alphabet, double beta_eff) {
    const int n = cfg.system.n_symbols;
    PatternBank bank;
    if (alphabet.m_rx == 2) {
        if (n % 2 != 0) throw ConfigError("m_rx = 2 requires an even symbol count");
        const BlockCodebook book = BlockCodebook::make(2, 2, alphabet);
        std::vector<std::vector<int>> seqs{{}};
        for (int half = 0; half < n / 2; ++half) {
            std::vector<std::vector<int>> next;
            for (const auto& s : seqs)
                for (int u = 0; u < book.num_used; ++u) {
                    auto t = s;
                    t.push_back(book.symbol_tuples[static_cast<std::size_t>(u)][0]);
                    t.push_back(book.symbol_tuples[static_cast<std::size_t>(u)][1]);
                    next.push_back(std::move(t));
                }
            seqs = std::move(next);
        }
        bank.sequences = std::move(seqs);
    } else {
        std::vector<std::vector<int>> seqs{{}};
        for (int j = 0; j < n; ++j) {
            std::vector<std::vector<int>> next;
            for (const auto& s : seqs)
                for (int sym = 1; sym <= alphabet.size; ++sym) {
                    auto t = s;
                    t.push_back(sym);
                    next.push_back(std::move(t));
                }
            seqs = std::move(next);
        }
        bank.sequences = std::move(seqs);
    }

    QpCache cache;
    const Eigen::MatrixXd vu = ops.v_mat * ops.u_mat;
    for (int pilot : {1, -1})
        for (const auto& seq : bank.sequences) {
            const ZxFrame frame = forward_map(seq, pilot, alphabet);
            std::vector<int> pattern{pilot};
            pattern.insert(pattern.end(), frame.samples.begin(), frame.samples.end());
            const Eigen::VectorXd& p = cache.get(pattern, ops, cfg.gamma, beta_eff);
            bank.means.emplace(pattern, beta_eff * (vu * p));
        }
    return bank;
}

double effective_beta(const McConfig& cfg) {
    switch (cfg.channel) {
        case ChannelModel::Identity:
            return cfg.system.beamforming_gain;
        case ChannelModel::Fixed:
            return cfg.system.beamforming_gain * zf_precoder(cfg.fixed_h).c_zf;
        case ChannelModel::IidGaussian: {
            std::mt19937_64 eng(splitmix64(cfg.seed ^ 0x6368616e6e656cull));
            std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2.0);
            Eigen::MatrixXcd h(cfg.system.n_users, cfg.system.n_tx_antennas);
            for (Eigen::Index i = 0; i < h.rows(); ++i)
                for (Eigen::Index j = 0; j < h.cols(); ++j)
                    h(i, j) = std::complex<double>(gauss(eng), gauss(eng));
            return cfg.system.beamforming_gain * zf_precoder(h).c_zf;
        }
    }
    throw ConfigError("unknown channel model");
}

}  // namespace

Eigen::VectorXcd q1_quantize(const Eigen::VectorXcd& y) {
    Eigen::VectorXcd z(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
        z(i) = std::complex<double>(y(i).real() >= 0.0 ? 1.0 : -1.0,
                                    y(i).imag() >= 0.0 ? 1.0 : -1.0);
    return z;
}

McResult run_point(const McConfig& cfg, const SignalOperators& ops, bool parallel) {
    cfg.system.validate();
    if (cfg.n_blocks < 1) throw ConfigError("n_blocks must be positive");
    const ZxAlphabet alphabet = ZxAlphabet::make(cfg.system.m_rx);
    const double beta_eff = effective_beta(cfg);
    const PatternBank bank = warm_patterns(cfg, ops, alphabet, beta_eff);

    const int n = cfg.system.n_symbols;
    const int n_tot = cfg.system.n_tot();
    const int noise_dim = 3 * n_tot;
    const double noise_sd = std::sqrt(cfg.system.real_dim_noise_var());
    const std::uint64_t n_seq = bank.sequences.size();

    std::uint64_t sym_err = 0, sym_tot = 0, bit_err = 0, bit_tot = 0;

#pragma omp parallel for schedule(static) if (parallel) \
    reduction(+ : sym_err, sym_tot, bit_err, bit_tot)
    for (long long b = 0; b < cfg.n_blocks; ++b) {
        std::mt19937_64 eng(splitmix64(cfg.seed ^ (0x9e3779b97f4a7c15ull *
                                                   (static_cast<std::uint64_t>(b) + 1))));
        std::normal_distribution<double> gauss(0.0, noise_sd);
        const int pilot_i = (b % 2 == 0) ? 1 : -1;

        // two independent quadrature components per block
        for (int comp = 0; comp < 2; ++comp) {
            const int pilot = comp == 0 ? pilot_i : -pilot_i;
            const std::vector<int>& seq =
                bank.sequences[static_cast<std::size_t>(eng() % n_seq)];
            const ZxFrame frame = forward_map(seq, pilot, alphabet);
            std::vector<int> pattern{pilot};
            pattern.insert(pattern.end(), frame.samples.begin(), frame.samples.end());
            const Eigen::VectorXd& mean = bank.means.at(pattern);

            Eigen::VectorXd noise(noise_dim);
            for (int k = 0; k < noise_dim; ++k) noise(k) = gauss(eng);
            const Eigen::VectorXd y = mean + ops.g_rx_mat * noise;

            std::vector<int> z(static_cast<std::size_t>(n_tot));
            for (int k = 0; k < n_tot; ++k) z[static_cast<std::size_t>(k)] = y(k) >= 0.0 ? 1 : -1;
            // detection references the received samples, pilot included
            const std::vector<int> detected = detect_sequence(z, alphabet);

            for (int j = 0; j < n; ++j)
                if (detected[static_cast<std::size_t>(j)] != seq[static_cast<std::size_t>(j)])
                    ++sym_err;
            sym_tot += static_cast<std::uint64_t>(n);

            if (alphabet.m_rx == 2 || alphabet.m_rx == 3) {
                const std::vector<int> tx_bits = gray_decode(seq, alphabet);
                const std::vector<int> rx_bits = gray_decode(detected, alphabet);
                for (std::size_t k = 0; k < tx_bits.size(); ++k)
                    if (tx_bits[k] != rx_bits[k]) ++bit_err;
                bit_tot += static_cast<std::uint64_t>(tx_bits.size());
            }
        }
    }

    McResult res;
    res.gamma = cfg.gamma;
    res.symbol_errors = sym_err;
    res.symbols = sym_tot;
    res.bit_errors = bit_err;
    res.bits = bit_tot;
    res.ser = static_cast<double>(sym_err) / static_cast<double>(sym_tot);
    res.ber = bit_tot > 0 ? static_cast<double>(bit_err) / static_cast<double>(bit_tot) : 0.0;
    res.ci95_ser = 1.96 * std::sqrt(res.ser * (1.0 - res.ser) /
                                    static_cast<double>(sym_tot));
    return res;
}

std::vector<McResult> run_sweep(const McConfig& cfg,
                                const std::vector<double>& gamma_grid,
                                const SignalOperators& ops, bool parallel) {
    if (gamma_grid.empty()) throw ConfigError("gamma grid must be nonempty");
    std::vector<McResult> out;
    out.reserve(gamma_grid.size());
    for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
        McConfig point = cfg;
        point.gamma = gamma_grid[i];
        point.seed = splitmix64(cfg.seed + i);
        out.push_back(run_point(point, ops, parallel));
    }
    return out;
}

}  // namespace zx
