#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zx/cli_util.hpp"
#include "zx/montecarlo.hpp"
#include "zx/precoding.hpp"
#include "zx/ser_bound.hpp"
#include "zx/zx_modem.hpp"

namespace {

using zx::SystemConfig;

std::vector<int> parse_symbols(const std::string& spec) {
    std::vector<int> symbols;
    std::string item;
    std::istringstream in(spec);
    while (std::getline(in, item, ',')) {
        if (!item.empty() && (item[0] == 'b' || item[0] == 'B')) item.erase(0, 1);
        symbols.push_back(std::stoi(item));
    }
    return symbols;
}

int default_n_symbols(int m_rx) { return m_rx == 2 ? 2 : 1; }

std::string canonical_config(const SystemConfig& cfg, double extra_a = 0.0,
                             double extra_b = 0.0) {
    std::ostringstream out;
    out << "n=" << cfg.n_symbols << ";mrx=" << cfg.m_rx << ";mtx=" << cfg.m_tx
        << ";nu=" << cfg.n_users << ";nt=" << cfg.n_tx_antennas
        << ";etx=" << cfg.rolloff_tx << ";erx=" << cfg.rolloff_rx
        << ";sigma2=" << cfg.noise_variance << ";beta=" << cfg.beamforming_gain
        << ";a=" << extra_a << ";b=" << extra_b;
    return out.str();
}

void add_system_options(CLI::App* cmd, SystemConfig& cfg) {
    cmd->add_option("--mrx", cfg.m_rx, "receive oversampling factor M_Rx")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mtx", cfg.m_tx, "signaling-rate factor M_Tx (0 = same as M_Rx)");
    cmd->add_option("--n", cfg.n_symbols, "symbols per block N (0 = default for M_Rx)");
    cmd->add_option("--sigma2", cfg.noise_variance, "noise variance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--beta", cfg.beamforming_gain, "beamforming gain")
        ->check(CLI::PositiveNumber);
}

void finalize_system(SystemConfig& cfg) {
    if (cfg.m_tx == 0) cfg.m_tx = cfg.m_rx;
    if (cfg.n_symbols == 0) cfg.n_symbols = default_n_symbols(cfg.m_rx);
    cfg.validate();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"band-limited 1-bit downlink toolkit: zero-crossing modulation, "
                 "QOS precoding, SER bounds, Monte Carlo"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    int threads = 0;
    app.add_option("--threads", threads,
                   "worker cap (default: machine parallelism; env ZX_THREADS)");

    SystemConfig cfg;
    cfg.m_rx = 0;
    cfg.m_tx = 0;
    cfg.n_symbols = 0;

    // map
    auto* map_cmd = app.add_subcommand("map", "forward-map symbols to a +-1 frame");
    std::string map_symbols;
    int map_pilot = 1;
    map_cmd->add_option("--mrx", cfg.m_rx, "M_Rx")->required();
    map_cmd->add_option("--symbols", map_symbols, "e.g. b4,b2,b3,b1")->required();
    map_cmd->add_option("--pilot", map_pilot, "+1 or -1");

    // precode
    auto* pre_cmd = app.add_subcommand("precode", "solve one QOS precoding problem");
    std::string pre_symbols;
    double pre_gamma = 1.0;
    int pre_pilot = 1;
    add_system_options(pre_cmd, cfg);
    pre_cmd->get_option("--mrx")->required();
    pre_cmd->add_option("--gamma", pre_gamma, "threshold distance")->required();
    pre_cmd->add_option("--symbols", pre_symbols, "e.g. b2")->required();
    pre_cmd->add_option("--pilot", pre_pilot, "+1 or -1");

    // bound
    auto* bound_cmd = app.add_subcommand("bound", "semi-analytical SER/BER upper bound");
    std::string bound_gamma = "0.1:0.05:6";
    std::string bound_out = "bound.csv";
    double bound_eps = 5e-4;  // full 119-point grid in seconds; tighten via --eps
    add_system_options(bound_cmd, cfg);
    bound_cmd->get_option("--mrx")->required();
    bound_cmd->add_option("--gamma", bound_gamma, "grid a:step:b or single value");
    bound_cmd->add_option("--eps", bound_eps, "integrator accuracy");
    bound_cmd->add_option("--out", bound_out, "output CSV path");

    // gamma-table
    auto* gt_cmd = app.add_subcommand("gamma-table", "invert the bound to gamma(SER)");
    std::string gt_targets = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6";
    std::string gt_out = "gamma_table.csv";
    add_system_options(gt_cmd, cfg);
    gt_cmd->get_option("--mrx")->required();
    gt_cmd->add_option("--targets", gt_targets, "comma-separated SER targets");
    gt_cmd->add_option("--out", gt_out, "output CSV path");

    // mc
    auto* mc_cmd = app.add_subcommand("mc", "seeded Monte Carlo link simulation");
    std::string mc_gamma = "0.1:0.5:3.6";
    std::string mc_out = "mc.csv";
    int mc_blocks = 100000;
    std::uint64_t mc_seed = 7;
    add_system_options(mc_cmd, cfg);
    mc_cmd->get_option("--mrx")->required();
    mc_cmd->add_option("--gamma", mc_gamma, "grid a:step:b or single value");
    mc_cmd->add_option("--blocks", mc_blocks, "blocks per point")->check(CLI::PositiveNumber);
    mc_cmd->add_option("--seed", mc_seed, "master seed");
    mc_cmd->add_option("--out", mc_out, "output CSV path");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render bound/mc CSVs as SVG");
    std::vector<std::string> plot_bound, plot_mc;
    std::string plot_out = "plot.svg";
    bool plot_linear = false;
    std::string plot_ycol = "ser";
    plot_cmd->add_option("--bound", plot_bound, "bound CSV path(s)");
    plot_cmd->add_option("--mc", plot_mc, "Monte Carlo CSV path(s)");
    plot_cmd->add_option("--out", plot_out, "output SVG path");
    plot_cmd->add_option("--ycol", plot_ycol, "ser or ber");
    plot_cmd->add_flag("--linear", plot_linear, "linear y axis instead of log");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads == 0)
        if (const char* env = std::getenv("ZX_THREADS")) threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*map_cmd) {
            const auto alphabet = zx::ZxAlphabet::make(cfg.m_rx);
            const auto frame = zx::forward_map(parse_symbols(map_symbols), map_pilot, alphabet);
            std::cout << frame.pilot;
            for (int s : frame.samples) std::cout << "," << s;
            std::cout << "\n";
        } else if (*pre_cmd) {
            finalize_system(cfg);
            const auto alphabet = zx::ZxAlphabet::make(cfg.m_rx);
            const auto ops = zx::build_operators(cfg);
            const auto frame = zx::forward_map(parse_symbols(pre_symbols), pre_pilot, alphabet);
            Eigen::VectorXd c(cfg.n_tot());
            c(0) = pre_pilot;
            for (std::size_t i = 0; i < frame.samples.size(); ++i)
                c(static_cast<Eigen::Index>(i + 1)) = frame.samples[i];
            const auto res = zx::precode_frame(c, ops, pre_gamma, cfg.beamforming_gain);
            nlohmann::json out;
            out["p_x"] = std::vector<double>(res.p.data(), res.p.data() + res.p.size());
            out["min_margin"] = res.min_margin;
            out["objective"] = res.objective;
            out["iterations"] = res.solution.iterations;
            std::cout << out.dump(2) << "\n";
        } else if (*bound_cmd) {
            finalize_system(cfg);
            const auto ops = zx::build_operators(cfg);
            const auto table = zx::paper_region_table(cfg.m_rx);
            zx::CsvTable csv;
            csv.header = {"gamma", "ser_ub", "ber_ub", "err_est"};
            for (double g : zx::parse_range(bound_gamma)) {
                const auto b = zx::ser_upper_bound(g, table, ops, bound_eps);
                csv.rows.push_back({b.gamma, b.ser_ub, b.ber_ub, b.err_est});
            }
            zx::emit_csv(csv, {1, canonical_config(cfg, bound_eps), "richtmyer-qmc"},
                         bound_out);
        } else if (*gt_cmd) {
            finalize_system(cfg);
            const auto ops = zx::build_operators(cfg);
            zx::CsvTable csv;
            csv.header = {"ser_target", "gamma"};
            std::string item;
            std::istringstream in(gt_targets);
            while (std::getline(in, item, ','))
                csv.rows.push_back({std::stod(item),
                                    zx::gamma_for_target(std::stod(item), cfg.m_rx, ops)});
            zx::emit_csv(csv, {1, canonical_config(cfg), "richtmyer-qmc"}, gt_out);
        } else if (*mc_cmd) {
            finalize_system(cfg);
            const auto ops = zx::build_operators(cfg);
            zx::McConfig mc;
            mc.system = cfg;
            mc.n_blocks = mc_blocks;
            mc.seed = mc_seed;
            zx::CsvTable csv;
            csv.header = {"gamma", "ser", "ber", "symbols", "ci95_ser"};
            for (const auto& r : zx::run_sweep(mc, zx::parse_range(mc_gamma), ops))
                csv.rows.push_back({r.gamma, r.ser, r.ber,
                                    static_cast<double>(r.symbols), r.ci95_ser});
            zx::emit_csv(csv,
                         {mc_seed, canonical_config(cfg, static_cast<double>(mc_blocks)),
                          "mt19937_64+splitmix64"},
                         mc_out);
        } else if (*plot_cmd) {
            std::vector<zx::PlotSeries> series;
            auto load = [&](const std::string& path, bool markers, const char* col) {
                const auto csv = zx::parse_csv(path);
                std::size_t yi = 1;
                for (std::size_t i = 0; i < csv.header.size(); ++i)
                    if (csv.header[i] == col || csv.header[i] == std::string(col) + "_ub") yi = i;
                zx::PlotSeries s;
                s.label = (markers ? "simulated " : "bound ") + path;
                s.markers_only = markers;
                for (const auto& row : csv.rows) s.points.emplace_back(row[0], row[yi]);
                series.push_back(std::move(s));
            };
            for (const auto& p : plot_bound) load(p, false, plot_ycol.c_str());
            for (const auto& p : plot_mc) load(p, true, plot_ycol.c_str());
            zx::PlotAxes axes;
            axes.log_y = !plot_linear;
            axes.y_label = plot_ycol == "ber" ? "BER" : "SER";
            zx::plot_svg(series, axes, plot_out);
        }
    } catch (const zx::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const zx::QpError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const zx::NonPsdError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const zx::TargetUnreachable& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
