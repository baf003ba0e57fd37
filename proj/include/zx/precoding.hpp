#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "zx/qp_solver.hpp"
#include "zx/signal_chain.hpp"

namespace zx {

/// Spatial zero-forcing precoder H^H (H H^H)^-1 with power-normalizing scale.
struct ZfPrecoder {
    Eigen::MatrixXcd p_sp;  // N_t x N_u, already scaled by c_zf
    double c_zf = 1.0;
};

ZfPrecoder zf_precoder(const Eigen::MatrixXcd& h);

/// QOS temporal precoding problem for one user and one quadrature component:
/// min ||W p||^2 subject to beta * frame .* (V U p) >= gamma elementwise.
QpProblem build_qos_problem(const Eigen::VectorXd& frame_component,
                            const SignalOperators& ops, double gamma,
                            double beta = 1.0);

struct PrecodeResult {
    Eigen::VectorXd p;      // length N_q
    double objective = 0.0; // ||W p||^2
    double min_margin = 0.0;
    QpSolution solution;
};

/// Solves the QOS problem for one +-1 frame component (pilot first).
PrecodeResult precode_frame(const Eigen::VectorXd& frame_component,
                            const SignalOperators& ops, double gamma,
                            double beta = 1.0, double tol = 1e-9);

/// E_0k = (p_sp_k^H p_sp_k) * (||W p_i||^2 + ||W p_q||^2).
double user_energy(const Eigen::VectorXcd& p_sp_k, const Eigen::VectorXd& p_x_i,
                   const Eigen::VectorXd& p_x_q, const SignalOperators& ops);

/// E_Tx = trace(P_sp R R^H P_sp^H) with row k of R equal to (W p_x_k)^T.
double total_energy(const Eigen::MatrixXcd& p_sp,
                    const std::vector<Eigen::VectorXcd>& p_x,
                    const SignalOperators& ops);

/// Solution cache keyed by the +-1 frame pattern; identical patterns give
/// identical QPs, so inserts are idempotent.
class QpCache {
  public:
    /// Returns the cached precoder for this pattern, solving on a miss.
    /// Patterns with a leading -1 are served by negating the +1 solution.
    const Eigen::VectorXd& get(const std::vector<int>& pattern,
                               const SignalOperators& ops, double gamma,
                               double beta = 1.0);

    std::size_t size() const { return cache_.size(); }

  private:
    std::map<std::vector<int>, Eigen::VectorXd> cache_;
    std::mutex mutex_;
};

}  // namespace zx
