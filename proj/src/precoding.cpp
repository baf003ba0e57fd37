#include "zx/precoding.hpp"

#include <cmath>

namespace zx {

ZfPrecoder zf_precoder(const Eigen::MatrixXcd& h) {
    const Eigen::MatrixXcd gram = h * h.adjoint();
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (!lu.isInvertible() || lu.rcond() < 1e-12)
        throw ConfigError("channel matrix is rank deficient");
    const Eigen::MatrixXcd inv = lu.inverse();
    ZfPrecoder zf;
    zf.c_zf = std::sqrt(static_cast<double>(h.rows()) / inv.trace().real());
    zf.p_sp = zf.c_zf * (h.adjoint() * inv);
    return zf;
}

QpProblem build_qos_problem(const Eigen::VectorXd& frame_component,
                            const SignalOperators& ops, double gamma,
                            double beta) {
    if (frame_component.size() != ops.cfg.n_tot())
        throw ConfigError("frame length must be N_tot");
    if (gamma <= 0.0) throw ConfigError("gamma must be positive");
    QpProblem qp;
    qp.q_mat = 2.0 * ops.w_mat.transpose() * ops.w_mat;  // 1/2 p^T Q p = ||Wp||^2
    qp.a_mat = -beta * frame_component.asDiagonal() * (ops.v_mat * ops.u_mat);
    qp.b_vec = Eigen::VectorXd::Constant(ops.cfg.n_tot(), -gamma);
    return qp;
}

PrecodeResult precode_frame(const Eigen::VectorXd& frame_component,
                            const SignalOperators& ops, double gamma,
                            double beta, double tol) {
    const QpProblem qp = build_qos_problem(frame_component, ops, gamma, beta);
    PrecodeResult res;
    res.solution = solve_qp(qp, tol);
    if (res.solution.status != QpStatus::Converged)
        throw QpError("QOS precoding solve did not converge");
    res.p = res.solution.x;
    res.objective = (ops.w_mat * res.p).squaredNorm();
    const Eigen::VectorXd rx = beta * frame_component.cwiseProduct(
                                          ops.v_mat * ops.u_mat * res.p);
    res.min_margin = rx.minCoeff();
    return res;
}

double user_energy(const Eigen::VectorXcd& p_sp_k, const Eigen::VectorXd& p_x_i,
                   const Eigen::VectorXd& p_x_q, const SignalOperators& ops) {
    return p_sp_k.squaredNorm() * ((ops.w_mat * p_x_i).squaredNorm() +
                                   (ops.w_mat * p_x_q).squaredNorm());
}

double total_energy(const Eigen::MatrixXcd& p_sp,
                    const std::vector<Eigen::VectorXcd>& p_x,
                    const SignalOperators& ops) {
    if (static_cast<Eigen::Index>(p_x.size()) != p_sp.cols())
        throw ConfigError("one temporal precoder required per user");
    Eigen::MatrixXcd r(p_sp.cols(), ops.w_mat.rows());
    for (std::size_t k = 0; k < p_x.size(); ++k)
        r.row(static_cast<Eigen::Index>(k)) =
            (ops.w_mat * p_x[k]).transpose();
    return (p_sp * r).squaredNorm();
}

const Eigen::VectorXd& QpCache::get(const std::vector<int>& pattern,
                                    const SignalOperators& ops, double gamma,
                                    double beta) {
    // sign symmetry: p*(-c) = -p*(c)
    const bool flipped = !pattern.empty() && pattern.front() < 0;
    std::vector<int> key = pattern;
    if (flipped)
        for (int& v : key) v = -v;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(flipped ? pattern : key);
        if (it != cache_.end()) return it->second;
    }
    Eigen::VectorXd frame(static_cast<Eigen::Index>(key.size()));
    for (std::size_t i = 0; i < key.size(); ++i)
        frame(static_cast<Eigen::Index>(i)) = key[i];
    const PrecodeResult pos = precode_frame(frame, ops, gamma, beta);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, pos.p);
    auto [it, inserted] = cache_.emplace(pattern, flipped ? (-pos.p).eval() : pos.p);
    (void)inserted;
    return it->second;
}

}  // namespace zx
