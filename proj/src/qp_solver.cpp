#include "zx/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zx {

namespace {

void check_problem(const QpProblem& p) {
    const auto n = p.q_mat.rows();
    if (p.q_mat.cols() != n) throw QpError("q_mat must be square");
    if ((p.q_mat - p.q_mat.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + p.q_mat.cwiseAbs().maxCoeff()))
        throw QpError("q_mat must be symmetric");
    if (p.a_mat.cols() != n) throw QpError("a_mat column count must match q_mat");
    if (p.b_vec.size() != p.a_mat.rows()) throw QpError("b_vec length must match a_mat rows");
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem, double tol, int max_iter) {
    check_problem(problem);
    const auto n = problem.q_mat.rows();
    const auto m = problem.a_mat.rows();
    const Eigen::MatrixXd q = problem.q_mat +
                              problem.ridge * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd& a = problem.a_mat;
    const Eigen::VectorXd& b = problem.b_vec;

    QpSolution sol;
    if (m == 0) {
        sol.x = q.ldlt().solve(Eigen::VectorXd::Zero(n));
        sol.duals = Eigen::VectorXd::Zero(0);
        return sol;
    }

    // start: push x = 0 toward strict feasibility along -A^T 1 when possible
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    {
        const Eigen::VectorXd dir = -a.transpose() * Eigen::VectorXd::Ones(m);
        if (dir.norm() > 1e-12) {
            const Eigen::VectorXd ad = a * dir;
            double t = 0.0;
            for (Eigen::Index i = 0; i < m; ++i)
                if (ad(i) < -1e-12) t = std::max(t, (1.0 - b(i)) / (-ad(i)));
            x = t * dir;
        }
    }
    Eigen::VectorXd s = b - a * x;
    for (Eigen::Index i = 0; i < m; ++i) s(i) = std::max(s(i), 1.0);
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(m);

    const double bnorm = 1.0 + b.lpNorm<Eigen::Infinity>();
    const double step_frac = 0.995;
    QpSolution best;
    double best_merit = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd r_d = q * x + a.transpose() * lam;
        const Eigen::VectorXd r_p = a * x + s - b;
        const double mu = lam.dot(s) / static_cast<double>(m);

        sol.primal_res = r_p.lpNorm<Eigen::Infinity>() / bnorm;
        // relative to the magnitude of the two gradient terms: near degenerate
        // active sets the absolute residual bottoms out at machine precision
        sol.dual_res = r_d.lpNorm<Eigen::Infinity>() /
                       (1.0 + (q * x).lpNorm<Eigen::Infinity>() +
                        (a.transpose() * lam).lpNorm<Eigen::Infinity>());
        sol.gap = mu;
        sol.iterations = it - 1;
        if (sol.primal_res <= tol && sol.dual_res <= tol && sol.gap <= tol) {
            sol.x = x;
            sol.duals = lam;
            sol.status = QpStatus::Converged;
            return sol;
        }
        const double merit = std::max({sol.primal_res, sol.dual_res, sol.gap});
        if (merit < best_merit) {
            best_merit = merit;
            best = sol;
            best.x = x;
            best.duals = lam;
        }

        // lambda_i / s_i, clamped so nearly-active constraints cannot overflow
        const Eigen::VectorXd d =
            lam.cwiseQuotient(s.cwiseMax(1e-14)).cwiseMin(1e14);
        Eigen::MatrixXd kkt = q;
        kkt.noalias() += a.transpose() * d.asDiagonal() * a;
        Eigen::LLT<Eigen::MatrixXd> llt(kkt);
        for (double reg = 1e-12; llt.info() != Eigen::Success && reg <= 1e-4; reg *= 100.0)
            llt.compute(kkt + reg * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() != Eigen::Success) throw QpError("KKT factorization failed");

        auto solve_step = [&](const Eigen::VectorXd& r_sz) {
            // eliminate ds, dlam; r_sz is the complementarity residual target
            const Eigen::VectorXd rhs =
                -r_d + a.transpose() * (r_sz.cwiseQuotient(s) - d.cwiseProduct(r_p));
            const Eigen::VectorXd dx = llt.solve(rhs);
            const Eigen::VectorXd ds = -r_p - a * dx;
            const Eigen::VectorXd dlam = -(r_sz + lam.cwiseProduct(ds)).cwiseQuotient(s);
            return std::make_pair(dx, std::make_pair(ds, dlam));
        };
        auto max_step = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
            double alpha = 1.0;
            for (Eigen::Index i = 0; i < m; ++i)
                if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
            return alpha;
        };

        // affine (predictor) step
        const Eigen::VectorXd r_sz_aff = lam.cwiseProduct(s);
        auto [dx_aff, rest_aff] = solve_step(r_sz_aff);
        const auto& [ds_aff, dlam_aff] = rest_aff;
        const double alpha_aff =
            std::min(max_step(s, ds_aff), max_step(lam, dlam_aff));
        const double mu_aff =
            (lam + alpha_aff * dlam_aff).dot(s + alpha_aff * ds_aff) / static_cast<double>(m);
        const double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);

        // corrector step with centering
        const Eigen::VectorXd r_sz =
            lam.cwiseProduct(s) + dlam_aff.cwiseProduct(ds_aff) -
            sigma * mu * Eigen::VectorXd::Ones(m);
        auto [dx, rest] = solve_step(r_sz);
        const auto& [ds, dlam] = rest;
        const double alpha_p = step_frac * max_step(s, ds);
        const double alpha_d = step_frac * max_step(lam, dlam);

        x += alpha_p * dx;
        s += alpha_p * ds;
        lam += alpha_d * dlam;

        if (lam.lpNorm<Eigen::Infinity>() > 1e12 && sol.primal_res > std::sqrt(tol)) {
            sol.x = x;
            sol.duals = lam;
            sol.status = QpStatus::Infeasible;
            return sol;
        }
    }
    if (std::isfinite(best_merit)) {
        best.iterations = max_iter;
        best.status = QpStatus::MaxIterations;
        return best;
    }
    sol.x = x;
    sol.duals = lam;
    sol.iterations = max_iter;
    sol.status = QpStatus::MaxIterations;
    return sol;
}

KktResiduals kkt_residuals(const QpProblem& problem, const QpSolution& solution) {
    KktResiduals r;
    const Eigen::VectorXd slack = problem.b_vec - problem.a_mat * solution.x;
    r.primal_res = slack.size() > 0 ? std::max(0.0, (-slack).maxCoeff()) : 0.0;
    r.dual_res = (problem.q_mat * solution.x +
                  problem.a_mat.transpose() * solution.duals)
                     .lpNorm<Eigen::Infinity>();
    r.gap = slack.size() > 0
                ? std::abs(solution.duals.dot(slack)) / static_cast<double>(slack.size())
                : 0.0;
    return r;
}

}  // namespace zx
