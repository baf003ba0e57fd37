#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace zx {

/// min (1/2) x^T Q x  s.t.  A x <= b, with Q symmetric PSD.
struct QpProblem {
    Eigen::MatrixXd q_mat;
    Eigen::MatrixXd a_mat;
    Eigen::VectorXd b_vec;
    double ridge = 1e-10;  // added to the diagonal of q_mat before factorizing
};

enum class QpStatus { Converged, MaxIterations, Infeasible };

struct QpSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd duals;  // multipliers of A x <= b, nonnegative
    int iterations = 0;
    double primal_res = 0.0;
    double dual_res = 0.0;
    double gap = 0.0;
    QpStatus status = QpStatus::Converged;
};

struct QpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mehrotra predictor-corrector primal-dual interior point on dense
/// factorizations. Deterministic: same problem and tolerance give the same
/// iterate sequence.
QpSolution solve_qp(const QpProblem& problem, double tol = 1e-8, int max_iter = 100);

/// (primal_res, dual_res, gap) as used by the solver's stopping test:
/// max(0, max_i (Ax - b)_i), ||Qx + A^T lambda||_inf, |lambda^T s| / m.
struct KktResiduals {
    double primal_res = 0.0;
    double dual_res = 0.0;
    double gap = 0.0;
};
KktResiduals kkt_residuals(const QpProblem& problem, const QpSolution& solution);

}  // namespace zx
