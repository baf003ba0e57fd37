#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace zx {

/// P(lower <= X <= upper) for X ~ N(mu, sigma); -inf/+inf bounds allowed.
struct MvnRectangle {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

struct MvnResult {
    double p = 0.0;
    double err_est = 0.0;  // 3x the shift-ensemble standard error
};

struct NonPsdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MvnOptions {
    double eps = 1e-5;
    std::uint64_t max_samples = 1u << 20;
    std::uint64_t seed = 0;
    int shifts = 12;
    bool parallel = true;  // distribute the random shifts over OpenMP threads
};

/// Standard normal CDF and its inverse (Wichura's AS241 algorithm).
double phi_cdf(double x);
double phi_inv(double p);

/// Cholesky factorization of sigma under a variable permutation chosen
/// greedily so that coordinates with the least conditional truncation mass
/// come first (reduces quasi-Monte Carlo error). P sigma P^T = L L^T.
std::pair<Eigen::MatrixXd, std::vector<int>> cholesky_reordered(
    const Eigen::MatrixXd& sigma, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper);

/// Separation-of-variables transform with randomized Richtmyer
/// quasi-Monte Carlo over opts.shifts independent shifts; the reduction over
/// shifts is in fixed order, so the result does not depend on scheduling.
MvnResult mvn_rect_prob(const MvnRectangle& rect, const MvnOptions& opts = {});

/// Single-threaded reference path (identical result to the parallel one).
MvnResult mvn_rect_prob_serial(const MvnRectangle& rect, MvnOptions opts = {});

}  // namespace zx
