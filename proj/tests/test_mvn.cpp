#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "zx/mvn.hpp"

using namespace zx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MvnRectangle random_rect(std::mt19937_64& eng, int d) {
    std::normal_distribution<double> gauss;
    MvnRectangle r;
    Eigen::MatrixXd b(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = gauss(eng);
    r.sigma = b * b.transpose() + 0.2 * Eigen::MatrixXd::Identity(d, d);
    r.mu.resize(d);
    r.lower.resize(d);
    r.upper.resize(d);
    for (int i = 0; i < d; ++i) {
        r.mu(i) = gauss(eng);
        const double c = gauss(eng);
        r.lower(i) = c - 0.3 - 2.0 * std::abs(gauss(eng));
        r.upper(i) = c + 0.3 + 2.0 * std::abs(gauss(eng));
    }
    return r;
}

// plain Cholesky-sampled Monte Carlo oracle
std::pair<double, double> sampling_oracle(const MvnRectangle& r, std::uint64_t n,
                                          std::uint64_t seed) {
    const int d = static_cast<int>(r.mu.size());
    const Eigen::MatrixXd l = r.sigma.llt().matrixL();
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> gauss;
    std::uint64_t hits = 0;
    Eigen::VectorXd z(d);
    for (std::uint64_t k = 0; k < n; ++k) {
        for (int i = 0; i < d; ++i) z(i) = gauss(eng);
        const Eigen::VectorXd x = r.mu + l * z;
        bool in = true;
        for (int i = 0; i < d; ++i)
            if (x(i) < r.lower(i) || x(i) > r.upper(i)) in = false;
        hits += in;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace

TEST_CASE("normal quantile inverts the cdf") {
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
        CHECK(phi_cdf(phi_inv(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(phi_inv(0.5) == doctest::Approx(0.0));
    CHECK(phi_inv(0.0) == -kInf);
    CHECK(phi_inv(1.0) == kInf);
}

TEST_CASE("trivial identities") {
    MvnRectangle r;
    r.mu = Eigen::VectorXd::Zero(1);
    r.sigma = Eigen::MatrixXd::Identity(1, 1);
    r.lower = Eigen::VectorXd::Constant(1, 0.0);
    r.upper = Eigen::VectorXd::Constant(1, kInf);
    CHECK(mvn_rect_prob(r).p == doctest::Approx(0.5).epsilon(1e-9));

    MvnRectangle r2;
    r2.mu = Eigen::VectorXd::Zero(2);
    r2.sigma = Eigen::MatrixXd::Identity(2, 2);
    r2.lower = Eigen::VectorXd::Constant(2, 0.0);
    r2.upper = Eigen::VectorXd::Constant(2, kInf);
    CHECK(mvn_rect_prob(r2).p == doctest::Approx(0.25).epsilon(1e-6));

    MvnRectangle full;
    full.mu = Eigen::VectorXd::Zero(4);
    full.sigma = Eigen::MatrixXd::Identity(4, 4) * 1.7;
    full.lower = Eigen::VectorXd::Constant(4, -kInf);
    full.upper = Eigen::VectorXd::Constant(4, kInf);
    const auto res = mvn_rect_prob(full);
    CHECK(res.p == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("independent coordinates multiply") {
    MvnRectangle r;
    r.mu.resize(3);
    r.mu << 0.2, -0.5, 1.0;
    r.sigma = Eigen::MatrixXd::Zero(3, 3);
    r.sigma.diagonal() << 1.0, 4.0, 0.25;
    r.lower.resize(3);
    r.lower << -1.0, -kInf, 0.0;
    r.upper.resize(3);
    r.upper << 1.0, 1.0, kInf;
    double expect = 1.0;
    expect *= phi_cdf((1.0 - 0.2) / 1.0) - phi_cdf((-1.0 - 0.2) / 1.0);
    expect *= phi_cdf((1.0 + 0.5) / 2.0);
    expect *= 1.0 - phi_cdf((0.0 - 1.0) / 0.5);
    CHECK(mvn_rect_prob(r).p == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("reordered Cholesky reconstructs the permuted covariance") {
    std::mt19937_64 eng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(eng() % 4);
        const MvnRectangle r = random_rect(eng, d);
        const auto [l, perm] = cholesky_reordered(r.sigma, r.lower - r.mu, r.upper - r.mu);
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i) p(i, perm[static_cast<std::size_t>(i)]) = 1.0;
        CHECK((p * r.sigma * p.transpose() - l * l.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(
        cholesky_reordered(-Eigen::MatrixXd::Identity(2, 2),
                           Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)),
        NonPsdError);
}

TEST_CASE("monotone in the rectangle") {
    std::mt19937_64 eng(11);
    const MvnRectangle inner = random_rect(eng, 3);
    MvnRectangle outer = inner;
    outer.lower.array() -= 0.7;
    outer.upper.array() += 0.7;
    CHECK(mvn_rect_prob(outer).p >= mvn_rect_prob(inner).p - 1e-8);
}

TEST_CASE("fixed seed reproduces bit-for-bit; serial equals parallel") {
    std::mt19937_64 eng(17);
    const MvnRectangle r = random_rect(eng, 4);
    MvnOptions opts;
    opts.seed = 99;
    const auto a = mvn_rect_prob(r, opts);
    const auto b = mvn_rect_prob(r, opts);
    CHECK(a.p == b.p);
    CHECK(a.err_est == b.err_est);
    const auto c = mvn_rect_prob_serial(r, opts);
    CHECK(a.p == c.p);
    CHECK(a.err_est == c.err_est);
}

TEST_CASE("joint permutation changes the result within the error estimate") {
    std::mt19937_64 eng(23);
    const MvnRectangle r = random_rect(eng, 4);
    MvnRectangle shuffled;
    const std::vector<int> perm = {2, 0, 3, 1};
    shuffled.mu.resize(4);
    shuffled.lower.resize(4);
    shuffled.upper.resize(4);
    shuffled.sigma.resize(4, 4);
    for (int i = 0; i < 4; ++i) {
        shuffled.mu(i) = r.mu(perm[static_cast<std::size_t>(i)]);
        shuffled.lower(i) = r.lower(perm[static_cast<std::size_t>(i)]);
        shuffled.upper(i) = r.upper(perm[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 4; ++j)
            shuffled.sigma(i, j) = r.sigma(perm[static_cast<std::size_t>(i)],
                                           perm[static_cast<std::size_t>(j)]);
    }
    const auto a = mvn_rect_prob(r);
    const auto b = mvn_rect_prob(shuffled);
    CHECK(std::abs(a.p - b.p) <= a.err_est + b.err_est + 1e-9);
}

TEST_CASE("agreement with the plain sampling oracle") {
    std::mt19937_64 eng(31);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 2 + static_cast<int>(eng() % 4);
        const MvnRectangle r = random_rect(eng, d);
        MvnOptions opts;
        opts.seed = 1000 + static_cast<std::uint64_t>(rep);
        const auto qmc = mvn_rect_prob(r, opts);
        const auto [p, se] = sampling_oracle(r, 1000000, 77 + static_cast<std::uint64_t>(rep));
        CHECK(std::abs(qmc.p - p) <= 3.0 * se + qmc.err_est);
    }
}
