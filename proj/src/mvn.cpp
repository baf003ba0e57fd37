#include "zx/mvn.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace zx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double splitmix64_double(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double phi_at(double x) {
    if (x == -kInf) return 0.0;
    if (x == kInf) return 1.0;
    return phi_cdf(x);
}

// first `count` primes, for the square-root lattice generators
std::vector<double> first_primes(int count) {
    std::vector<double> primes;
    primes.reserve(static_cast<std::size_t>(count));
    for (int n = 2; static_cast<int>(primes.size()) < count; ++n) {
        bool is_prime = true;
        for (int p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                is_prime = false;
                break;
            }
        if (is_prime) primes.push_back(static_cast<double>(n));
    }
    return primes;
}

}  // namespace

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Wichura's AS241 rational approximations (PPND16), |error| < 1e-15.
double phi_inv(double p) {
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

std::pair<Eigen::MatrixXd, std::vector<int>> cholesky_reordered(
    const Eigen::MatrixXd& sigma, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper) {
    const int d = static_cast<int>(sigma.rows());
    Eigen::MatrixXd c = sigma;
    Eigen::VectorXd a = lower, b = upper;
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(d);

    for (int i = 0; i < d; ++i) {
        // pick the remaining variable with the least conditional mass
        int best = i;
        double best_p = 2.0;
        for (int j = i; j < d; ++j) {
            double var = c(j, j);
            double mean = 0.0;
            for (int k = 0; k < i; ++k) {
                var -= l(j, k) * l(j, k);
                mean += l(j, k) * y(k);
            }
            if (var < -1e-10) throw NonPsdError("covariance is not PSD");
            const double sd = std::sqrt(std::max(var, 0.0));
            double pj = 1.0;
            if (sd > 0.0)
                pj = phi_at(b(j) == kInf ? kInf : (b(j) - mean) / sd) -
                     phi_at(a(j) == -kInf ? -kInf : (a(j) - mean) / sd);
            if (pj < best_p) {
                best_p = pj;
                best = j;
            }
        }
        if (best != i) {
            c.row(i).swap(c.row(best));
            c.col(i).swap(c.col(best));
            l.row(i).swap(l.row(best));
            std::swap(a(i), a(best));
            std::swap(b(i), b(best));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(best)]);
        }
        double var = c(i, i);
        double mean = 0.0;
        for (int k = 0; k < i; ++k) {
            var -= l(i, k) * l(i, k);
            mean += l(i, k) * y(k);
        }
        if (var < -1e-10) throw NonPsdError("covariance is not PSD");
        const double lii = std::sqrt(std::max(var, 1e-300));
        l(i, i) = lii;
        for (int j = i + 1; j < d; ++j) {
            double s = c(j, i);
            for (int k = 0; k < i; ++k) s -= l(i, k) * l(j, k);
            l(j, i) = s / lii;
        }
        // conditional expectation of the truncated coordinate, used to rank
        // the remaining variables
        const double at = a(i) == -kInf ? -kInf : (a(i) - mean) / lii;
        const double bt = b(i) == kInf ? kInf : (b(i) - mean) / lii;
        const double pa = phi_at(at), pb = phi_at(bt);
        const double da = at == -kInf ? 0.0 : std::exp(-0.5 * at * at) / std::sqrt(2.0 * std::numbers::pi);
        const double db = bt == kInf ? 0.0 : std::exp(-0.5 * bt * bt) / std::sqrt(2.0 * std::numbers::pi);
        y(i) = pb - pa > 1e-300 ? (da - db) / (pb - pa) : 0.5 * (std::max(at, -10.0) + std::min(bt, 10.0));
    }
    return {l, perm};
}

namespace {

struct SovProblem {
    Eigen::MatrixXd l;
    Eigen::VectorXd a, b;  // centered, permuted bounds
    int d = 0;
};

// Genz separation-of-variables integrand at one point u in [0,1)^(d-1).
double sov_eval(const SovProblem& p, const double* u) {
    const int d = p.d;
    double lo = p.a(0) == -kInf ? 0.0 : phi_cdf(p.a(0) / p.l(0, 0));
    double hi = p.b(0) == kInf ? 1.0 : phi_cdf(p.b(0) / p.l(0, 0));
    double f = hi - lo;
    double y[32];
    for (int i = 1; i < d; ++i) {
        const double z = std::clamp(lo + u[i - 1] * (hi - lo), 1e-16, 1.0 - 1e-16);
        y[i - 1] = phi_inv(z);
        double t = 0.0;
        for (int k = 0; k < i; ++k) t += p.l(i, k) * y[k];
        lo = p.a(i) == -kInf ? 0.0 : phi_cdf((p.a(i) - t) / p.l(i, i));
        hi = p.b(i) == kInf ? 1.0 : phi_cdf((p.b(i) - t) / p.l(i, i));
        f *= std::max(hi - lo, 0.0);
    }
    return f;
}

}  // namespace

MvnResult mvn_rect_prob(const MvnRectangle& rect, const MvnOptions& opts) {
    const int d = static_cast<int>(rect.mu.size());
    if (d < 1 || d > 25) throw std::invalid_argument("dimension must be in 1..25");
    for (int i = 0; i < d; ++i)
        if (!(rect.lower(i) < rect.upper(i)))
            throw std::invalid_argument("lower bound must be below upper bound");

    const Eigen::VectorXd lo = rect.lower - rect.mu;
    const Eigen::VectorXd hi = rect.upper - rect.mu;

    if (d == 1) {
        const double sd = std::sqrt(rect.sigma(0, 0));
        return {phi_at(hi(0) == kInf ? kInf : hi(0) / sd) -
                    phi_at(lo(0) == -kInf ? -kInf : lo(0) / sd),
                0.0};
    }

    SovProblem prob;
    auto [l, perm] = cholesky_reordered(rect.sigma, lo, hi);
    prob.l = std::move(l);
    prob.d = d;
    prob.a.resize(d);
    prob.b.resize(d);
    for (int i = 0; i < d; ++i) {
        prob.a(i) = lo(perm[static_cast<std::size_t>(i)]);
        prob.b(i) = hi(perm[static_cast<std::size_t>(i)]);
    }

    const int n_shifts = std::max(opts.shifts, 2);
    const int du = d - 1;
    // a distinct generating vector per shift: the ensemble spread then also
    // reflects the deterministic lattice error, not just the shift variance
    std::vector<double> q(static_cast<std::size_t>(n_shifts * du));
    {
        const std::vector<double> primes = first_primes(n_shifts * du);
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double r = std::sqrt(primes[k]);
            q[k] = r - std::floor(r);
        }
    }
    // fixed per-shift random offsets; the point sequence of each shift is
    // deterministic regardless of threading
    std::vector<double> delta(static_cast<std::size_t>(n_shifts * du));
    {
        std::uint64_t state = opts.seed ^ 0xa5a5a5a5deadbeefull;
        for (double& v : delta) v = splitmix64_double(state);
    }

    std::vector<double> sums(static_cast<std::size_t>(n_shifts), 0.0);
    std::uint64_t per_shift_done = 0;
    const std::uint64_t per_shift_cap =
        std::max<std::uint64_t>(opts.max_samples / static_cast<std::uint64_t>(n_shifts), 64);
    // near-degenerate integrands (mass ~ 1 with a thin boundary layer) show a
    // deceptively small shift variance at low point counts; demand a minimum
    // sample size before trusting the error estimate when eps is tight
    const std::uint64_t per_shift_min =
        std::min<std::uint64_t>(opts.eps < 1e-4 ? 8192 : 128, per_shift_cap);

    MvnResult res;
    std::uint64_t chunk = 128;
    while (per_shift_done < per_shift_cap) {
        const std::uint64_t todo = std::min<std::uint64_t>(chunk, per_shift_cap - per_shift_done);
#pragma omp parallel for schedule(static) if (opts.parallel)
        for (int s = 0; s < n_shifts; ++s) {
            double acc = 0.0;
            double u[32];
            const double* dlt = &delta[static_cast<std::size_t>(s * du)];
            const double* qs = &q[static_cast<std::size_t>(s * du)];
            for (std::uint64_t j = per_shift_done; j < per_shift_done + todo; ++j) {
                for (int k = 0; k < du; ++k) {
                    double v = static_cast<double>(j + 1) * qs[k] + dlt[k];
                    v -= std::floor(v);
                    u[k] = std::abs(2.0 * v - 1.0);  // baker's transform
                }
                acc += sov_eval(prob, u);
            }
            sums[static_cast<std::size_t>(s)] += acc;
        }
        per_shift_done += todo;
        chunk = std::min<std::uint64_t>(chunk * 2, 65536);

        double mean = 0.0;
        for (double v : sums) mean += v;
        mean /= static_cast<double>(n_shifts) * static_cast<double>(per_shift_done);
        double var = 0.0;
        for (double v : sums) {
            const double e = v / static_cast<double>(per_shift_done) - mean;
            var += e * e;
        }
        var /= static_cast<double>(n_shifts) * static_cast<double>(n_shifts - 1);
        res.p = std::clamp(mean, 0.0, 1.0);
        res.err_est = 3.0 * std::sqrt(var);
        if (per_shift_done >= per_shift_min && res.err_est <= opts.eps) break;
    }
    return res;
}

MvnResult mvn_rect_prob_serial(const MvnRectangle& rect, MvnOptions opts) {
    opts.parallel = false;
    return mvn_rect_prob(rect, opts);
}

}  // namespace zx
