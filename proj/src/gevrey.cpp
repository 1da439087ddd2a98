#include "toruslab/gevrey.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "toruslab/errors.hpp"
#include "toruslab/rng.hpp"

namespace toruslab {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Lower bound for sup |g| over T^n x {||I|| <= rho}: a per-axis uniform
// angle grid crossed with a small deterministic set of action points. The
// grid size is a multiple of 4 so multiples of pi/2 are hit exactly.
double sup_on_grid(const FourierTaylorSeries& g, double rho) {
    int n = g.dimension();
    int grid = n == 1 ? 64 : (n == 2 ? 24 : 8);

    std::vector<std::vector<double>> action_points;
    action_points.emplace_back(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        for (double s : {rho, -rho}) {
            std::vector<double> I(static_cast<std::size_t>(n), 0.0);
            I[static_cast<std::size_t>(j)] = s;
            action_points.push_back(std::move(I));
        }
    }
    SplitMix64 rng(0x4c6579u);
    for (int t = 0; t < 8; ++t) {
        std::vector<double> I = rng.sphere(n);
        for (double& v : I) v *= rho;
        action_points.push_back(std::move(I));
    }

    double best = 0.0;
    std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    const double twopi = 2.0 * std::numbers::pi;
    while (true) {
        for (int j = 0; j < n; ++j)
            theta[static_cast<std::size_t>(j)] = twopi * idx[static_cast<std::size_t>(j)] / grid;
        for (const auto& I : action_points)
            best = std::max(best, std::abs(g.evaluate(theta, I)));
        int pos = 0;
        while (pos < n && ++idx[static_cast<std::size_t>(pos)] == grid) {
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return best;
}

}  // namespace

GevreyNormEstimate gevrey_norm_estimate(const FourierTaylorSeries& f,
                                        const GevreyNormParams& params) {
    if (params.alpha < 1.0 || params.beta < 1.0)
        throw ConfigError("gevrey exponents must be >= 1");
    if (params.L1 <= 0.0 || params.L2 <= 0.0 || params.rho <= 0.0)
        throw ConfigError("gevrey scales must be > 0");

    int n = f.dimension();
    int cap = n >= 3 ? 2 : 4;
    int K = params.K_check >= 0 ? params.K_check : std::min(f.k_max(), cap);
    int M = params.M_check >= 0 ? params.M_check : std::min(f.m_max(), cap);

    GevreyNormEstimate est{params.alpha, params.beta, params.L1, params.L2,
                           params.rho,   0.0,         K,          M,
                           MultiIndex(static_cast<std::size_t>(n), 0),
                           MultiIndex(static_cast<std::size_t>(n), 0)};

    for (const MultiIndex& kd : monomials_in_range(n, 0, K)) {
        FourierTaylorSeries g = f;
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < kd[static_cast<std::size_t>(j)]; ++r)
                g = g.theta_derivative(j);
        for (const MultiIndex& ld : monomials_in_range(n, 0, M)) {
            FourierTaylorSeries gl = g;
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < ld[static_cast<std::size_t>(j)]; ++r)
                    gl = gl.action_derivative(j);
            if (gl.empty()) continue;

            double weight = std::pow(params.L1, -l1_norm(kd)) *
                            std::pow(params.L2, -l1_norm(ld));
            for (int j = 0; j < n; ++j) {
                weight *= std::pow(factorial(kd[static_cast<std::size_t>(j)]), -params.alpha);
                weight *= std::pow(factorial(ld[static_cast<std::size_t>(j)]), -params.beta);
            }
            double v = sup_on_grid(gl, params.rho) * weight;
            if (v > est.value) {
                est.value = v;
                est.argmax_k = kd;
                est.argmax_l = ld;
            }
        }
    }
    return est;
}

}  // namespace toruslab
