#include "toruslab/escape.hpp"

#include <cmath>
#include <numbers>

#include "toruslab/errors.hpp"
#include "toruslab/rng.hpp"

namespace toruslab {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return std::sqrt(s);
}

bool finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

EscapeTimeRecord escape_time(const CompiledHamiltonian& H,
                             const std::vector<double>& I_star, double r,
                             double dt, long long max_steps,
                             std::uint64_t seed, long long energy_stride) {
    int n = H.dimension();
    if (static_cast<int>(I_star.size()) != n)
        throw ConfigError("torus action dimension does not match the series");
    if (!(r > 0.0)) throw ConfigError("initial radius must be positive");
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    if (max_steps < 1) throw ConfigError("step budget must be >= 1");
    if (energy_stride < 1) energy_stride = 1;

    EscapeTimeRecord rec;
    rec.r = r;
    rec.I_star = I_star;
    rec.dt = dt;
    rec.seed = seed;

    // Angles first, then the action direction, so the draw order is part
    // of the record's contract.
    SplitMix64 rng(seed);
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (double& t : theta) t = 2.0 * std::numbers::pi * rng.uniform01();
    std::vector<double> dir = rng.sphere(n);
    std::vector<double> I = I_star;
    for (int j = 0; j < n; ++j)
        I[static_cast<std::size_t>(j)] += r * dir[static_cast<std::size_t>(j)];
    rec.initial = {theta, I};

    bool splitting = H.decomposable();
    double e0 = H.value(theta, I);
    double d_prev = distance(I, I_star);
    double exit_radius = 2.0 * r;

    long long s = 0;
    for (s = 1; s <= max_steps; ++s) {
        try {
            if (splitting)
                step_splitting(H, dt, theta, I);
            else
                step_implicit_midpoint(H, dt, theta, I);
        } catch (const IntegrationError& e) {
            rec.ok = false;
            rec.error = e.what();
            rec.censored = true;
            rec.escape_time = (s - 1) * dt;
            rec.exit_norm = d_prev;
            rec.steps = s - 1;
            return rec;
        }
        if (!finite(theta) || !finite(I)) {
            rec.ok = false;
            rec.error = "non-finite state";
            rec.censored = true;
            rec.escape_time = (s - 1) * dt;
            rec.exit_norm = d_prev;
            rec.steps = s - 1;
            return rec;
        }
        double d = distance(I, I_star);
        if (d >= exit_radius) {
            double frac = (d == d_prev) ? 1.0 : (exit_radius - d_prev) / (d - d_prev);
            rec.escape_time = (s - 1) * dt + frac * dt;
            rec.exit_norm = d;
            rec.steps = s;
            rec.energy_drift = std::max(rec.energy_drift,
                                        std::abs(H.value(theta, I) - e0));
            return rec;
        }
        d_prev = d;
        if (s % energy_stride == 0)
            rec.energy_drift = std::max(rec.energy_drift,
                                        std::abs(H.value(theta, I) - e0));
    }
    rec.censored = true;
    rec.escape_time = max_steps * dt;
    rec.exit_norm = d_prev;
    rec.steps = max_steps;
    rec.energy_drift = std::max(rec.energy_drift,
                                std::abs(H.value(theta, I) - e0));
    return rec;
}

}  // namespace toruslab
