#include "toruslab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toruslab/errors.hpp"

namespace toruslab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_angle(double x) {
    double w = std::fmod(x, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

bool finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

CompiledHamiltonian::CompiledHamiltonian(const FourierTaylorSeries& H) {
    n_ = H.dimension();
    for (const auto& [k, l] : H.sorted_indices()) {
        if (!is_canonical(k)) continue;
        auto c = H.coefficient(k, l);
        Term t;
        t.k = k;
        t.l = l;
        if (is_zero(k)) {
            t.A = c.real();
            t.B = 0.0;
        } else {
            t.A = 2.0 * c.real();
            t.B = -2.0 * c.imag();
            if (l1_norm(l) != 0) decomposable_ = false;
        }
        if (t.A == 0.0 && t.B == 0.0) continue;
        terms_.push_back(std::move(t));
    }
}

double CompiledHamiltonian::value(const std::vector<double>& theta,
                                  const std::vector<double>& I) const {
    double total = 0.0;
    for (const auto& t : terms_) {
        double phase = 0.0;
        for (int j = 0; j < n_; ++j)
            phase += t.k[static_cast<std::size_t>(j)] * theta[static_cast<std::size_t>(j)];
        double amp = t.A * std::cos(phase) + t.B * std::sin(phase);
        double prod = 1.0;
        for (int j = 0; j < n_; ++j)
            for (int p = 0; p < t.l[static_cast<std::size_t>(j)]; ++p)
                prod *= I[static_cast<std::size_t>(j)];
        total += amp * prod;
    }
    return total;
}

void CompiledHamiltonian::grad_theta(const std::vector<double>& theta,
                                     const std::vector<double>& I,
                                     std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(n_), 0.0);
    for (const auto& t : terms_) {
        if (is_zero(t.k)) continue;
        double phase = 0.0;
        for (int j = 0; j < n_; ++j)
            phase += t.k[static_cast<std::size_t>(j)] * theta[static_cast<std::size_t>(j)];
        double damp = -t.A * std::sin(phase) + t.B * std::cos(phase);
        double prod = 1.0;
        for (int j = 0; j < n_; ++j)
            for (int p = 0; p < t.l[static_cast<std::size_t>(j)]; ++p)
                prod *= I[static_cast<std::size_t>(j)];
        double f = damp * prod;
        for (int j = 0; j < n_; ++j)
            out[static_cast<std::size_t>(j)] += f * t.k[static_cast<std::size_t>(j)];
    }
}

void CompiledHamiltonian::grad_I(const std::vector<double>& theta,
                                 const std::vector<double>& I,
                                 std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(n_), 0.0);
    for (const auto& t : terms_) {
        if (l1_norm(t.l) == 0) continue;
        double phase = 0.0;
        for (int j = 0; j < n_; ++j)
            phase += t.k[static_cast<std::size_t>(j)] * theta[static_cast<std::size_t>(j)];
        double amp = t.A * std::cos(phase) + t.B * std::sin(phase);
        for (int j = 0; j < n_; ++j) {
            int lj = t.l[static_cast<std::size_t>(j)];
            if (lj == 0) continue;
            double prod = lj;
            for (int jj = 0; jj < n_; ++jj) {
                int p = t.l[static_cast<std::size_t>(jj)] - (jj == j ? 1 : 0);
                for (int q = 0; q < p; ++q)
                    prod *= I[static_cast<std::size_t>(jj)];
            }
            out[static_cast<std::size_t>(j)] += amp * prod;
        }
    }
}

double CompiledHamiltonian::max_grad_theta_bound() const {
    // sup over the unit action polydisc: sum of amplitude |k_j| per axis.
    double best = 0.0;
    for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (const auto& t : terms_)
            s += std::sqrt(t.A * t.A + t.B * t.B) *
                 std::abs(t.k[static_cast<std::size_t>(j)]);
        best = std::max(best, s);
    }
    return best;
}

double default_time_step(const CompiledHamiltonian& H, double dt) {
    if (dt > 0.0) return dt;
    double b = H.max_grad_theta_bound();
    if (!(b > 0.0)) return 0.1;
    return std::min(0.1, 0.01 / b);
}

void step_splitting(const CompiledHamiltonian& H, double dt,
                    std::vector<double>& theta, std::vector<double>& I) {
    std::vector<double> g(theta.size());
    H.grad_theta(theta, I, g);
    for (std::size_t j = 0; j < I.size(); ++j) I[j] -= 0.5 * dt * g[j];
    H.grad_I(theta, I, g);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += dt * g[j];
    H.grad_theta(theta, I, g);
    for (std::size_t j = 0; j < I.size(); ++j) I[j] -= 0.5 * dt * g[j];
}

void step_implicit_midpoint(const CompiledHamiltonian& H, double dt,
                            std::vector<double>& theta,
                            std::vector<double>& I, double tol,
                            int max_iters) {
    std::size_t n = theta.size();
    std::vector<double> wt = theta, wi = I, gt(n), gi(n), nt(n), ni(n);
    // Fixed point of w = z + (dt/2) F(w), then z' = 2w - z.
    for (int it = 0; it < max_iters; ++it) {
        H.grad_I(wt, wi, gi);
        H.grad_theta(wt, wi, gt);
        double diff = 0.0, scale = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            nt[j] = theta[j] + 0.5 * dt * gi[j];
            ni[j] = I[j] - 0.5 * dt * gt[j];
            diff = std::max({diff, std::abs(nt[j] - wt[j]), std::abs(ni[j] - wi[j])});
            scale = std::max({scale, std::abs(nt[j]), std::abs(ni[j])});
        }
        wt.swap(nt);
        wi.swap(ni);
        if (diff <= tol * scale) {
            for (std::size_t j = 0; j < n; ++j) {
                theta[j] = 2.0 * wt[j] - theta[j];
                I[j] = 2.0 * wi[j] - I[j];
            }
            return;
        }
    }
    throw IntegrationError("implicit midpoint solve did not converge");
}

TrajectorySummary integrate(const CompiledHamiltonian& H, const PhasePoint& z0,
                            double dt, long long steps, Scheme scheme,
                            long long checkpoint_stride) {
    int n = H.dimension();
    if (static_cast<int>(z0.theta.size()) != n ||
        static_cast<int>(z0.I.size()) != n)
        throw ConfigError("initial point dimension does not match the series");
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    if (steps < 0) throw ConfigError("step count must be >= 0");

    Scheme used = scheme;
    if (used == Scheme::Auto)
        used = H.decomposable() ? Scheme::Splitting : Scheme::ImplicitMidpoint;

    TrajectorySummary out;
    out.dt = dt;
    out.scheme = used;

    std::vector<double> theta = z0.theta, I = z0.I;
    auto record = [&](double t) {
        PhasePoint p;
        p.theta.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            p.theta[static_cast<std::size_t>(j)] = wrap_angle(theta[static_cast<std::size_t>(j)]);
        p.I = I;
        out.times.push_back(t);
        out.states.push_back(std::move(p));
        out.energies.push_back(H.value(theta, I));
    };

    record(0.0);
    double e0 = out.energies.front();
    for (long long s = 1; s <= steps; ++s) {
        try {
            if (used == Scheme::Splitting)
                step_splitting(H, dt, theta, I);
            else
                step_implicit_midpoint(H, dt, theta, I);
        } catch (const IntegrationError& e) {
            out.ok = false;
            out.error = e.what();
            break;
        }
        if (!finite(theta) || !finite(I)) {
            out.ok = false;
            out.error = "non-finite state";
            break;
        }
        out.steps = s;
        bool last = (s == steps);
        if ((checkpoint_stride > 0 && s % checkpoint_stride == 0) || last) {
            record(s * dt);
            out.energy_drift = std::max(out.energy_drift,
                                        std::abs(out.energies.back() - e0));
        }
    }
    if (!out.ok && (out.times.empty() || out.times.back() < out.steps * dt))
        record(out.steps * dt);
    return out;
}

double circular_distance(double a, double b) {
    double d = std::fmod(a - b, two_pi);
    if (d < -std::numbers::pi) d += two_pi;
    if (d > std::numbers::pi) d -= two_pi;
    return std::abs(d);
}

}  // namespace toruslab
