#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "toruslab/errors.hpp"
#include "toruslab/escape.hpp"
#include "toruslab/integrator.hpp"

using namespace toruslab;

namespace {

constexpr double kPi = std::numbers::pi;

FourierTaylorSeries pendulum(double omega, double eps) {
    FourierTaylorSeries H(1, 1, 2);
    H.add_action({1}, omega);
    H.add_action({2}, 0.5);
    H.add_cos({1}, {0}, eps);
    return H;
}

FourierTaylorSeries coupled(double g) {
    // Not decomposable: the oscillating term carries action dependence.
    FourierTaylorSeries H(2, 2, 2);
    H.add_action({1, 0}, 1.0);
    H.add_action({0, 1}, 1.3);
    H.add_action({2, 0}, 0.5);
    H.add_action({0, 2}, 0.5);
    H.add_cos({1, -1}, {2, 0}, g);
    H.add_cos({1, -1}, {0, 2}, g);
    return H;
}

double max_energy_drift(const CompiledHamiltonian& H, const PhasePoint& z0,
                        double dt, long long steps) {
    auto traj = integrate(H, z0, dt, steps, Scheme::Auto, steps / 100);
    REQUIRE(traj.ok);
    return traj.energy_drift;
}

// det by partial-pivot elimination, for the symplecticity probe.
double dense_det(std::vector<std::vector<double>> a) {
    int n = static_cast<int>(a.size());
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            double f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

}  // namespace

TEST_CASE("compiled Hamiltonian matches the series") {
    auto H = coupled(0.2);
    CompiledHamiltonian ch(H);
    CHECK(!ch.decomposable());
    CHECK(ch.dimension() == 2);

    std::vector<double> theta{0.4, 2.1}, I{0.3, -0.2};
    CHECK(ch.value(theta, I) == doctest::Approx(H.evaluate(theta, I)).epsilon(1e-14));

    double h = 1e-6;
    std::vector<double> gt(2), gI(2);
    ch.grad_theta(theta, I, gt);
    ch.grad_I(theta, I, gI);
    for (int j = 0; j < 2; ++j) {
        auto tp = theta, tm = theta;
        tp[j] += h;
        tm[j] -= h;
        CHECK(gt[j] ==
              doctest::Approx((ch.value(tp, I) - ch.value(tm, I)) / (2 * h)).epsilon(1e-7));
        auto Ip = I, Im = I;
        Ip[j] += h;
        Im[j] -= h;
        CHECK(gI[j] ==
              doctest::Approx((ch.value(theta, Ip) - ch.value(theta, Im)) / (2 * h)).epsilon(1e-7));
    }

    CompiledHamiltonian pend(pendulum(1.0, 0.1));
    CHECK(pend.decomposable());
}

TEST_CASE("default time step follows the gradient bound") {
    CompiledHamiltonian weak(pendulum(1.0, 0.1));
    CHECK(default_time_step(weak) == doctest::Approx(std::min(0.1, 0.01 / 0.1)));
    CompiledHamiltonian strong(pendulum(1.0, 10.0));
    CHECK(default_time_step(strong) == doctest::Approx(0.001));
    FourierTaylorSeries flat(1, 0, 2);
    flat.add_action({2}, 0.5);
    CHECK(default_time_step(CompiledHamiltonian(flat)) == 0.1);
    CHECK(default_time_step(strong, 0.02) == 0.02);
}

TEST_CASE("linear flow is integrated exactly") {
    FourierTaylorSeries H(2, 0, 1);
    H.add_action({1, 0}, 0.7);
    H.add_action({0, 1}, 1.1);
    CompiledHamiltonian ch(H);

    PhasePoint z0{{0.2, 5.9}, {0.4, -0.3}};
    auto traj = integrate(ch, z0, 0.05, 200);
    REQUIRE(traj.ok);
    const auto& zf = traj.states.back();
    CHECK(circular_distance(zf.theta[0], std::fmod(0.2 + 200 * 0.05 * 0.7, 2 * kPi)) < 1e-12);
    CHECK(circular_distance(zf.theta[1], std::fmod(5.9 + 200 * 0.05 * 1.1, 2 * kPi)) < 1e-12);
    CHECK(zf.I[0] == 0.4);
    CHECK(zf.I[1] == -0.3);
    CHECK(traj.energy_drift == 0.0);
    CHECK(traj.scheme == Scheme::Splitting);
}

TEST_CASE("one splitting step is kick drift kick") {
    CompiledHamiltonian ch(pendulum(1.0, 0.1));
    double dt = 0.01;
    std::vector<double> theta{0.7}, I{0.2};
    step_splitting(ch, dt, theta, I);

    // By hand: I' = I + (dt/2) eps sin theta, theta' = theta + dt (omega + I'),
    // I'' = I' + (dt/2) eps sin theta'.
    double i1 = 0.2 + 0.5 * dt * 0.1 * std::sin(0.7);
    double th1 = 0.7 + dt * (1.0 + i1);
    double i2 = i1 + 0.5 * dt * 0.1 * std::sin(th1);
    CHECK(theta[0] == doctest::Approx(th1).epsilon(1e-15));
    CHECK(I[0] == doctest::Approx(i2).epsilon(1e-15));
}

TEST_CASE("averaging bound for a linear system with one harmonic") {
    // H = omega I + eps cos theta: |I(t) - I(0)| <= 2 eps / omega exactly.
    FourierTaylorSeries H(1, 1, 1);
    H.add_action({1}, 1.0);
    H.add_cos({1}, {0}, 0.05);
    CompiledHamiltonian ch(H);

    PhasePoint z0{{0.3}, {0.0}};
    auto traj = integrate(ch, z0, 0.01, 20000, Scheme::Auto, 50);
    REQUIRE(traj.ok);
    double bound = 2.0 * 0.05 / 1.0;
    for (const auto& st : traj.states)
        CHECK(std::abs(st.I[0]) <= bound * 1.01 + 1e-9);
}

TEST_CASE("splitting drift scales as dt^2") {
    CompiledHamiltonian ch(pendulum(1.0, 0.1));
    PhasePoint z0{{0.5}, {0.1}};
    double d1 = max_energy_drift(ch, z0, 1e-2, 10000);
    double d2 = max_energy_drift(ch, z0, 5e-3, 20000);
    REQUIRE(d2 > 0.0);
    double ratio = d1 / d2;
    CHECK(ratio > 3.3);
    CHECK(ratio < 4.7);
}

TEST_CASE("midpoint drift scales as dt^2 on a coupled system") {
    CompiledHamiltonian ch(coupled(0.2));
    PhasePoint z0{{0.4, 1.9}, {0.25, -0.15}};
    double d1 = max_energy_drift(ch, z0, 2e-2, 4000);
    double d2 = max_energy_drift(ch, z0, 1e-2, 8000);
    REQUIRE(d2 > 0.0);
    double ratio = d1 / d2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("forward-backward reversibility") {
    CompiledHamiltonian pend(pendulum(1.0, 0.1));
    std::vector<double> theta{0.3}, I{0.2};
    for (int s = 0; s < 2000; ++s) step_splitting(pend, 0.01, theta, I);
    for (int s = 0; s < 2000; ++s) step_splitting(pend, -0.01, theta, I);
    CHECK(std::abs(theta[0] - 0.3) < 1e-10);
    CHECK(std::abs(I[0] - 0.2) < 1e-10);

    CompiledHamiltonian ch(coupled(0.2));
    std::vector<double> th2{0.4, 1.9}, I2{0.25, -0.15};
    for (int s = 0; s < 1000; ++s) step_implicit_midpoint(ch, 0.01, th2, I2);
    for (int s = 0; s < 1000; ++s) step_implicit_midpoint(ch, -0.01, th2, I2);
    CHECK(std::abs(th2[0] - 0.4) < 1e-9);
    CHECK(std::abs(th2[1] - 1.9) < 1e-9);
    CHECK(std::abs(I2[0] - 0.25) < 1e-9);
    CHECK(std::abs(I2[1] + 0.15) < 1e-9);
}

TEST_CASE("one step has unit Jacobian determinant") {
    double h = 1e-6;

    CompiledHamiltonian pend(pendulum(1.0, 0.1));
    auto map1 = [&](double th, double i) {
        std::vector<double> t{th}, I{i};
        step_splitting(pend, 0.02, t, I);
        return std::pair(t[0], I[0]);
    };
    std::vector<std::vector<double>> J(2, std::vector<double>(2));
    {
        auto [tp, ip] = map1(0.5 + h, 0.1);
        auto [tm, im] = map1(0.5 - h, 0.1);
        J[0][0] = (tp - tm) / (2 * h);
        J[1][0] = (ip - im) / (2 * h);
        auto [tp2, ip2] = map1(0.5, 0.1 + h);
        auto [tm2, im2] = map1(0.5, 0.1 - h);
        J[0][1] = (tp2 - tm2) / (2 * h);
        J[1][1] = (ip2 - im2) / (2 * h);
    }
    CHECK(dense_det(J) == doctest::Approx(1.0).epsilon(1e-8));

    CompiledHamiltonian ch(coupled(0.2));
    auto map2 = [&](std::vector<double> z) {
        std::vector<double> t{z[0], z[1]}, I{z[2], z[3]};
        step_implicit_midpoint(ch, 0.02, t, I, 1e-15, 200);
        return std::vector<double>{t[0], t[1], I[0], I[1]};
    };
    std::vector<double> z0{0.4, 1.9, 0.25, -0.15};
    std::vector<std::vector<double>> J4(4, std::vector<double>(4));
    for (int c = 0; c < 4; ++c) {
        auto zp = z0, zm = z0;
        zp[c] += h;
        zm[c] -= h;
        auto fp = map2(zp), fm = map2(zm);
        for (int r = 0; r < 4; ++r) J4[r][c] = (fp[r] - fm[r]) / (2 * h);
    }
    CHECK(dense_det(J4) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("midpoint solve failure is reported, not crashed") {
    CompiledHamiltonian ch(coupled(100.0));
    PhasePoint z0{{0.4, 1.9}, {2.0, -1.5}};
    auto traj = integrate(ch, z0, 0.5, 100, Scheme::ImplicitMidpoint);
    CHECK(!traj.ok);
    CHECK(!traj.error.empty());
}

TEST_CASE("integrate validates its inputs") {
    CompiledHamiltonian ch(pendulum(1.0, 0.1));
    PhasePoint bad{{0.1, 0.2}, {0.1, 0.2}};
    CHECK_THROWS_AS(integrate(ch, bad, 0.01, 10), ConfigError);
    PhasePoint z0{{0.1}, {0.2}};
    CHECK_THROWS_AS(integrate(ch, z0, 0.0, 10), ConfigError);
    CHECK_THROWS_AS(integrate(ch, z0, 0.01, -1), ConfigError);
}

TEST_CASE("integrable systems never escape") {
    FourierTaylorSeries H(2, 0, 2);
    H.add_action({1, 0}, 1.0);
    H.add_action({0, 1}, 1.3);
    H.add_action({2, 0}, 0.5);
    H.add_action({0, 2}, 0.5);
    CompiledHamiltonian ch(H);

    auto rec = escape_time(ch, {0.0, 0.0}, 0.1, 0.05, 2000, 17);
    CHECK(rec.ok);
    CHECK(rec.censored);
    CHECK(rec.escape_time == doctest::Approx(2000 * 0.05));
    CHECK(rec.steps == 2000);
    CHECK(rec.exit_norm == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rec.energy_drift >= 0.0);
}

TEST_CASE("escape records are deterministic and self-consistent") {
    FourierTaylorSeries H(1, 1, 2);
    H.add_action({1}, 1.0);
    H.add_action({2}, 0.5);
    H.add_cos({1}, {0}, 0.5);
    CompiledHamiltonian ch(H);

    auto a = escape_time(ch, {0.0}, 0.05, 0.01, 200000, 4242);
    auto b = escape_time(ch, {0.0}, 0.05, 0.01, 200000, 4242);
    REQUIRE(a.ok);
    CHECK(!a.censored);
    CHECK(a.escape_time == b.escape_time);
    CHECK(a.initial.theta == b.initial.theta);
    CHECK(a.initial.I == b.initial.I);
    CHECK(a.steps == b.steps);
    CHECK(a.exit_norm == b.exit_norm);
    CHECK(a.exit_norm >= 2 * 0.05 - 1e-12);
    CHECK(a.escape_time <= a.steps * a.dt);
    CHECK(a.escape_time > (a.steps - 1) * a.dt - 1e-12);
    CHECK(a.seed == 4242);

    // A larger budget cannot change an uncensored record.
    auto c = escape_time(ch, {0.0}, 0.05, 0.01, 400000, 4242);
    CHECK(c.escape_time == a.escape_time);
    CHECK(c.steps == a.steps);
}

TEST_CASE("escape time is stable under step refinement") {
    FourierTaylorSeries H(1, 1, 2);
    H.add_action({1}, 1.0);
    H.add_action({2}, 0.5);
    H.add_cos({1}, {0}, 0.5);
    CompiledHamiltonian ch(H);

    auto coarse = escape_time(ch, {0.0}, 0.05, 0.01, 400000, 99);
    auto fine = escape_time(ch, {0.0}, 0.05, 0.001, 4000000, 99);
    REQUIRE(coarse.ok);
    REQUIRE(fine.ok);
    REQUIRE(!coarse.censored);
    REQUIRE(!fine.censored);
    // Same draw, same dynamics: the crossing time converges as dt shrinks.
    CHECK(coarse.initial.theta[0] == fine.initial.theta[0]);
    CHECK(coarse.escape_time ==
          doctest::Approx(fine.escape_time).epsilon(0.05));
}

TEST_CASE("escape validates its inputs") {
    CompiledHamiltonian ch(pendulum(1.0, 0.1));
    CHECK_THROWS_AS(escape_time(ch, {0.0, 0.0}, 0.1, 0.01, 100, 1), ConfigError);
    CHECK_THROWS_AS(escape_time(ch, {0.0}, -0.1, 0.01, 100, 1), ConfigError);
    CHECK_THROWS_AS(escape_time(ch, {0.0}, 0.1, 0.0, 100, 1), ConfigError);
    CHECK_THROWS_AS(escape_time(ch, {0.0}, 0.1, 0.01, 0, 1), ConfigError);
}

TEST_CASE("circular distance") {
    CHECK(circular_distance(0.1, 2 * kPi - 0.1) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(circular_distance(1.0, 1.0) == 0.0);
    CHECK(circular_distance(0.0, kPi) == doctest::Approx(kPi).epsilon(1e-12));
}
