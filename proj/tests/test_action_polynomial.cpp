#include <doctest.h>

#include <array>
#include <cmath>

#include "toruslab/action_polynomial.hpp"
#include "toruslab/gevrey.hpp"

using namespace toruslab;

TEST_CASE("polynomial evaluation, gradient and hessian match closed forms") {
    ActionPolynomial p(2, 3);
    p.set_coefficient({2, 0}, 0.5);
    p.set_coefficient({0, 2}, -0.3);
    p.set_coefficient({1, 1}, 0.2);
    p.set_coefficient({3, 0}, 0.1);

    std::array<double, 2> x{0.7, -1.2};
    double want = 0.5 * x[0] * x[0] - 0.3 * x[1] * x[1] + 0.2 * x[0] * x[1] +
                  0.1 * x[0] * x[0] * x[0];
    CHECK(p.evaluate(x) == doctest::Approx(want).epsilon(1e-15));

    auto g = p.gradient(x);
    CHECK(g[0] == doctest::Approx(x[0] + 0.2 * x[1] + 0.3 * x[0] * x[0]).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(-0.6 * x[1] + 0.2 * x[0]).epsilon(1e-15));

    auto h = p.hessian(x);
    CHECK(h[0] == doctest::Approx(1.0 + 0.6 * x[0]).epsilon(1e-15));
    CHECK(h[1] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(h[2] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(h[3] == doctest::Approx(-0.6).epsilon(1e-15));
}

TEST_CASE("degree bounds are enforced") {
    ActionPolynomial p(2, 3);
    CHECK_THROWS(p.set_coefficient({1, 0}, 1.0));
    CHECK_THROWS(p.set_coefficient({0, 0}, 1.0));
    CHECK_THROWS(p.set_coefficient({2, 2}, 1.0));
    CHECK_THROWS(p.set_coefficient({2}, 1.0));
}

TEST_CASE("quadratic part and truncation") {
    ActionPolynomial p(2, 4);
    p.set_coefficient({2, 0}, 1.0);
    p.set_coefficient({1, 1}, -2.0);
    p.set_coefficient({3, 0}, 5.0);
    p.set_coefficient({2, 2}, 7.0);

    auto q = p.quadratic_part();
    CHECK(q.max_degree() == 2);
    CHECK(q.coefficient({2, 0}) == 1.0);
    CHECK(q.coefficient({1, 1}) == -2.0);
    CHECK(q.term_count() == 2);

    auto t = p.truncated(3);
    CHECK(t.max_degree() == 3);
    CHECK(t.coefficient({3, 0}) == 5.0);
    CHECK(t.coefficient({2, 2}) == 0.0);
}

TEST_CASE("coefficient sup distance") {
    ActionPolynomial a(2, 2), b(2, 2);
    a.set_coefficient({2, 0}, 1.0);
    b.set_coefficient({2, 0}, 0.25);
    b.set_coefficient({0, 2}, -0.5);
    CHECK(coeff_sup_distance(a, b) == doctest::Approx(0.75));
    CHECK(coeff_sup_distance(a, a) == 0.0);
}

TEST_CASE("taylor polynomial of a series: exact binomial shift") {
    // h = |I|^2/2 + I_1^3, angle-dependent part must be ignored.
    FourierTaylorSeries h(2, 1, 3);
    h.add_action({2, 0}, 0.5);
    h.add_action({0, 2}, 0.5);
    h.add_action({3, 0}, 1.0);
    h.add_cos({1, 0}, {2, 0}, 0.3);

    std::array<double, 2> center{0.4, -0.1};
    auto p = taylor_polynomial(h, center, 3);
    // Quadratic terms are shift invariant; the cubic contributes 3c x_1^2.
    CHECK(p.coefficient({2, 0}) == doctest::Approx(0.5 + 3.0 * center[0]).epsilon(1e-15));
    CHECK(p.coefficient({0, 2}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.coefficient({3, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.coefficient({1, 1}) == 0.0);
}

TEST_CASE("taylor polynomial of a sampled function: central differences") {
    auto h = [](std::span<const double> x) {
        return std::exp(x[0] + 0.5 * x[1]);
    };
    std::array<double, 2> center{0.0, 0.0};
    auto res = taylor_polynomial(h, center, 3);
    // exp(u) with u = x1 + x2/2: coefficient of x^l is (1/l1!)(0.5^l2/l2!).
    auto want = [](int l1, int l2) {
        double f1 = 1.0, f2 = 1.0;
        for (int i = 2; i <= l1; ++i) f1 *= i;
        for (int i = 2; i <= l2; ++i) f2 *= i;
        return std::pow(0.5, l2) / (f1 * f2);
    };
    for (int l1 = 0; l1 <= 3; ++l1) {
        for (int l2 = 0; l2 + l1 <= 3; ++l2) {
            if (l1 + l2 < 2) continue;
            CHECK(res.poly.coefficient({l1, l2}) ==
                  doctest::Approx(want(l1, l2)).epsilon(1e-5));
        }
    }
    REQUIRE(res.fd_step_by_order.size() >= 4);
    CHECK(res.fd_step_by_order[2] > 0.0);
    CHECK(res.fd_step_by_order[3] > 0.0);
}

TEST_CASE("gevrey norm of cos theta_1 is exactly one") {
    FourierTaylorSeries f(1, 1, 0);
    f.add_cos({1}, {0}, 1.0);
    auto est = gevrey_norm_estimate(f);
    CHECK(est.value == 1.0);
    CHECK(est.argmax_k == MultiIndex{0});
    CHECK(est.argmax_l == MultiIndex{0});
}

TEST_CASE("gevrey norm estimate grows with the scan depth") {
    FourierTaylorSeries f(2, 2, 2);
    f.add_cos({2, 0}, {0, 0}, 1.0);
    f.add_action({2, 0}, 0.4);

    GevreyNormParams p;
    p.K_check = 0;
    p.M_check = 0;
    double v0 = gevrey_norm_estimate(f, p).value;
    p.K_check = 1;
    double v1 = gevrey_norm_estimate(f, p).value;
    p.K_check = 2;
    p.M_check = 2;
    double v2 = gevrey_norm_estimate(f, p).value;
    CHECK(v0 <= v1);
    CHECK(v1 <= v2);
    // d/dtheta_1 of cos(2 theta_1) has sup 2, weight 1/1! = 1.
    CHECK(v2 >= 2.0);
}

TEST_CASE("gevrey parameter validation") {
    FourierTaylorSeries f(1, 1, 1);
    f.add_cos({1}, {0}, 1.0);
    GevreyNormParams p;
    p.alpha = 0.5;
    CHECK_THROWS(gevrey_norm_estimate(f, p));
    p.alpha = 1.0;
    p.L1 = 0.0;
    CHECK_THROWS(gevrey_norm_estimate(f, p));
}
