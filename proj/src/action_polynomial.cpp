#include "toruslab/action_polynomial.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "toruslab/errors.hpp"

namespace toruslab {

namespace {

double int_pow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

ActionPolynomial::ActionPolynomial(int n, int m) : n_(n), m_(m) {
    if (n < 1) throw ConfigError("polynomial dimension must be >= 1");
    if (m < 2) throw ConfigError("polynomial degree bound must be >= 2");
}

void ActionPolynomial::check_index(const MultiIndex& l) const {
    if (static_cast<int>(l.size()) != n_)
        throw ConfigError("monomial index length does not match dimension");
    for (int v : l)
        if (v < 0) throw ConfigError("monomial index entries must be >= 0");
    int d = l1_norm(l);
    if (d < 2 || d > m_)
        throw ConfigError("monomial degree outside [2, max_degree]");
}

void ActionPolynomial::set_coefficient(const MultiIndex& l, double c) {
    check_index(l);
    if (c == 0.0) {
        coeffs_.erase(l);
    } else {
        coeffs_[l] = c;
    }
}

void ActionPolynomial::add_coefficient(const MultiIndex& l, double c) {
    check_index(l);
    auto it = coeffs_.find(l);
    double v = (it == coeffs_.end() ? 0.0 : it->second) + c;
    if (v == 0.0) {
        if (it != coeffs_.end()) coeffs_.erase(it);
    } else {
        coeffs_[l] = v;
    }
}

double ActionPolynomial::coefficient(const MultiIndex& l) const {
    auto it = coeffs_.find(l);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double ActionPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [l, c] : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double ActionPolynomial::evaluate(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& [l, c] : coeffs_) {
        double t = c;
        for (int j = 0; j < n_; ++j) t *= int_pow(x[j], l[j]);
        s += t;
    }
    return s;
}

std::vector<double> ActionPolynomial::gradient(std::span<const double> x) const {
    std::vector<double> g(static_cast<std::size_t>(n_), 0.0);
    for (const auto& [l, c] : coeffs_) {
        for (int j = 0; j < n_; ++j) {
            if (l[j] == 0) continue;
            double t = c * l[j] * int_pow(x[j], l[j] - 1);
            for (int i = 0; i < n_; ++i)
                if (i != j) t *= int_pow(x[i], l[i]);
            g[j] += t;
        }
    }
    return g;
}

std::vector<double> ActionPolynomial::hessian(std::span<const double> x) const {
    std::vector<double> h(static_cast<std::size_t>(n_) * n_, 0.0);
    for (const auto& [l, c] : coeffs_) {
        for (int a = 0; a < n_; ++a) {
            for (int b = a; b < n_; ++b) {
                double t;
                if (a == b) {
                    if (l[a] < 2) continue;
                    t = c * l[a] * (l[a] - 1) * int_pow(x[a], l[a] - 2);
                    for (int i = 0; i < n_; ++i)
                        if (i != a) t *= int_pow(x[i], l[i]);
                } else {
                    if (l[a] == 0 || l[b] == 0) continue;
                    t = c * l[a] * l[b] * int_pow(x[a], l[a] - 1) *
                        int_pow(x[b], l[b] - 1);
                    for (int i = 0; i < n_; ++i)
                        if (i != a && i != b) t *= int_pow(x[i], l[i]);
                }
                h[static_cast<std::size_t>(a) * n_ + b] += t;
                if (a != b) h[static_cast<std::size_t>(b) * n_ + a] += t;
            }
        }
    }
    return h;
}

ActionPolynomial ActionPolynomial::quadratic_part() const {
    ActionPolynomial q(n_, 2);
    for (const auto& [l, c] : coeffs_)
        if (l1_norm(l) == 2) q.set_coefficient(l, c);
    return q;
}

ActionPolynomial ActionPolynomial::truncated(int m_out) const {
    if (m_out < 2) throw ConfigError("truncation degree must be >= 2");
    ActionPolynomial q(n_, m_out);
    for (const auto& [l, c] : coeffs_)
        if (l1_norm(l) <= m_out) q.set_coefficient(l, c);
    return q;
}

double coeff_sup_distance(const ActionPolynomial& a, const ActionPolynomial& b) {
    if (a.dimension() != b.dimension())
        throw ConfigError("polynomial dimensions differ");
    double d = 0.0;
    for (const auto& [l, c] : a.table())
        d = std::max(d, std::abs(c - b.coefficient(l)));
    for (const auto& [l, c] : b.table())
        if (a.table().find(l) == a.table().end())
            d = std::max(d, std::abs(c));
    return d;
}

ActionPolynomial taylor_polynomial(const FourierTaylorSeries& h,
                                   std::span<const double> center, int m) {
    int n = h.dimension();
    if (static_cast<int>(center.size()) != n)
        throw ConfigError("center length does not match dimension");
    if (m < 2) throw ConfigError("taylor degree must be >= 2");

    ActionPolynomial out(n, m);
    FourierTaylorSeries avg = h.angle_average();
    // I^l = prod_j (center_j + x_j)^{l_j}: exact binomial expansion,
    // collected on monomials x^s with 2 <= |s| <= m.
    MultiIndex s(static_cast<std::size_t>(n), 0);
    for (const auto& idx : avg.sorted_indices()) {
        double c = avg.coefficient(idx.k, idx.l).real();
        if (c == 0.0) continue;
        const MultiIndex& l = idx.l;
        auto rec = [&](auto&& self, int pos, double factor) -> void {
            if (pos == n) {
                int d = l1_norm(s);
                if (d >= 2 && d <= m) out.add_coefficient(s, factor);
                return;
            }
            for (int sj = 0; sj <= l[pos]; ++sj) {
                s[pos] = sj;
                self(self, pos + 1,
                     factor * binomial(l[pos], sj) *
                         int_pow(center[pos], l[pos] - sj));
            }
            s[pos] = 0;
        };
        rec(rec, 0, c);
    }
    return out;
}

SampledTaylorResult taylor_polynomial(
    const std::function<double(std::span<const double>)>& h,
    std::span<const double> center, int m) {
    int n = static_cast<int>(center.size());
    if (n < 1) throw ConfigError("center must be nonempty");
    if (m < 2) throw ConfigError("taylor degree must be >= 2");

    double scale = 1.0;
    for (double c : center) scale = std::max(scale, 1.0 + std::abs(c));

    SampledTaylorResult res{ActionPolynomial(n, m),
                            std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0)};
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<double> x(center.begin(), center.end());
    for (const MultiIndex& q : monomials_in_range(n, 2, m)) {
        int p = l1_norm(q);
        double step = scale * std::pow(eps, 1.0 / (p + 2));
        res.fd_step_by_order[static_cast<std::size_t>(p)] = step;

        // Tensor-product central difference for the mixed derivative d^q h.
        MultiIndex i(static_cast<std::size_t>(n), 0);
        double sum = 0.0;
        auto rec = [&](auto&& self, int pos, double weight) -> void {
            if (pos == n) {
                for (int j = 0; j < n; ++j)
                    x[j] = center[j] + (0.5 * q[j] - i[j]) * step;
                sum += weight * h(x);
                return;
            }
            for (int ij = 0; ij <= q[pos]; ++ij) {
                i[pos] = ij;
                double w = binomial(q[pos], ij);
                self(self, pos + 1, (ij % 2 == 0 ? weight : -weight) * w);
            }
            i[pos] = 0;
        };
        rec(rec, 0, 1.0);

        double deriv = sum / int_pow(step, p);
        double qfact = 1.0;
        for (int j = 0; j < n; ++j) qfact *= factorial(q[j]);
        double coeff = deriv / qfact;
        if (coeff != 0.0) res.poly.set_coefficient(q, coeff);
    }
    return res;
}

}  // namespace toruslab
