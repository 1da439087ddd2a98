#include "toruslab/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toruslab/diophantine.hpp"
#include "toruslab/errors.hpp"

namespace toruslab {

namespace {

std::string format_index(const MultiIndex& k) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) os << ",";
        os << k[i];
    }
    os << ")";
    return os.str();
}

// k = 0 linear part, as a frequency vector.
std::vector<double> linear_part(const FourierTaylorSeries& f) {
    int n = f.dimension();
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    MultiIndex k0(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        MultiIndex l(static_cast<std::size_t>(n), 0);
        l[static_cast<std::size_t>(j)] = 1;
        w[static_cast<std::size_t>(j)] = f.coefficient(k0, l).real();
    }
    return w;
}

int max_fourier_order(const FourierTaylorSeries& f) {
    int m = 0;
    for (const auto& [idx, c] : f.table()) m = std::max(m, l1_norm(idx.k));
    return m;
}

int max_taylor_order(const FourierTaylorSeries& f) {
    int m = 0;
    for (const auto& [idx, c] : f.table()) m = std::max(m, l1_norm(idx.l));
    return m;
}

}  // namespace

FourierTaylorSeries homological_solve(const FourierTaylorSeries& g,
                                      const std::vector<double>& omega,
                                      double divisor_floor,
                                      std::vector<SmallDivisorRecord>* log) {
    int n = g.dimension();
    if (static_cast<int>(omega.size()) != n)
        throw ConfigError("omega length does not match dimension");

    FourierTaylorSeries chi(n, g.k_max(), g.m_max());
    std::vector<MultiIndex> logged;
    for (const auto& idx : g.sorted_indices()) {
        if (is_zero(idx.k)) continue;
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += idx.k[static_cast<std::size_t>(j)] * omega[static_cast<std::size_t>(j)];
        // Written so an exact zero divisor fails even when the floor is 0.
        if (!(std::abs(dot) > divisor_floor)) {
            MultiIndex bad = is_canonical(idx.k) ? idx.k : negated(idx.k);
            throw SmallDivisorError(
                bad, std::abs(dot),
                "small divisor at k=" + format_index(bad) +
                    ", |k.omega|=" + std::to_string(std::abs(dot)));
        }
        if (log) {
            MultiIndex canon = is_canonical(idx.k) ? idx.k : negated(idx.k);
            if (std::find(logged.begin(), logged.end(), canon) == logged.end()) {
                logged.push_back(canon);
                log->push_back({canon, std::abs(dot), l1_norm(idx.l)});
            }
        }
        // chi_{k,l} = g_{k,l} / (i k.omega)
        auto c = g.coefficient(idx.k, idx.l);
        chi.add_term(idx.k, idx.l,
                     FourierTaylorSeries::Coeff(c.imag() / dot, -c.real() / dot));
    }
    return chi;
}

FourierTaylorSeries lie_transform(const FourierTaylorSeries& f,
                                  const FourierTaylorSeries& chi, int k_out,
                                  int m_out, double tol, int max_lie_terms,
                                  std::size_t max_terms) {
    FourierTaylorSeries result = f.truncated(k_out, m_out);
    FourierTaylorSeries term = result;
    for (int i = 1; i <= max_lie_terms; ++i) {
        term = poisson_bracket(term, chi, k_out, m_out);
        term.scale(1.0 / i);
        if (term.empty()) return result;
        result = series_add(result, term);
        if (result.term_count() > max_terms)
            throw BudgetExceededError("series term budget exceeded in Lie transform");
        if (term.max_abs_coeff() < tol) return result;
    }
    throw BudgetExceededError("Lie series did not converge within the term limit");
}

NormalFormResult bnf(const FourierTaylorSeries& H,
                     const std::vector<double>& omega, int m,
                     const BnfBudgets& budgets) {
    int n = H.dimension();
    if (static_cast<int>(omega.size()) != n)
        throw ConfigError("omega length does not match dimension");
    if (m < 2) throw ConfigError("normal form order must be >= 2");
    if (!H.is_real_symmetric(1e-9))
        throw ConfigError("input series is not real");
    {
        std::vector<double> lin = linear_part(H);
        for (int j = 0; j < n; ++j) {
            if (std::abs(lin[static_cast<std::size_t>(j)] - omega[static_cast<std::size_t>(j)]) >
                1e-9 * (1.0 + std::abs(omega[static_cast<std::size_t>(j)])))
                throw ConfigError("k=0 linear part of H does not equal omega");
        }
    }

    NormalFormResult res;
    res.order_m = m;
    res.omega = omega;
    res.input_scale = H.max_abs_coeff();
    if (res.input_scale == 0.0) res.input_scale = 1.0;

    int k_in = std::max(1, max_fourier_order(H));
    int m_in = max_taylor_order(H);
    res.k_work = budgets.k_work > 0 ? budgets.k_work : std::max(8, k_in * (m + 2));
    res.m_work = budgets.m_work > 0 ? budgets.m_work : std::max(m, m_in) + 2;
    if (res.m_work < m) throw ConfigError("m_work budget below requested order");
    if (res.k_work < k_in) throw ConfigError("k_work budget below input support");

    double tau = budgets.tau >= 0.0 ? budgets.tau : static_cast<double>(n);
    res.divisor_floor = budgets.divisor_floor;
    if (res.divisor_floor <= 0.0) {
        int scan = std::min(res.k_work, default_scan_depth(n));
        double gamma = gamma_estimate(omega, tau, scan).gamma_est;
        res.divisor_floor =
            gamma * std::pow(static_cast<double>(res.k_work), -tau) / 2.0;
    }

    double tol_abs = budgets.tol_hom * res.input_scale;
    double skip_tol = tol_abs * 0.05;
    double lie_tol = tol_abs * 1e-3;

    FourierTaylorSeries cur = H.truncated(res.k_work, res.m_work);
    std::vector<double> omega_cur = omega;

    // Preliminary torus correction: remove angle-dependent terms of Taylor
    // order 0 and 1. Each pass is quadratically convergent; the frequency
    // used by the solver is re-read from the current linear part.
    int iter = 0;
    for (; iter < budgets.max_stage_a_iters; ++iter) {
        FourierTaylorSeries low = cur.oscillating_up_to_order(1);
        if (low.max_abs_coeff() <= skip_tol) break;
        FourierTaylorSeries chi = homological_solve(low, omega_cur, res.divisor_floor,
                                                    &res.small_divisor_log);
        cur = lie_transform(cur, chi, res.k_work, res.m_work, lie_tol,
                            budgets.max_lie_terms, budgets.max_terms);
        res.generators.push_back(std::move(chi));
        omega_cur = linear_part(cur);
    }
    if (iter == budgets.max_stage_a_iters)
        throw BudgetExceededError("torus correction did not converge");

    res.omega_effective = omega_cur;

    // Order by order: the homogeneous oscillating part of order j is
    // removed by one generator. ad_chi_j raises Taylor order by j-1 >= 1,
    // so orders <= j are final once pass j completes.
    for (int j = 2; j <= m; ++j) {
        FourierTaylorSeries gj = cur.taylor_order_part(j).oscillating_part();
        if (gj.max_abs_coeff() <= skip_tol) continue;
        FourierTaylorSeries chi = homological_solve(gj, res.omega_effective,
                                                    res.divisor_floor,
                                                    &res.small_divisor_log);
        cur = lie_transform(cur, chi, res.k_work, res.m_work, lie_tol,
                            budgets.max_lie_terms, budgets.max_terms);
        res.generators.push_back(std::move(chi));
    }

    res.transformed = cur;

    res.H_m = ActionPolynomial(n, m);
    MultiIndex k0(static_cast<std::size_t>(n), 0);
    for (const auto& idx : cur.sorted_indices()) {
        if (!is_zero(idx.k)) continue;
        int d = l1_norm(idx.l);
        if (d >= 2 && d <= m)
            res.H_m.set_coefficient(idx.l, cur.coefficient(k0, idx.l).real());
    }

    for (const auto& idx : cur.sorted_indices()) {
        double mag = std::abs(cur.coefficient(idx.k, idx.l));
        int d = l1_norm(idx.l);
        if (is_zero(idx.k)) {
            if (d <= m) continue;  // constant, omega_eff . I, H_m
        } else if (d <= m) {
            res.residual_max = std::max(res.residual_max, mag / res.input_scale);
        }
        auto [it, inserted] = res.remainder_norm_by_order.try_emplace(d, mag);
        if (!inserted) it->second = std::max(it->second, mag);
    }

    return res;
}

double remainder_decay_bound(double A, double L2, double alpha, double tau,
                             double r) {
    if (A <= 0.0 || L2 <= 0.0 || alpha <= 0.0 || tau < 0.0 || r <= 0.0)
        throw ConfigError("remainder bound parameters must be positive");
    return A * std::exp(-std::pow(2.0 * L2 * r, -1.0 / (alpha * (1.0 + tau))));
}

int stirling_order_choice(double L2, double norm_I, double alpha, double tau) {
    if (L2 <= 0.0 || norm_I <= 0.0 || alpha <= 0.0 || tau < 0.0)
        throw ConfigError("truncation choice parameters must be positive");
    double x = L2 * norm_I;
    if (x >= 1.0)
        throw ConfigError("L2 * ||I|| must be < 1 for the truncation choice");
    return static_cast<int>(std::lround(std::pow(x, -1.0 / (alpha * (1.0 + tau)))));
}

}  // namespace toruslab
