#include "toruslab/steepness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "toruslab/errors.hpp"
#include "toruslab/rng.hpp"

namespace toruslab {

namespace {

double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double vec_norm(const std::vector<double>& a) { return std::sqrt(vec_dot(a, a)); }

double int_pow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

std::vector<std::vector<double>> orthonormalized(
    const std::vector<std::vector<double>>& basis) {
    if (basis.empty()) throw ConfigError("subspace basis is empty");
    std::size_t n = basis[0].size();
    std::vector<std::vector<double>> out;
    for (const auto& row : basis) {
        if (row.size() != n) throw ConfigError("subspace basis rows differ in length");
        std::vector<double> v = row;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : out) {
                double c = vec_dot(v, u);
                for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
            }
        double nv = vec_norm(v);
        if (nv < 1e-10) throw ConfigError("degenerate subspace basis");
        for (double& x : v) x /= nv;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::vector<double>> random_frame(int n, int l, SplitMix64& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::vector<double>> rows;
        rows.reserve(static_cast<std::size_t>(l));
        for (int a = 0; a < l; ++a) {
            std::vector<double> v(static_cast<std::size_t>(n));
            for (double& x : v) x = rng.normal();
            rows.push_back(std::move(v));
        }
        try {
            return orthonormalized(rows);
        } catch (const ConfigError&) {
            continue;
        }
    }
    throw NumericalError("failed to draw a nondegenerate frame");
}

// Cyclic Jacobi rotations; eigenpairs sorted by eigenvalue ascending.
void jacobi_eigen(int n, std::vector<double> a, std::vector<double>& vals,
                  std::vector<std::vector<double>>& vecs) {
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (int i = 0; i < n; ++i) {
            diag = std::max(diag, std::abs(A(i, i)));
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(A(i, j)));
        }
        if (off <= 1e-14 * std::max(1.0, diag)) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (A(p, q) == 0.0) continue;
                double tau = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                double t = (tau >= 0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return A(i, i) < A(j, j); });
    vals.assign(static_cast<std::size_t>(n), 0.0);
    vecs.assign(static_cast<std::size_t>(n),
                std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int r = 0; r < n; ++r) {
        int col = order[static_cast<std::size_t>(r)];
        vals[static_cast<std::size_t>(r)] = A(col, col);
        for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = V(i, col);
    }
}

// Ascending geometric grid spanning (delta/100, delta].
std::vector<double> geometric_xi_grid(double delta, int points) {
    std::vector<double> out;
    if (points <= 1) {
        out.push_back(delta);
        return out;
    }
    for (int i = 0; i < points; ++i)
        out.push_back(delta * std::pow(100.0, -static_cast<double>(points - 1 - i) /
                                                   (points - 1)));
    return out;
}

// P composed with x = V^T y: an exact polynomial in dim(V) variables.
ActionPolynomial restrict_polynomial(const ActionPolynomial& P,
                                     const std::vector<std::vector<double>>& V) {
    int n = P.dimension();
    int l = static_cast<int>(V.size());
    ActionPolynomial out(l, P.max_degree());
    std::map<MultiIndex, double, MonomialOrder> cur, next;
    for (const auto& [lidx, c] : P.table()) {
        cur.clear();
        cur[MultiIndex(static_cast<std::size_t>(l), 0)] = c;
        for (int j = 0; j < n; ++j) {
            for (int rep = 0; rep < lidx[static_cast<std::size_t>(j)]; ++rep) {
                next.clear();
                for (const auto& [e, w] : cur) {
                    for (int a = 0; a < l; ++a) {
                        double f = V[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
                        if (f == 0.0) continue;
                        MultiIndex e2 = e;
                        ++e2[static_cast<std::size_t>(a)];
                        next[e2] += w * f;
                    }
                }
                cur.swap(next);
            }
        }
        for (const auto& [e, w] : cur) out.add_coefficient(e, w);
    }
    return out;
}

// Projected gradient descent on the radius-eta sphere, several starts.
double sphere_min_generic(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<std::vector<double>(const std::vector<double>&)>& grad,
    int l, double eta, int multistarts, SplitMix64& rng) {
    std::vector<std::vector<double>> starts;
    for (int a = 0; a < l; ++a) {
        for (double s : {eta, -eta}) {
            std::vector<double> y(static_cast<std::size_t>(l), 0.0);
            y[static_cast<std::size_t>(a)] = s;
            starts.push_back(std::move(y));
        }
    }
    for (int i = 0; i < multistarts; ++i) {
        std::vector<double> y = rng.sphere(l);
        for (double& x : y) x *= eta;
        starts.push_back(std::move(y));
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> cand(static_cast<std::size_t>(l));
    for (auto& y : starts) {
        double fy = f(y);
        double step = 0.2 * eta;
        for (int it = 0; it < 60; ++it) {
            std::vector<double> g = grad(y);
            double radial = vec_dot(g, y) / (eta * eta);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] -= radial * y[i];
            double gn = vec_norm(g);
            if (gn * eta <= 1e-15 * (1.0 + std::abs(fy))) break;
            for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = y[i] - step * g[i];
            double cn = vec_norm(cand);
            if (cn == 0.0) break;
            for (double& x : cand) x *= eta / cn;
            double fc = f(cand);
            if (fc < fy) {
                y = cand;
                fy = fc;
                step *= 1.3;
            } else {
                step *= 0.4;
                if (step < 1e-11 * eta) break;
            }
        }
        best = std::min(best, fy);
    }
    return best;
}

// min_{||y|| = eta} ||grad Q(y)|| for a restricted polynomial Q.
double restricted_sphere_min(const ActionPolynomial& Q, double eta,
                             int multistarts, SplitMix64& rng) {
    int l = Q.dimension();
    if (l == 1) {
        double pos[1] = {eta}, neg[1] = {-eta};
        double gp = std::abs(Q.gradient(std::span<const double>(pos, 1))[0]);
        double gn = std::abs(Q.gradient(std::span<const double>(neg, 1))[0]);
        return std::min(gp, gn);
    }
    auto f = [&](const std::vector<double>& y) {
        auto g = Q.gradient(y);
        return vec_dot(g, g);
    };
    auto df = [&](const std::vector<double>& y) {
        auto g = Q.gradient(y);
        auto h = Q.hessian(y);
        std::vector<double> out(static_cast<std::size_t>(l), 0.0);
        for (int a = 0; a < l; ++a)
            for (int b = 0; b < l; ++b)
                out[static_cast<std::size_t>(a)] +=
                    2.0 * h[static_cast<std::size_t>(a) * l + b] * g[static_cast<std::size_t>(b)];
        return out;
    };
    return std::sqrt(sphere_min_generic(f, df, l, eta, multistarts, rng));
}

double maxmin_over_eta_grid(const ActionPolynomial& Q, double xi,
                            int eta_points, int multistarts, SplitMix64& rng) {
    double best = 0.0;
    for (int i = 1; i <= eta_points; ++i) {
        double eta = xi * i / eta_points;
        best = std::max(best, restricted_sphere_min(Q, eta, multistarts, rng));
    }
    return best;
}

std::vector<std::vector<std::vector<double>>> coordinate_frames(int n, int l) {
    std::vector<std::vector<std::vector<double>>> out;
    std::vector<int> pick(static_cast<std::size_t>(l));
    auto rec = [&](auto&& self, int pos, int from) -> void {
        if (pos == l) {
            std::vector<std::vector<double>> frame;
            for (int a = 0; a < l; ++a) {
                std::vector<double> e(static_cast<std::size_t>(n), 0.0);
                e[static_cast<std::size_t>(pick[static_cast<std::size_t>(a)])] = 1.0;
                frame.push_back(std::move(e));
            }
            out.push_back(std::move(frame));
            return;
        }
        for (int i = from; i < n; ++i) {
            pick[static_cast<std::size_t>(pos)] = i;
            self(self, pos + 1, i + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// Directions on which the quadratic part vanishes, from opposite-sign
// eigenpairs: d = sqrt(-lambda_j) v_i +- sqrt(lambda_i) v_j.
std::vector<std::vector<double>> isotropic_directions(const ActionPolynomial& P) {
    int n = P.dimension();
    std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
    std::vector<double> hess = P.quadratic_part().hessian(origin);
    std::vector<double> vals;
    std::vector<std::vector<double>> vecs;
    jacobi_eigen(n, hess, vals, vecs);

    std::vector<std::vector<double>> out;
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    double tiny = 1e-12 * std::max(1.0, scale);
    for (int i = 0; i < n; ++i) {
        if (vals[static_cast<std::size_t>(i)] <= tiny) continue;
        for (int j = 0; j < n; ++j) {
            if (vals[static_cast<std::size_t>(j)] >= -tiny) continue;
            double wi = std::sqrt(-vals[static_cast<std::size_t>(j)]);
            double wj = std::sqrt(vals[static_cast<std::size_t>(i)]);
            for (double sign : {1.0, -1.0}) {
                std::vector<double> d(static_cast<std::size_t>(n));
                for (int t = 0; t < n; ++t)
                    d[static_cast<std::size_t>(t)] =
                        wi * vecs[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] +
                        sign * wj * vecs[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
                double nd = vec_norm(d);
                if (nd == 0.0) continue;
                for (double& x : d) x /= nd;
                out.push_back(std::move(d));
            }
        }
    }
    // Eigenvector lines are cheap probes of near-degenerate directions.
    for (auto& v : vecs) out.push_back(v);
    return out;
}

std::vector<double> fd_gradient(const SmoothFunction& h,
                                const std::vector<double>& x, double* step_out) {
    double step = 1e-5 * (1.0 + vec_norm(x));
    if (step_out && *step_out == 0.0) *step_out = step;
    std::vector<double> g(x.size(), 0.0);
    std::vector<double> p = x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        p[j] = x[j] + step;
        double fp = h.value(p);
        p[j] = x[j] - step;
        double fm = h.value(p);
        p[j] = x[j];
        g[j] = (fp - fm) / (2.0 * step);
    }
    return g;
}

std::vector<double> smooth_gradient(const SmoothFunction& h,
                                    const std::vector<double>& x,
                                    double* step_out) {
    if (h.gradient) return h.gradient(x);
    return fd_gradient(h, x, step_out);
}

std::vector<double> smooth_hessian(const SmoothFunction& h,
                                   const std::vector<double>& x,
                                   double* step_out) {
    if (h.hessian) return h.hessian(x);
    int n = h.n;
    double step = 1e-5 * (1.0 + vec_norm(x));
    if (step_out && *step_out == 0.0) *step_out = step;
    std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> p = x;
    if (h.gradient) {
        for (int b = 0; b < n; ++b) {
            p[static_cast<std::size_t>(b)] = x[static_cast<std::size_t>(b)] + step;
            auto gp = h.gradient(p);
            p[static_cast<std::size_t>(b)] = x[static_cast<std::size_t>(b)] - step;
            auto gm = h.gradient(p);
            p[static_cast<std::size_t>(b)] = x[static_cast<std::size_t>(b)];
            for (int a = 0; a < n; ++a)
                out[static_cast<std::size_t>(a) * n + b] =
                    (gp[static_cast<std::size_t>(a)] - gm[static_cast<std::size_t>(a)]) / (2.0 * step);
        }
        // Symmetrize the mixed entries.
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                double m = 0.5 * (out[static_cast<std::size_t>(a) * n + b] +
                                  out[static_cast<std::size_t>(b) * n + a]);
                out[static_cast<std::size_t>(a) * n + b] = m;
                out[static_cast<std::size_t>(b) * n + a] = m;
            }
        return out;
    }
    double f0 = h.value(x);
    for (int a = 0; a < n; ++a) {
        p[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)] + step;
        double fp = h.value(p);
        p[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)] - step;
        double fm = h.value(p);
        p[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)];
        out[static_cast<std::size_t>(a) * n + a] = (fp - 2.0 * f0 + fm) / (step * step);
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            double acc = 0.0;
            for (double sa : {step, -step})
                for (double sb : {step, -step}) {
                    p[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)] + sa;
                    p[static_cast<std::size_t>(b)] = x[static_cast<std::size_t>(b)] + sb;
                    acc += (sa * sb > 0 ? 1.0 : -1.0) * h.value(p);
                }
            p[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)];
            p[static_cast<std::size_t>(b)] = x[static_cast<std::size_t>(b)];
            double m = acc / (4.0 * step * step);
            out[static_cast<std::size_t>(a) * n + b] = m;
            out[static_cast<std::size_t>(b) * n + a] = m;
        }
    }
    return out;
}

double abs_det(std::vector<double> a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (a[static_cast<std::size_t>(piv) * n + col] == 0.0) return 0.0;
        if (piv != col)
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
        det *= a[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[static_cast<std::size_t>(r) * n + col] /
                       a[static_cast<std::size_t>(col) * n + col];
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -=
                    f * a[static_cast<std::size_t>(col) * n + c];
        }
    }
    return std::abs(det);
}

}  // namespace

double maxmin_value(const ActionPolynomial& P,
                    const std::vector<std::vector<double>>& Lambda, double xi,
                    int eta_points, int multistarts, std::uint64_t seed) {
    if (!(xi > 0.0)) throw ConfigError("xi must be positive");
    if (eta_points < 1) throw ConfigError("eta grid needs at least one point");
    auto V = orthonormalized(Lambda);
    ActionPolynomial Q = restrict_polynomial(P, V);
    SplitMix64 rng(derive_seed(seed, 0xA11));
    return maxmin_over_eta_grid(Q, xi, eta_points, multistarts, rng);
}

std::vector<std::pair<double, double>> maxmin_profile(
    const ActionPolynomial& P, const std::vector<std::vector<double>>& Lambda,
    const std::vector<double>& xi_grid, int eta_points, int multistarts,
    std::uint64_t seed) {
    std::vector<std::pair<double, double>> out;
    out.reserve(xi_grid.size());
    for (double xi : xi_grid)
        out.emplace_back(xi, maxmin_value(P, Lambda, xi, eta_points, multistarts, seed));
    return out;
}

SteepnessVerdict stably_steep_check(const ActionPolynomial& P0, double rho,
                                    double C, double delta,
                                    const SamplingConfig& cfg) {
    if (!(rho > 0.0) || !(C > 0.0) || !(delta > 0.0))
        throw ConfigError("stably-steep constants must be positive");
    int n = P0.dimension();
    int m = P0.max_degree();

    SteepnessVerdict verdict;
    verdict.kind = "stably-steep-poly";
    verdict.accepted = true;
    verdict.rho = rho;
    verdict.C = C;
    verdict.delta = delta;
    verdict.m = m;
    verdict.sampling = {cfg.seed,      cfg.subspaces_per_dim, cfg.perturbations,
                        cfg.xi_points, cfg.eta_points,        cfg.multistarts,
                        0.0};
    if (n == 1) return verdict;  // no proper subspace dimensions to test

    const auto monomials = monomials_in_range(n, 2, m);
    const auto xis = geometric_xi_grid(delta, cfg.xi_points);

    // Shared perturbation draws over the coefficient box, the zero draw
    // first, every fourth draw pushed to the ball boundary.
    std::vector<std::vector<double>> perts;
    perts.emplace_back(monomials.size(), 0.0);
    {
        SplitMix64 rng(derive_seed(cfg.seed, 1));
        for (int i = 0; i < cfg.perturbations; ++i) {
            std::vector<double> p(monomials.size());
            double sup = 0.0;
            for (double& x : p) {
                x = rng.uniform(-1.0, 1.0) * 0.999 * rho;
                sup = std::max(sup, std::abs(x));
            }
            if (i % 4 == 3 && sup > 0.0)
                for (double& x : p) x *= 0.999 * rho / sup;
            perts.push_back(std::move(p));
        }
    }

    auto apply_pert = [&](const std::vector<double>& coeffs) {
        ActionPolynomial P = P0;
        for (std::size_t i = 0; i < monomials.size(); ++i)
            if (coeffs[i] != 0.0) P.add_coefficient(monomials[i], coeffs[i]);
        return P;
    };

    // Least-norm per-degree coefficient shift that zeroes the restriction
    // of P0 to the line d, clipped so the witness stays inside the ball.
    auto nulling_pert = [&](const std::vector<double>& d) {
        std::vector<double> out(monomials.size(), 0.0);
        std::vector<double> basis(monomials.size(), 0.0);
        for (int deg = 2; deg <= m; ++deg) {
            double q = 0.0, denom = 0.0;
            for (std::size_t i = 0; i < monomials.size(); ++i) {
                if (l1_norm(monomials[i]) != deg) continue;
                double b = 1.0;
                for (int j = 0; j < n; ++j)
                    b *= int_pow(d[static_cast<std::size_t>(j)], monomials[i][static_cast<std::size_t>(j)]);
                basis[i] = b;
                q += P0.coefficient(monomials[i]) * b;
                denom += b * b;
            }
            if (denom == 0.0) continue;
            for (std::size_t i = 0; i < monomials.size(); ++i) {
                if (l1_norm(monomials[i]) != deg) continue;
                out[i] = std::clamp(-q * basis[i] / denom, -0.999 * rho, 0.999 * rho);
            }
        }
        return out;
    };

    // Violation scan for one (subspace, polynomial) pair. The line case is
    // evaluated through the same arithmetic maxmin_value uses, so a stored
    // witness reproduces its value exactly.
    auto check_pair = [&](const std::vector<std::vector<double>>& frame,
                          const ActionPolynomial& P) -> bool {
        auto V = orthonormalized(frame);
        if (V.size() == 1) {
            ActionPolynomial Q = restrict_polynomial(P, V);
            SplitMix64 rng(derive_seed(cfg.seed, 0xA11));
            for (double xi : xis) {
                double threshold = C * std::pow(xi, m - 1);
                double val = maxmin_over_eta_grid(Q, xi, cfg.eta_points,
                                                  cfg.multistarts, rng);
                if (!(val > threshold)) {
                    verdict.accepted = false;
                    verdict.witness = SteepnessWitness{
                        frame, P, {}, xi, val, threshold,
                        "maxmin at or below C xi^(m-1)"};
                    return true;
                }
            }
            return false;
        }
        for (double xi : xis) {
            double threshold = C * std::pow(xi, m - 1);
            double val = maxmin_value(P, frame, xi, cfg.eta_points,
                                      cfg.multistarts, cfg.seed);
            if (!(val > threshold)) {
                verdict.accepted = false;
                verdict.witness = SteepnessWitness{
                    frame, P, {}, xi, val, threshold,
                    "maxmin at or below C xi^(m-1)"};
                return true;
            }
        }
        return false;
    };

    for (int l = 1; l <= n - 1; ++l) {
        std::vector<std::vector<std::vector<double>>> frames;
        if (l == 1) {
            for (auto& d : isotropic_directions(P0)) frames.push_back({std::move(d)});
        }
        for (auto& f : coordinate_frames(n, l)) frames.push_back(std::move(f));
        {
            SplitMix64 rng(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(l)));
            for (int s = 0; s < cfg.subspaces_per_dim; ++s)
                frames.push_back(random_frame(n, l, rng));
        }

        for (const auto& frame : frames) {
            if (l == 1) {
                if (check_pair(frame, apply_pert(nulling_pert(frame[0]))))
                    return verdict;
            }
            for (const auto& pc : perts)
                if (check_pair(frame, apply_pert(pc))) return verdict;
        }
    }
    return verdict;
}

SmoothFunction make_smooth(const ActionPolynomial& p) {
    SmoothFunction f;
    f.n = p.dimension();
    f.value = [p](std::span<const double> x) { return p.evaluate(x); };
    f.gradient = [p](std::span<const double> x) { return p.gradient(x); };
    f.hessian = [p](std::span<const double> x) { return p.hessian(x); };
    return f;
}

SmoothFunction make_smooth(const std::vector<double>& omega,
                           const ActionPolynomial& p) {
    if (static_cast<int>(omega.size()) != p.dimension())
        throw ConfigError("omega length does not match polynomial dimension");
    SmoothFunction f;
    f.n = p.dimension();
    f.value = [p, omega](std::span<const double> x) {
        double s = p.evaluate(x);
        for (std::size_t j = 0; j < omega.size(); ++j) s += omega[j] * x[j];
        return s;
    };
    f.gradient = [p, omega](std::span<const double> x) {
        auto g = p.gradient(x);
        for (std::size_t j = 0; j < omega.size(); ++j) g[j] += omega[j];
        return g;
    };
    f.hessian = [p](std::span<const double> x) { return p.hessian(x); };
    return f;
}

SteepnessVerdict steep_function_check(
    const SmoothFunction& h, const std::vector<std::vector<double>>& points,
    double kappa, double C, double delta, const std::vector<double>& p_list,
    const SamplingConfig& cfg) {
    int n = h.n;
    if (n < 1 || !h.value) throw ConfigError("function is not evaluable");
    if (!(kappa > 0.0) || !(C > 0.0) || !(delta > 0.0))
        throw ConfigError("steepness constants must be positive");
    if (static_cast<int>(p_list.size()) != std::max(0, n - 1))
        throw ConfigError("p_list needs one index per subspace dimension");
    for (double p : p_list)
        if (p < 1.0) throw ConfigError("steepness indices must be >= 1");
    if (points.empty()) throw ConfigError("sample point set is empty");
    for (const auto& pt : points)
        if (static_cast<int>(pt.size()) != n)
            throw ConfigError("sample point length does not match dimension");

    SteepnessVerdict verdict;
    verdict.kind = "steep-function";
    verdict.accepted = true;
    verdict.kappa = kappa;
    verdict.C = C;
    verdict.delta = delta;
    verdict.p_list = p_list;
    verdict.sampling = {cfg.seed,      cfg.subspaces_per_dim, 0,
                        cfg.xi_points, cfg.eta_points,        cfg.multistarts,
                        0.0};

    for (const auto& I : points) {
        auto g = smooth_gradient(h, I, &verdict.sampling.fd_step);
        double gn = vec_norm(g);
        if (gn < kappa) {
            verdict.accepted = false;
            verdict.witness = SteepnessWitness{
                {}, std::nullopt, I, 0.0, gn, kappa, "gradient norm below kappa"};
            return verdict;
        }
    }
    if (n == 1) return verdict;

    const auto xis = geometric_xi_grid(delta, cfg.xi_points);
    for (int l = 1; l <= n - 1; ++l) {
        std::vector<std::vector<std::vector<double>>> frames = coordinate_frames(n, l);
        SplitMix64 frame_rng(derive_seed(cfg.seed, 200 + static_cast<std::uint64_t>(l)));
        for (int s = 0; s < cfg.subspaces_per_dim; ++s)
            frames.push_back(random_frame(n, l, frame_rng));

        for (const auto& V : frames) {
            for (const auto& I : points) {
                std::vector<double> base = smooth_gradient(h, I, &verdict.sampling.fd_step);
                std::vector<double> c(static_cast<std::size_t>(l), 0.0);
                for (int a = 0; a < l; ++a) c[static_cast<std::size_t>(a)] = vec_dot(V[static_cast<std::size_t>(a)], base);

                // || proj_Lambda (grad h(I + V^T y) - grad h(I)) ||
                auto variation = [&](const std::vector<double>& y) {
                    std::vector<double> x = I;
                    for (int a = 0; a < l; ++a)
                        for (int j = 0; j < n; ++j)
                            x[static_cast<std::size_t>(j)] +=
                                y[static_cast<std::size_t>(a)] * V[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
                    auto gx = smooth_gradient(h, x, nullptr);
                    double s = 0.0;
                    for (int a = 0; a < l; ++a) {
                        double diff = vec_dot(V[static_cast<std::size_t>(a)], gx) - c[static_cast<std::size_t>(a)];
                        s += diff * diff;
                    }
                    return s;
                };
                auto fd_var_grad = [&](const std::vector<double>& y) {
                    double step = 1e-6 * (1.0 + vec_norm(y));
                    std::vector<double> g2(y.size(), 0.0);
                    std::vector<double> p = y;
                    for (std::size_t a = 0; a < y.size(); ++a) {
                        p[a] = y[a] + step;
                        double fp = variation(p);
                        p[a] = y[a] - step;
                        double fm = variation(p);
                        p[a] = y[a];
                        g2[a] = (fp - fm) / (2.0 * step);
                    }
                    return g2;
                };

                SplitMix64 rng(derive_seed(cfg.seed, 0xB22));
                for (double xi : xis) {
                    double threshold = C * std::pow(xi, p_list[static_cast<std::size_t>(l - 1)]);
                    double best = 0.0;
                    for (int i = 1; i <= cfg.eta_points; ++i) {
                        double eta = xi * i / cfg.eta_points;
                        double v;
                        if (l == 1) {
                            double pos[1] = {eta}, neg[1] = {-eta};
                            v = std::min(
                                std::sqrt(variation(std::vector<double>(pos, pos + 1))),
                                std::sqrt(variation(std::vector<double>(neg, neg + 1))));
                        } else {
                            v = std::sqrt(sphere_min_generic(variation, fd_var_grad, l,
                                                             eta, cfg.multistarts, rng));
                        }
                        best = std::max(best, v);
                    }
                    if (!(best > threshold)) {
                        verdict.accepted = false;
                        verdict.witness = SteepnessWitness{
                            V, std::nullopt, I, xi, best, threshold,
                            "restricted gradient variation at or below C xi^p"};
                        return verdict;
                    }
                }
            }
        }
    }
    return verdict;
}

SteepnessVerdict kolmogorov_check(const SmoothFunction& h,
                                  const std::vector<std::vector<double>>& points,
                                  double det_floor) {
    int n = h.n;
    if (n < 1 || !h.value) throw ConfigError("function is not evaluable");
    if (det_floor < 0.0) throw ConfigError("determinant floor must be >= 0");
    if (points.empty()) throw ConfigError("sample point set is empty");

    SteepnessVerdict verdict;
    verdict.kind = "kolmogorov";
    verdict.det_floor = det_floor;
    verdict.sampling = {};

    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> worst_point;
    for (const auto& I : points) {
        if (static_cast<int>(I.size()) != n)
            throw ConfigError("sample point length does not match dimension");
        auto hess = smooth_hessian(h, I, &verdict.sampling.fd_step);
        double d = abs_det(hess, n);
        if (d < worst) {
            worst = d;
            worst_point = I;
        }
    }
    verdict.accepted = worst >= det_floor;
    verdict.witness = SteepnessWitness{
        {}, std::nullopt, worst_point, 0.0, worst, det_floor,
        "smallest |det Hessian| over the sample points"};
    return verdict;
}

int m0(int n) {
    if (n < 1) throw ConfigError("dimension must be >= 1");
    return (n * n) / 2 + 2;
}

SteepConstants steep_constants_from_taylor(double varpi, double c_prime,
                                           double r, int n) {
    if (!(varpi > 0.0) || !(c_prime > 0.0) || !(r > 0.0))
        throw ConfigError("steepness constant inputs must be positive");
    return {varpi / 2.0, c_prime / 2.0, r, m0(n) - 1};
}

NekhoroshevExponents nekhoroshev_exponents(int n, double p, double beta) {
    if (n < 1) throw ConfigError("dimension must be >= 1");
    if (p < 1.0) throw ConfigError("steepness index must be >= 1");
    if (beta < 1.0) throw ConfigError("gevrey exponent must be >= 1");
    NekhoroshevExponents e;
    e.n = n;
    e.p = p;
    e.beta = beta;
    double a = 0.0, pw = 1.0;
    for (int i = 0; i < n; ++i) {
        a += pw;
        pw *= p;
    }
    e.a = a;
    e.radius_exponent = 1.0 / (2.0 * n * a);
    e.time_exponent = 1.0 / (2.0 * n * beta * a);
    e.threshold_exponent = 2.0 * n * a;
    return e;
}

double double_exp_exponent(double alpha, double tau) {
    if (alpha < 1.0) throw ConfigError("alpha must be >= 1");
    if (tau < 0.0) throw ConfigError("tau must be >= 0");
    return 1.0 / (alpha * (1.0 + tau));
}

double kam_exponent_bound(double alpha, int n) {
    if (alpha < 1.0) throw ConfigError("alpha must be >= 1");
    if (n < 1) throw ConfigError("dimension must be >= 1");
    return 1.0 / (alpha * n);
}

StabilityTimePrediction stability_time_prediction(double C, double u,
                                                  double r) {
    if (!(C > 0.0) || !(u > 0.0) || !(r > 0.0))
        throw ConfigError("prediction parameters must be positive");
    StabilityTimePrediction p;
    p.loglog_T = C * std::pow(r, -u);
    p.log_T = p.loglog_T < 709.0 ? std::exp(p.loglog_T)
                                 : std::numeric_limits<double>::infinity();
    p.T = p.log_T < 709.0 ? std::exp(p.log_T)
                          : std::numeric_limits<double>::infinity();
    return p;
}

GenericityScanResult genericity_scan(const GenericityScanConfig& cfg,
                                     const ActionPolynomial* base) {
    if (cfg.trials < 1) throw ConfigError("trial count must be >= 1");
    if (cfg.n < 2) throw ConfigError("scan dimension must be >= 2");
    if (cfg.degree < 2) throw ConfigError("scan degree must be >= 2");
    if (!(cfg.coeff_box > 0.0)) throw ConfigError("coefficient box must be positive");
    if (base) {
        if (base->dimension() != cfg.n)
            throw ConfigError("base polynomial dimension does not match scan");
        if (base->max_degree() > cfg.degree)
            throw ConfigError("base polynomial degree exceeds scan degree");
    }

    std::vector<double> rho_grid = cfg.rho_grid.empty()
                                       ? std::vector<double>{1e-3, 1e-2, 1e-1}
                                       : cfg.rho_grid;
    std::vector<double> c_grid = cfg.C_grid.empty()
                                     ? std::vector<double>{1e-3, 1e-2, 1e-1, 1.0}
                                     : cfg.C_grid;
    std::vector<double> delta_grid = cfg.delta_grid.empty()
                                         ? std::vector<double>{1e-2, 1e-1, 1.0}
                                         : cfg.delta_grid;

    GenericityScanResult result;
    result.trials = cfg.trials;
    result.seed = cfg.seed;

    const auto monomials = monomials_in_range(cfg.n, 2, cfg.degree);
    for (int t = 0; t < cfg.trials; ++t) {
        GenericityTrialRecord rec;
        rec.trial = t;
        rec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
        SplitMix64 rng(rec.seed);

        ActionPolynomial P(cfg.n, cfg.degree);
        if (base)
            for (const auto& [l, c] : base->table()) P.add_coefficient(l, c);
        for (const auto& l : monomials)
            P.add_coefficient(l, rng.uniform(-cfg.coeff_box, cfg.coeff_box));

        std::uint64_t attempt = 0;
        for (double rho : rho_grid) {
            for (double C : c_grid) {
                for (double delta : delta_grid) {
                    SamplingConfig scfg = cfg.sampling;
                    scfg.seed = derive_seed(rec.seed, ++attempt);
                    auto verdict = stably_steep_check(P, rho, C, delta, scfg);
                    if (verdict.accepted) {
                        rec.accepted = true;
                        rec.rho = rho;
                        rec.C = C;
                        rec.delta = delta;
                        break;
                    }
                }
                if (rec.accepted) break;
            }
            if (rec.accepted) break;
        }
        if (rec.accepted) ++result.accepted;
        result.records.push_back(rec);
    }
    result.acceptance_rate = static_cast<double>(result.accepted) / cfg.trials;
    return result;
}

}  // namespace toruslab
