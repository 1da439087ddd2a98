#include "toruslab/diophantine.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "toruslab/errors.hpp"

namespace toruslab {

int default_scan_depth(int n) {
    if (n <= 2) return 50;
    if (n == 3) return 20;
    return 8;
}

DiophantineReport gamma_estimate(const std::vector<double>& omega, double tau,
                                 int K, std::uint64_t budget) {
    int n = static_cast<int>(omega.size());
    if (n < 1) throw ConfigError("omega must be nonempty");
    bool all_zero = true;
    for (double w : omega)
        if (w != 0.0) all_zero = false;
    if (all_zero) throw ConfigError("omega must be nonzero");
    if (K < 1) throw ConfigError("scan depth K must be >= 1");
    if (tau < 0.0) throw ConfigError("tau must be >= 0");

    DiophantineReport rep;
    rep.omega = omega;
    rep.tau = tau;
    rep.K = K;
    rep.raw_min = -1.0;

    // Lexicographic walk over the l1 ball, canonical half (first nonzero
    // entry positive); the mirrored k gives the same product.
    MultiIndex k(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == n) {
            if (is_zero(k) || !is_canonical(k)) return;
            if (++rep.scanned_count > budget)
                throw BudgetExceededError("diophantine scan budget exceeded");
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += k[static_cast<std::size_t>(j)] * omega[static_cast<std::size_t>(j)];
            double product = std::abs(dot) * std::pow(static_cast<double>(l1_norm(k)), tau);
            if (rep.raw_min < 0.0 || product < rep.raw_min) {
                rep.raw_min = product;
                rep.argmin_k = k;
            }
            return;
        }
        for (int v = -rem; v <= rem; ++v) {
            k[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, rem - std::abs(v));
        }
        k[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, K);

    rep.gamma_est = std::min(1.0, rep.raw_min);
    return rep;
}

OmegaMembershipReport omega_set_membership(
    const std::vector<double>& omega,
    const std::vector<std::pair<double, double>>& box, double gamma,
    double tau, int K) {
    int n = static_cast<int>(omega.size());
    if (static_cast<int>(box.size()) != n)
        throw ConfigError("box dimension does not match omega");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw ConfigError("gamma must lie in (0, 1]");

    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        auto [lo, hi] = box[static_cast<std::size_t>(j)];
        if (lo > hi) throw ConfigError("box interval is empty");
        double w = omega[static_cast<std::size_t>(j)];
        if (w < lo || w > hi) throw ConfigError("omega lies outside the box");
        margin = std::min(margin, std::min(w - lo, hi - w));
    }

    OmegaMembershipReport rep;
    rep.boundary_margin = margin;
    rep.scan = gamma_estimate(omega, tau, K);
    rep.gamma_scan = rep.scan.gamma_est;
    rep.member = margin >= gamma && rep.gamma_scan >= gamma;
    return rep;
}

}  // namespace toruslab
