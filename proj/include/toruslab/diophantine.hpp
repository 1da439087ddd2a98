#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "toruslab/multi_index.hpp"

namespace toruslab {

struct DiophantineReport {
    std::vector<double> omega;
    double tau = 0.0;
    int K = 0;
    // min over scanned k != 0 of |k.omega| |k|^tau, capped at 1.
    double gamma_est = 0.0;
    double raw_min = 0.0;
    MultiIndex argmin_k;
    std::uint64_t scanned_count = 0;
};

// Scans 0 < |k|_1 <= K over the canonical half-space (first nonzero
// entry positive; the mirrored k gives the same product).
DiophantineReport gamma_estimate(const std::vector<double>& omega, double tau,
                                 int K, std::uint64_t budget = 50'000'000);

struct OmegaMembershipReport {
    bool member = false;
    // Distance from omega to the box boundary (nearest face).
    double boundary_margin = 0.0;
    // gamma_est from the accompanying scan.
    double gamma_scan = 0.0;
    DiophantineReport scan;
};

// member iff the boundary distance and the scanned gamma_est both clear
// gamma. Throws ConfigError when omega lies outside the box.
OmegaMembershipReport omega_set_membership(
    const std::vector<double>& omega,
    const std::vector<std::pair<double, double>>& box, double gamma,
    double tau, int K);

// Default scan depth by dimension: 50 / 20 / 8 for n = 2 / 3 / >= 4.
int default_scan_depth(int n);

}  // namespace toruslab
