#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toruslab/integrator.hpp"

namespace toruslab {

struct EscapeTimeRecord {
    double r = 0.0;
    std::vector<double> I_star;
    PhasePoint initial;
    // First time ||I - I_star|| crosses 2 r, linearly interpolated within
    // the crossing step; budget time when censored.
    double escape_time = 0.0;
    bool censored = false;
    double exit_norm = 0.0;
    double energy_drift = 0.0;
    long long steps = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
};

// Integrates from a random point on the radius-r action sphere around
// I_star (uniform angles) until ||I - I_star|| >= 2 r or the step budget
// runs out. Energy is checked every `energy_stride` steps.
EscapeTimeRecord escape_time(const CompiledHamiltonian& H,
                             const std::vector<double>& I_star, double r,
                             double dt, long long max_steps,
                             std::uint64_t seed,
                             long long energy_stride = 1000);

}  // namespace toruslab
