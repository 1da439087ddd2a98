#pragma once

#include <string>
#include <vector>

#include "toruslab/fourier_taylor.hpp"

namespace toruslab {

struct PhasePoint {
    std::vector<double> theta;
    std::vector<double> I;
};

enum class Scheme { Auto, Splitting, ImplicitMidpoint };

// Real cos/sin form of a series, flattened for evaluation in tight loops.
// Each canonical-k entry contributes (A cos(k.theta) + B sin(k.theta)) I^l.
class CompiledHamiltonian {
  public:
    struct Term {
        MultiIndex k;
        MultiIndex l;
        double A = 0.0;
        double B = 0.0;
    };

    explicit CompiledHamiltonian(const FourierTaylorSeries& H);

    int dimension() const { return n_; }
    const std::vector<Term>& terms() const { return terms_; }

    // True when every k != 0 term has |l| = 0, so H = h(I) + f(theta)
    // splits exactly.
    bool decomposable() const { return decomposable_; }

    double value(const std::vector<double>& theta,
                 const std::vector<double>& I) const;
    void grad_theta(const std::vector<double>& theta,
                    const std::vector<double>& I,
                    std::vector<double>& out) const;
    void grad_I(const std::vector<double>& theta,
                const std::vector<double>& I,
                std::vector<double>& out) const;

    double max_grad_theta_bound() const;

  private:
    int n_ = 0;
    bool decomposable_ = true;
    std::vector<Term> terms_;
};

struct TrajectorySummary {
    std::vector<double> times;
    std::vector<PhasePoint> states;
    std::vector<double> energies;
    double energy_drift = 0.0;
    long long steps = 0;
    double dt = 0.0;
    Scheme scheme = Scheme::Auto;
    bool ok = true;
    std::string error;
};

// dt <= 0 selects min(0.1, 0.01 / max |d_theta H|).
double default_time_step(const CompiledHamiltonian& H, double dt = 0.0);

// Fixed-step symplectic integration: Strang splitting when the series
// decomposes, implicit midpoint otherwise. States are recorded every
// `checkpoint_stride` steps (0 keeps only endpoints). Angles evolve
// unwrapped and are reduced mod 2 pi in the recorded states.
TrajectorySummary integrate(const CompiledHamiltonian& H,
                            const PhasePoint& z0, double dt, long long steps,
                            Scheme scheme = Scheme::Auto,
                            long long checkpoint_stride = 0);

// One step of the scheme, exposed for tests; z is updated in place with
// unwrapped angles.
void step_splitting(const CompiledHamiltonian& H, double dt,
                    std::vector<double>& theta, std::vector<double>& I);
void step_implicit_midpoint(const CompiledHamiltonian& H, double dt,
                            std::vector<double>& theta,
                            std::vector<double>& I, double tol = 1e-13,
                            int max_iters = 50);

double circular_distance(double a, double b);

}  // namespace toruslab
