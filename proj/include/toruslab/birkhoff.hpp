#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "toruslab/action_polynomial.hpp"
#include "toruslab/fourier_taylor.hpp"

namespace toruslab {

struct BnfBudgets {
    // Working truncation orders; 0 means auto from the input series.
    int k_work = 0;
    int m_work = 0;
    // Divisors below this are resonant; 0 means auto from a frequency scan.
    double divisor_floor = 0.0;
    // Diophantine exponent used for the auto floor; negative means tau = n.
    double tau = -1.0;
    // Relative residual target for the oscillating part at each order.
    double tol_hom = 1e-10;
    int max_stage_a_iters = 64;
    int max_lie_terms = 128;
    std::size_t max_terms = 4'000'000;
};

struct SmallDivisorRecord {
    MultiIndex k;
    double divisor;
    int order;
};

struct NormalFormResult {
    int order_m = 0;
    std::vector<double> omega;
    // Frequency of the k = 0 linear part after the preliminary torus
    // correction; the homological equations at order >= 2 use this.
    std::vector<double> omega_effective;
    //  Birkhoff polynomial, degrees 2..m of the normalized angle average.
    ActionPolynomial H_m{1, 2};
    std::vector<FourierTaylorSeries> generators;
    FourierTaylorSeries transformed{1, 0, 0};
    // Max |coeff| per Taylor order of transformed - (omega_eff . I + H_m).
    std::map<int, double> remainder_norm_by_order;
    std::vector<SmallDivisorRecord> small_divisor_log;
    // Max oscillating |coeff| at orders <= order_m relative to input scale.
    double residual_max = 0.0;
    double input_scale = 0.0;
    int k_work = 0;
    int m_work = 0;
    double divisor_floor = 0.0;
};

// Solves omega . d_theta chi = g~ for the oscillating part of g.
// Throws SmallDivisorError when some |k.omega| fails to clear the floor.
FourierTaylorSeries homological_solve(
    const FourierTaylorSeries& g, const std::vector<double>& omega,
    double divisor_floor, std::vector<SmallDivisorRecord>* log = nullptr);

// exp(ad_chi) f summed until terms fall below tol, both truncated to
// (k_out, m_out).
FourierTaylorSeries lie_transform(const FourierTaylorSeries& f,
                                  const FourierTaylorSeries& chi, int k_out,
                                  int m_out, double tol,
                                  int max_lie_terms = 128,
                                  std::size_t max_terms = 4'000'000);

NormalFormResult bnf(const FourierTaylorSeries& H,
                     const std::vector<double>& omega, int m,
                     const BnfBudgets& budgets = {});

// A exp(-(2 L2 r)^(-1/(alpha (1 + tau)))).
double remainder_decay_bound(double A, double L2, double alpha, double tau,
                             double r);

// Optimal truncation order ~ (L2 ||I||)^(-1/(alpha (1 + tau))).
int stirling_order_choice(double L2, double norm_I, double alpha, double tau);

}  // namespace toruslab
