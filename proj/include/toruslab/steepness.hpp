#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "toruslab/action_polynomial.hpp"

namespace toruslab {

struct SamplingConfig {
    int subspaces_per_dim = 256;
    int perturbations = 64;
    // xi grid is geometric in (delta/100, delta].
    int xi_points = 32;
    int eta_points = 64;
    int multistarts = 8;
    std::uint64_t seed = 0;
};

struct SamplingRecord {
    std::uint64_t seed = 0;
    int subspaces_per_dim = 0;
    int perturbations = 0;
    int xi_points = 0;
    int eta_points = 0;
    int multistarts = 0;
    // Step used for finite-difference Hessians, 0 when exact.
    double fd_step = 0.0;
};

struct SteepnessWitness {
    // Orthonormal basis of the violating subspace, rows of length n.
    std::vector<std::vector<double>> Lambda;
    // Perturbed polynomial (stably-steep checks).
    std::optional<ActionPolynomial> P;
    // Base point (steep-function and kolmogorov checks).
    std::vector<double> point;
    double xi = 0.0;
    // Measured quantity (maxmin value, gradient norm, |det|) against the
    // bound it failed; re-evaluating reproduces the violation.
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SteepnessVerdict {
    // "stably-steep-poly", "steep-function", or "kolmogorov".
    std::string kind;
    // False means a witness was found; true means no counterexample under
    // the recorded sampling, never a proof.
    bool accepted = false;
    // Constants in force, per kind.
    double rho = 0.0;
    double C = 0.0;
    double delta = 0.0;
    double kappa = 0.0;
    double det_floor = 0.0;
    std::vector<double> p_list;
    int m = 0;
    std::optional<SteepnessWitness> witness;
    SamplingRecord sampling;
};

// min over the unit sphere of Lambda, at radius eta, of the gradient norm
// of the restriction P|Lambda, maximised over an eta-grid of [0, xi]. The
// sphere min is exact for 1-dimensional Lambda and multistart local
// minimization otherwise.
double maxmin_value(const ActionPolynomial& P,
                    const std::vector<std::vector<double>>& Lambda,
                    double xi, int eta_points, int multistarts,
                    std::uint64_t seed);

std::vector<std::pair<double, double>> maxmin_profile(
    const ActionPolynomial& P,
    const std::vector<std::vector<double>>& Lambda,
    const std::vector<double>& xi_grid, int eta_points, int multistarts,
    std::uint64_t seed);

// Samples subspaces of each dimension 1..n-1, perturbations within
// coefficient sup-distance rho of P0 and a geometric xi-grid in (0, delta],
// looking for a violation of maxmin > C xi^(m-1). Deterministic
// adversarial candidates (isotropic directions of the quadratic part,
// restriction-nulling perturbations) run before the random draws.
SteepnessVerdict stably_steep_check(const ActionPolynomial& P0, double rho,
                                    double C, double delta,
                                    const SamplingConfig& cfg = {});

// Scalar function with optional analytic derivatives; missing entries fall
// back to central differences with step 1e-5 (1 + ||I||).
struct SmoothFunction {
    int n = 0;
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> gradient;
    // Row-major n*n.
    std::function<std::vector<double>(std::span<const double>)> hessian;
};

SmoothFunction make_smooth(const ActionPolynomial& p);
// omega . I + p, the integrable part with its linear term.
SmoothFunction make_smooth(const std::vector<double>& omega,
                           const ActionPolynomial& p);

// Steepness of h on the sample points: ||grad h|| >= kappa everywhere, and
// on sampled subspaces of dimension l the maxmin of the restricted
// gradient variation clears C xi^(p_list[l-1]) for xi in (0, delta].
SteepnessVerdict steep_function_check(const SmoothFunction& h,
                                      const std::vector<std::vector<double>>& points,
                                      double kappa, double C, double delta,
                                      const std::vector<double>& p_list,
                                      const SamplingConfig& cfg = {});

// Accepted iff |det Hessian| >= det_floor at every sample point; the
// witness carries the worst point.
SteepnessVerdict kolmogorov_check(const SmoothFunction& h,
                                  const std::vector<std::vector<double>>& points,
                                  double det_floor = 1e-12);

// Smallest order for which stable steepness is generic: floor(n^2/2 + 2).
int m0(int n);

struct SteepConstants {
    double kappa = 0.0;
    double C = 0.0;
    double delta = 0.0;
    int p = 0;
};

// (varpi/2, C'/2, r, m0(n) - 1): the steepness constants inherited on a
// radius-2r ball from a stably steep Taylor polynomial with gradient
// bound varpi.
SteepConstants steep_constants_from_taylor(double varpi, double c_prime,
                                           double r, int n);

struct NekhoroshevExponents {
    int n = 0;
    double p = 1.0;
    double beta = 1.0;
    double a = 0.0;               // 1 + p + ... + p^(n-1)
    double radius_exponent = 0.0; // 1/(2 n a)
    double time_exponent = 0.0;   // 1/(2 n beta a)
    double threshold_exponent = 0.0; // 2 n a
};

NekhoroshevExponents nekhoroshev_exponents(int n, double p, double beta);

// u = 1/(alpha (1 + tau)).
double double_exp_exponent(double alpha, double tau);

// Open upper bound 1/(alpha n) for the exponent of perpetually stable
// tori.
double kam_exponent_bound(double alpha, int n);

struct StabilityTimePrediction {
    double loglog_T = 0.0;
    double log_T = 0.0;  // inf when not representable
    double T = 0.0;      // inf when not representable
};

// log log T = C r^(-u).
StabilityTimePrediction stability_time_prediction(double C, double u,
                                                  double r);

struct GenericityScanConfig {
    int trials = 200;
    int n = 2;
    int degree = 4;
    double coeff_box = 1.0;
    std::uint64_t seed = 0;
    // Candidate constants tried easiest-first per trial; empty selects
    // built-in geometric grids.
    std::vector<double> rho_grid;
    std::vector<double> C_grid;
    std::vector<double> delta_grid;
    SamplingConfig sampling{48, 12, 12, 24, 4, 0};
};

struct GenericityTrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    bool accepted = false;
    // First passing triple when accepted.
    double rho = 0.0;
    double C = 0.0;
    double delta = 0.0;
};

struct GenericityScanResult {
    int trials = 0;
    int accepted = 0;
    double acceptance_rate = 0.0;
    std::vector<GenericityTrialRecord> records;
    std::uint64_t seed = 0;
};

// Draws coefficients uniformly from [-coeff_box, coeff_box] on top of
// `base` (zero when null) and hunts for any passing (rho, C, delta).
GenericityScanResult genericity_scan(const GenericityScanConfig& cfg,
                                     const ActionPolynomial* base = nullptr);

}  // namespace toruslab
