#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "toruslab/multi_index.hpp"

namespace toruslab {

// Truncated Fourier-Taylor series
//
//   f(theta, I) = sum_{k,l} c_{k,l} e^{i k.theta} I^l
//
// on T^n x R^n, with angles of period 2*pi. Coefficients are stored
// sparsely; a real-valued function satisfies c_{-k,l} = conj(c_{k,l}),
// which every operation preserves and which can be checked explicitly.
// Truncation bounds: |k| <= k_max (l1), |l| <= m_max (total degree).
class FourierTaylorSeries {
public:
    using Coeff = std::complex<double>;
    using Table = std::unordered_map<IndexPair, Coeff, IndexPairHash>;

    FourierTaylorSeries(int n, int k_max, int m_max);

    int dimension() const { return n_; }
    int k_max() const { return k_max_; }
    int m_max() const { return m_max_; }
    std::size_t term_count() const { return coeffs_.size(); }
    bool empty() const { return coeffs_.empty(); }
    const Table& table() const { return coeffs_; }

    // Raw accumulation of a single exponential term. No conjugate mirror is
    // added; callers are responsible for keeping the table real-symmetric.
    void add_term(const MultiIndex& k, const MultiIndex& l, Coeff c);

    // Adds c.e^{ik.theta} I^l plus the conjugate term at -k, so the result
    // stays real. For k = 0, c must be real.
    void add_exponential_pair(const MultiIndex& k, const MultiIndex& l, Coeff c);

    // Real builders: amp*cos(k.theta) I^l and amp*sin(k.theta) I^l.
    void add_cos(const MultiIndex& k, const MultiIndex& l, double amp);
    void add_sin(const MultiIndex& k, const MultiIndex& l, double amp);
    // Angle-independent monomial c * I^l.
    void add_action(const MultiIndex& l, double c);

    Coeff coefficient(const MultiIndex& k, const MultiIndex& l) const;

    // Indices sorted by (|l|, |k|, lex): the deterministic iteration order.
    std::vector<IndexPair> sorted_indices() const;

    double max_abs_coeff() const;
    bool is_real_symmetric(double tol = 1e-12) const;

    // Value of the finite sum at (theta, I); the imaginary part (which is
    // zero for real-symmetric tables up to roundoff) is discarded.
    double evaluate(std::span<const double> theta, std::span<const double> I) const;
    Coeff evaluate_complex(std::span<const double> theta, std::span<const double> I) const;

    FourierTaylorSeries theta_derivative(int axis) const;   // d/d theta_axis
    FourierTaylorSeries action_derivative(int axis) const;  // d/d I_axis

    // Sub-series selectors (keep the same truncation bounds).
    FourierTaylorSeries angle_average() const;              // k = 0 terms
    FourierTaylorSeries oscillating_part() const;           // k != 0 terms
    FourierTaylorSeries taylor_order_part(int order) const; // |l| == order
    // k != 0 terms with |l| <= max_order.
    FourierTaylorSeries oscillating_up_to_order(int max_order) const;

    FourierTaylorSeries truncated(int k_out, int m_out) const;

    // Removes terms with |c| <= tol. tol = 0 removes exact zeros only.
    void prune(double tol = 0.0);

    void scale(double s);

private:
    void check_index(const MultiIndex& k, const MultiIndex& l) const;

    int n_;
    int k_max_;
    int m_max_;
    Table coeffs_;
};

// Pointwise sum; truncations are merged to the max of the operands.
FourierTaylorSeries series_add(const FourierTaylorSeries& a, const FourierTaylorSeries& b);
FourierTaylorSeries series_sub(const FourierTaylorSeries& a, const FourierTaylorSeries& b);
FourierTaylorSeries series_scale(const FourierTaylorSeries& a, double s);

// Cauchy product truncated to |k| <= k_out, |l| <= m_out. Truncation
// budgets are explicit by design; there is no silent default.
FourierTaylorSeries series_mul(const FourierTaylorSeries& a, const FourierTaylorSeries& b,
                               int k_out, int m_out);

// {a,b} = d_theta a . d_I b - d_I a . d_theta b, truncated to the given
// budgets. Antisymmetric; {a,a} = 0 identically.
FourierTaylorSeries poisson_bracket(const FourierTaylorSeries& a, const FourierTaylorSeries& b,
                                    int k_out, int m_out);

}  // namespace toruslab
