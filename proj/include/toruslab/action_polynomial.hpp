#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "toruslab/fourier_taylor.hpp"
#include "toruslab/multi_index.hpp"

namespace toruslab {

// Total degree ascending, then lexicographic: deterministic iteration.
struct MonomialOrder {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        int da = l1_norm(a), db = l1_norm(b);
        if (da != db) return da < db;
        return lex_less(a, b);
    }
};

// Real polynomial in the actions with degrees 2..m (no constant or linear
// part). Houses normal-form polynomials and steepness candidates.
class ActionPolynomial {
public:
    using Table = std::map<MultiIndex, double, MonomialOrder>;

    ActionPolynomial(int n, int m);

    int dimension() const { return n_; }
    int max_degree() const { return m_; }
    std::size_t term_count() const { return coeffs_.size(); }
    const Table& table() const { return coeffs_; }

    void set_coefficient(const MultiIndex& l, double c);
    void add_coefficient(const MultiIndex& l, double c);
    double coefficient(const MultiIndex& l) const;

    double max_abs_coeff() const;

    double evaluate(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const;
    // Row-major n*n matrix.
    std::vector<double> hessian(std::span<const double> x) const;

    // Degree-2 part, as an element of P2(n,2).
    ActionPolynomial quadratic_part() const;
    ActionPolynomial truncated(int m_out) const;

private:
    void check_index(const MultiIndex& l) const;

    int n_;
    int m_;
    Table coeffs_;
};

// sup over coefficient magnitudes of a - b: the ball norm used when
// sampling perturbations of a polynomial.
double coeff_sup_distance(const ActionPolynomial& a, const ActionPolynomial& b);

// Taylor polynomial of the angle-average of h at I = center, degrees 2..m.
// Exact binomial coefficient shifting, no numerical differentiation.
ActionPolynomial taylor_polynomial(const FourierTaylorSeries& h, std::span<const double> center,
                                   int m);

struct SampledTaylorResult {
    ActionPolynomial poly;
    // fd_step_by_order[p] is the central-difference step used for total
    // derivative order p (0 where unused).
    std::vector<double> fd_step_by_order;
};

// Taylor polynomial of a sampled smooth function by tensor-product central
// differences; steps are chosen per derivative order and reported.
SampledTaylorResult taylor_polynomial(const std::function<double(std::span<const double>)>& h,
                                      std::span<const double> center, int m);

}  // namespace toruslab
