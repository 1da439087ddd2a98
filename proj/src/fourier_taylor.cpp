#include "toruslab/fourier_taylor.hpp"

#include <algorithm>
#include <cmath>

namespace toruslab {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

void require_same_dimension(const FourierTaylorSeries& a, const FourierTaylorSeries& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("series dimension mismatch: " +
                                    std::to_string(a.dimension()) + " vs " +
                                    std::to_string(b.dimension()));
}

}  // namespace

FourierTaylorSeries::FourierTaylorSeries(int n, int k_max, int m_max)
    : n_(n), k_max_(k_max), m_max_(m_max) {
    if (n < 1) throw std::invalid_argument("series dimension must be >= 1");
    if (k_max < 0 || m_max < 0) throw std::invalid_argument("negative truncation bound");
}

void FourierTaylorSeries::check_index(const MultiIndex& k, const MultiIndex& l) const {
    if (static_cast<int>(k.size()) != n_ || static_cast<int>(l.size()) != n_)
        throw std::invalid_argument("index length does not match series dimension");
    for (int v : l)
        if (v < 0) throw std::invalid_argument("Taylor index must be nonnegative");
    if (l1_norm(k) > k_max_ || l1_norm(l) > m_max_)
        throw std::invalid_argument("index outside declared truncation bounds");
}

void FourierTaylorSeries::add_term(const MultiIndex& k, const MultiIndex& l, Coeff c) {
    check_index(k, l);
    if (c == Coeff{0.0, 0.0}) return;
    auto [it, inserted] = coeffs_.try_emplace(IndexPair{k, l}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Coeff{0.0, 0.0}) coeffs_.erase(it);
    }
}

void FourierTaylorSeries::add_exponential_pair(const MultiIndex& k, const MultiIndex& l, Coeff c) {
    if (is_zero(k)) {
        if (std::abs(c.imag()) > 0.0)
            throw std::invalid_argument("k = 0 coefficient of a real series must be real");
        add_term(k, l, c);
        return;
    }
    add_term(k, l, c);
    add_term(negated(k), l, std::conj(c));
}

void FourierTaylorSeries::add_cos(const MultiIndex& k, const MultiIndex& l, double amp) {
    if (is_zero(k)) {
        add_term(k, l, amp);
        return;
    }
    add_exponential_pair(k, l, Coeff{amp / 2.0, 0.0});
}

void FourierTaylorSeries::add_sin(const MultiIndex& k, const MultiIndex& l, double amp) {
    if (is_zero(k)) throw std::invalid_argument("sin term requires k != 0");
    // amp*sin(k.theta) = amp/(2i) e^{ik.theta} - amp/(2i) e^{-ik.theta}
    add_exponential_pair(k, l, Coeff{0.0, -amp / 2.0});
}

void FourierTaylorSeries::add_action(const MultiIndex& l, double c) {
    add_term(MultiIndex(static_cast<std::size_t>(n_), 0), l, c);
}

FourierTaylorSeries::Coeff FourierTaylorSeries::coefficient(const MultiIndex& k,
                                                            const MultiIndex& l) const {
    auto it = coeffs_.find(IndexPair{k, l});
    return it == coeffs_.end() ? Coeff{0.0, 0.0} : it->second;
}

std::vector<IndexPair> FourierTaylorSeries::sorted_indices() const {
    std::vector<IndexPair> idx;
    idx.reserve(coeffs_.size());
    for (const auto& [p, c] : coeffs_) idx.push_back(p);
    std::sort(idx.begin(), idx.end(), index_pair_less);
    return idx;
}

double FourierTaylorSeries::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [p, c] : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

bool FourierTaylorSeries::is_real_symmetric(double tol) const {
    for (const auto& [p, c] : coeffs_) {
        Coeff mirror = coefficient(negated(p.k), p.l);
        if (std::abs(mirror - std::conj(c)) > tol * std::max(1.0, std::abs(c))) return false;
    }
    return true;
}

FourierTaylorSeries::Coeff FourierTaylorSeries::evaluate_complex(
    std::span<const double> theta, std::span<const double> I) const {
    if (static_cast<int>(theta.size()) != n_ || static_cast<int>(I.size()) != n_)
        throw std::invalid_argument("evaluation point has wrong dimension");
    Coeff acc{0.0, 0.0};
    for (const auto& [p, c] : coeffs_) {
        double phase = 0.0;
        double mono = 1.0;
        for (int j = 0; j < n_; ++j) {
            phase += p.k[static_cast<std::size_t>(j)] * theta[static_cast<std::size_t>(j)];
            for (int q = 0; q < p.l[static_cast<std::size_t>(j)]; ++q)
                mono *= I[static_cast<std::size_t>(j)];
        }
        acc += c * std::polar(1.0, phase) * mono;
    }
    return acc;
}

double FourierTaylorSeries::evaluate(std::span<const double> theta,
                                     std::span<const double> I) const {
    return evaluate_complex(theta, I).real();
}

FourierTaylorSeries FourierTaylorSeries::theta_derivative(int axis) const {
    if (axis < 0 || axis >= n_) throw std::invalid_argument("derivative axis out of range");
    FourierTaylorSeries out(n_, k_max_, m_max_);
    for (const auto& [p, c] : coeffs_) {
        int kj = p.k[static_cast<std::size_t>(axis)];
        if (kj == 0) continue;
        out.add_term(p.k, p.l, c * kImag * static_cast<double>(kj));
    }
    return out;
}

FourierTaylorSeries FourierTaylorSeries::action_derivative(int axis) const {
    if (axis < 0 || axis >= n_) throw std::invalid_argument("derivative axis out of range");
    FourierTaylorSeries out(n_, k_max_, m_max_);
    for (const auto& [p, c] : coeffs_) {
        int lj = p.l[static_cast<std::size_t>(axis)];
        if (lj == 0) continue;
        MultiIndex l = p.l;
        l[static_cast<std::size_t>(axis)] -= 1;
        out.add_term(p.k, l, c * static_cast<double>(lj));
    }
    return out;
}

FourierTaylorSeries FourierTaylorSeries::angle_average() const {
    FourierTaylorSeries out(n_, k_max_, m_max_);
    for (const auto& [p, c] : coeffs_)
        if (is_zero(p.k)) out.add_term(p.k, p.l, c);
    return out;
}

FourierTaylorSeries FourierTaylorSeries::oscillating_part() const {
    FourierTaylorSeries out(n_, k_max_, m_max_);
    for (const auto& [p, c] : coeffs_)
        if (!is_zero(p.k)) out.add_term(p.k, p.l, c);
    return out;
}

FourierTaylorSeries FourierTaylorSeries::taylor_order_part(int order) const {
    FourierTaylorSeries out(n_, k_max_, m_max_);
    for (const auto& [p, c] : coeffs_)
        if (l1_norm(p.l) == order) out.add_term(p.k, p.l, c);
    return out;
}

FourierTaylorSeries FourierTaylorSeries::oscillating_up_to_order(int max_order) const {
    FourierTaylorSeries out(n_, k_max_, m_max_);
    for (const auto& [p, c] : coeffs_)
        if (!is_zero(p.k) && l1_norm(p.l) <= max_order) out.add_term(p.k, p.l, c);
    return out;
}

FourierTaylorSeries FourierTaylorSeries::truncated(int k_out, int m_out) const {
    FourierTaylorSeries out(n_, k_out, m_out);
    for (const auto& [p, c] : coeffs_)
        if (l1_norm(p.k) <= k_out && l1_norm(p.l) <= m_out) out.add_term(p.k, p.l, c);
    return out;
}

void FourierTaylorSeries::prune(double tol) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (std::abs(it->second) <= tol)
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

void FourierTaylorSeries::scale(double s) {
    if (s == 0.0) {
        coeffs_.clear();
        return;
    }
    for (auto& [p, c] : coeffs_) c *= s;
}

FourierTaylorSeries series_add(const FourierTaylorSeries& a, const FourierTaylorSeries& b) {
    require_same_dimension(a, b);
    FourierTaylorSeries out(a.dimension(), std::max(a.k_max(), b.k_max()),
                            std::max(a.m_max(), b.m_max()));
    for (const auto& p : a.sorted_indices()) out.add_term(p.k, p.l, a.coefficient(p.k, p.l));
    for (const auto& p : b.sorted_indices()) out.add_term(p.k, p.l, b.coefficient(p.k, p.l));
    return out;
}

FourierTaylorSeries series_sub(const FourierTaylorSeries& a, const FourierTaylorSeries& b) {
    return series_add(a, series_scale(b, -1.0));
}

FourierTaylorSeries series_scale(const FourierTaylorSeries& a, double s) {
    FourierTaylorSeries out = a;
    out.scale(s);
    return out;
}

FourierTaylorSeries series_mul(const FourierTaylorSeries& a, const FourierTaylorSeries& b,
                               int k_out, int m_out) {
    require_same_dimension(a, b);
    FourierTaylorSeries out(a.dimension(), k_out, m_out);
    const int n = a.dimension();
    // Iterating sorted index lists keeps the accumulation order, and hence
    // the floating-point result, independent of hash-table internals.
    auto ia = a.sorted_indices();
    auto ib = b.sorted_indices();
    MultiIndex k(static_cast<std::size_t>(n)), l(static_cast<std::size_t>(n));
    for (const auto& pa : ia) {
        const auto ca = a.coefficient(pa.k, pa.l);
        for (const auto& pb : ib) {
            bool ok = true;
            int ksum = 0, lsum = 0;
            for (int j = 0; j < n; ++j) {
                auto ju = static_cast<std::size_t>(j);
                k[ju] = pa.k[ju] + pb.k[ju];
                l[ju] = pa.l[ju] + pb.l[ju];
                ksum += std::abs(k[ju]);
                lsum += l[ju];
            }
            ok = ksum <= k_out && lsum <= m_out;
            if (!ok) continue;
            out.add_term(k, l, ca * b.coefficient(pb.k, pb.l));
        }
    }
    return out;
}

FourierTaylorSeries poisson_bracket(const FourierTaylorSeries& a, const FourierTaylorSeries& b,
                                    int k_out, int m_out) {
    require_same_dimension(a, b);
    const int n = a.dimension();
    FourierTaylorSeries out(a.dimension(), k_out, m_out);
    for (int j = 0; j < n; ++j) {
        out = series_add(out, series_mul(a.theta_derivative(j), b.action_derivative(j), k_out, m_out));
        out = series_sub(out, series_mul(a.action_derivative(j), b.theta_derivative(j), k_out, m_out));
    }
    // Cancellation between the two halves is exact for {a,a}; drop the
    // residual explicit zeros it leaves behind.
    auto trimmed = out.truncated(k_out, m_out);
    trimmed.prune(0.0);
    return trimmed;
}

}  // namespace toruslab
