#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace toruslab {

// Integer multi-index. Used both for Fourier indices k (any sign) and
// Taylor indices l (nonnegative).
using MultiIndex = std::vector<int>;

// |k| = |k_1| + ... + |k_n|, the l1 grading weight.
inline int l1_norm(const MultiIndex& k) {
    int s = 0;
    for (int v : k) s += v < 0 ? -v : v;
    return s;
}

inline MultiIndex negated(const MultiIndex& k) {
    MultiIndex r(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) r[i] = -k[i];
    return r;
}

inline bool is_zero(const MultiIndex& k) {
    for (int v : k) if (v != 0) return false;
    return true;
}

// Canonical representative of the {k, -k} pair: the first nonzero entry
// is positive. k = 0 is its own representative.
inline bool is_canonical(const MultiIndex& k) {
    for (int v : k) {
        if (v > 0) return true;
        if (v < 0) return false;
    }
    return true;
}

// Lexicographic comparison, used to make iteration orders deterministic.
inline bool lex_less(const MultiIndex& a, const MultiIndex& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

struct IndexPair {
    MultiIndex k;  // Fourier index
    MultiIndex l;  // Taylor index, entries >= 0

    bool operator==(const IndexPair& o) const { return k == o.k && l == o.l; }
};

struct IndexPairHash {
    std::size_t operator()(const IndexPair& p) const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        for (int v : p.k) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(v)) * 2654435761ull);
        mix(0xabcdefull);
        for (int v : p.l) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(v)) * 2654435761ull);
        return static_cast<std::size_t>(h);
    }
};

// Ordering (|l| ascending, |k| ascending, then lex on l, then lex on k):
// the deterministic dense iteration order used for serialization and scans.
inline bool index_pair_less(const IndexPair& a, const IndexPair& b) {
    int la = l1_norm(a.l), lb = l1_norm(b.l);
    if (la != lb) return la < lb;
    int ka = l1_norm(a.k), kb = l1_norm(b.k);
    if (ka != kb) return ka < kb;
    if (a.l != b.l) return lex_less(a.l, b.l);
    return lex_less(a.k, b.k);
}

// Enumerate all nonnegative multi-indices of length n with total degree
// exactly `deg` (lexicographic order).
inline void enumerate_degree(int n, int deg, std::vector<MultiIndex>& out) {
    MultiIndex cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == n - 1) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (int v = rem; v >= 0; --v) {
            cur[pos] = v;
            self(self, pos + 1, rem - v);
        }
    };
    if (n >= 1) rec(rec, 0, deg);
}

// All nonnegative multi-indices with total degree in [lo, hi].
inline std::vector<MultiIndex> monomials_in_range(int n, int lo, int hi) {
    std::vector<MultiIndex> out;
    for (int d = lo; d <= hi; ++d) enumerate_degree(n, d, out);
    return out;
}

}  // namespace toruslab
